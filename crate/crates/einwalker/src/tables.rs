//! Transcribed reference data for the Einstein-Walker symmetry analysis.
//!
//! Everything in `tables/` is golden input: the six restricted and general
//! Einstein equations, the seven symmetry generators, the commutator
//! table, the adjoint matrices, the one-parameter groups, the similarity
//! invariants, the reduced systems, and the invariant-solution catalog.
//! The computational modules never read their own results from here; they
//! recompute and the comparison commands diff against these tables.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Deserialize;

use crate::jetcalc::VectorField;
use crate::symexpr::{parse, rat_i64, Expr, Rat};

fn parse_vec(strings: &[&str]) -> Vec<Expr> {
    strings.iter().map(|s| parse(s).expect("table entry parses")).collect()
}

/// The six equations of the restricted Einstein system (components
/// depending on `x` and `t` only), in the fixed transcription order.
pub fn system2() -> &'static [Expr] {
    static CELL: OnceLock<Vec<Expr>> = OnceLock::new();
    CELL.get_or_init(|| {
        let raw: Vec<String> =
            serde_json::from_str(include_str!("../tables/system2.json")).expect("valid json");
        raw.iter().map(|s| parse(s).expect("equation parses")).collect()
    })
}

/// The six equations of the general four-coordinate Einstein system.
pub fn general_system() -> &'static [Expr] {
    static CELL: OnceLock<Vec<Expr>> = OnceLock::new();
    CELL.get_or_init(|| {
        let raw: Vec<String> =
            serde_json::from_str(include_str!("../tables/general_system.json"))
                .expect("valid json");
        raw.iter().map(|s| parse(s).expect("equation parses")).collect()
    })
}

/// The seven symmetry generators X1..X7 as vector fields.
pub fn generators() -> &'static [VectorField] {
    static CELL: OnceLock<Vec<VectorField>> = OnceLock::new();
    CELL.get_or_init(|| {
        let raw: Vec<[String; 5]> =
            serde_json::from_str(include_str!("../tables/generators.json")).expect("valid json");
        raw.iter()
            .map(|c| {
                let v = parse_vec(&[&c[0], &c[1], &c[2], &c[3], &c[4]]);
                let mut it = v.into_iter();
                VectorField::new(
                    it.next().unwrap(),
                    it.next().unwrap(),
                    it.next().unwrap(),
                    it.next().unwrap(),
                    it.next().unwrap(),
                )
                .expect("generator is a point field")
            })
            .collect()
    })
}

/// Commutator table: `entry[i][j]` is the coefficient vector of
/// `[X_{i+1}, X_{j+1}]` over the ordered basis.
pub fn commutator_table() -> &'static Vec<Vec<Vec<Rat>>> {
    static CELL: OnceLock<Vec<Vec<Vec<Rat>>>> = OnceLock::new();
    CELL.get_or_init(|| {
        let raw: Vec<Vec<Vec<i64>>> =
            serde_json::from_str(include_str!("../tables/commutators.json")).expect("valid json");
        raw.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| v.into_iter().map(rat_i64).collect())
                    .collect()
            })
            .collect()
    })
}

/// The seven adjoint matrices; row `j` of matrix `i` expands the adjoint
/// image of `X_{j+1}` under `exp(s X_{i+1})` over the basis.
pub fn adjoint_matrices() -> &'static Vec<Vec<Vec<Expr>>> {
    static CELL: OnceLock<Vec<Vec<Vec<Expr>>>> = OnceLock::new();
    CELL.get_or_init(|| {
        let raw: Vec<Vec<Vec<String>>> =
            serde_json::from_str(include_str!("../tables/adjoints.json")).expect("valid json");
        raw.into_iter()
            .map(|m| {
                m.into_iter()
                    .map(|row| row.iter().map(|s| parse(s).expect("entry parses")).collect())
                    .collect()
            })
            .collect()
    })
}

/// The seven one-parameter groups as coordinate maps
/// `(x, t, a, b, c) -> (x~, t~, a~, b~, c~)` in the parameter `s`.
pub fn flow_maps() -> &'static Vec<Vec<Expr>> {
    static CELL: OnceLock<Vec<Vec<Expr>>> = OnceLock::new();
    CELL.get_or_init(|| {
        let raw: Vec<Vec<String>> =
            serde_json::from_str(include_str!("../tables/flows.json")).expect("valid json");
        raw.into_iter()
            .map(|row| row.iter().map(|s| parse(s).expect("map parses")).collect())
            .collect()
    })
}

/// One row of the similarity-invariant table.
#[derive(Clone, Debug)]
pub struct InvariantRow {
    pub id: String,
    /// Coefficients of the generator over X1..X7.
    pub generator: Vec<Rat>,
    /// Similarity variable as a function of (x, t).
    pub w: Expr,
    /// The three invariant combinations of (x, t, a, b, c).
    pub inv: [Expr; 3],
    /// Lift prefactors: a = pref_a * f(w), etc.
    pub pref: [Expr; 3],
    /// dw/dx and dw/dt rewritten over (x, t, w).
    pub wx: Expr,
    pub wt: Expr,
}

#[derive(Deserialize)]
struct RawInvariantRow {
    id: String,
    generator: Vec<i64>,
    w: String,
    inv_f: String,
    inv_h: String,
    inv_k: String,
    pref_a: String,
    pref_b: String,
    pref_c: String,
    wx: String,
    wt: String,
}

pub fn invariant_rows() -> &'static Vec<InvariantRow> {
    static CELL: OnceLock<Vec<InvariantRow>> = OnceLock::new();
    CELL.get_or_init(|| {
        let raw: Vec<RawInvariantRow> =
            serde_json::from_str(include_str!("../tables/invariants.json")).expect("valid json");
        raw.into_iter()
            .map(|r| InvariantRow {
                id: r.id,
                generator: r.generator.into_iter().map(rat_i64).collect(),
                w: parse(&r.w).expect("w parses"),
                inv: [
                    parse(&r.inv_f).expect("invariant parses"),
                    parse(&r.inv_h).expect("invariant parses"),
                    parse(&r.inv_k).expect("invariant parses"),
                ],
                pref: [
                    parse(&r.pref_a).expect("prefactor parses"),
                    parse(&r.pref_b).expect("prefactor parses"),
                    parse(&r.pref_c).expect("prefactor parses"),
                ],
                wx: parse(&r.wx).expect("wx parses"),
                wt: parse(&r.wt).expect("wt parses"),
            })
            .collect()
    })
}

pub fn invariant_row(id: &str) -> &'static InvariantRow {
    invariant_rows()
        .iter()
        .find(|r| r.id == id)
        .unwrap_or_else(|| panic!("no invariant row '{id}'"))
}

/// Reduced systems as displayed, keyed by case id ("x3", "1".."7").
pub fn reduced_systems() -> &'static BTreeMap<String, Vec<Expr>> {
    static CELL: OnceLock<BTreeMap<String, Vec<Expr>>> = OnceLock::new();
    CELL.get_or_init(|| {
        let raw: BTreeMap<String, Vec<String>> =
            serde_json::from_str(include_str!("../tables/reduced_systems.json"))
                .expect("valid json");
        raw.into_iter()
            .map(|(k, v)| (k, v.iter().map(|s| parse(s).expect("equation parses")).collect()))
            .collect()
    })
}

/// Verification status an entry of the solution catalog is expected to
/// reach.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedStatus {
    Pass,
    Discrepancy,
}

/// One transcribed invariant solution.
#[derive(Clone, Debug)]
pub struct SolutionEntry {
    pub name: String,
    /// "direct" for (x, t)-level entries, otherwise a reduction case id.
    pub case: String,
    /// For direct entries: the metric components. For reduced entries:
    /// (f, h, k) as functions of w, arbitrary dependents standing for
    /// themselves.
    pub exprs: [Expr; 3],
    pub params: Vec<String>,
    /// Whether f and h were transcribed as expressions in k and its
    /// derivatives (resolved at load time).
    pub via_k: bool,
    /// The transcription involves a third derivative of k.
    pub order3: bool,
    pub expected: ExpectedStatus,
}

#[derive(Deserialize)]
struct RawSolutionEntry {
    name: String,
    case: String,
    #[serde(default)]
    a: Option<String>,
    #[serde(default)]
    b: Option<String>,
    #[serde(default)]
    c: Option<String>,
    #[serde(default)]
    f: Option<String>,
    #[serde(default)]
    h: Option<String>,
    #[serde(default)]
    k: Option<String>,
    #[serde(default)]
    params: Vec<String>,
    #[serde(default)]
    via_k: bool,
    #[serde(default)]
    order3: bool,
    expected: String,
}

pub fn solution_catalog() -> &'static Vec<SolutionEntry> {
    static CELL: OnceLock<Vec<SolutionEntry>> = OnceLock::new();
    CELL.get_or_init(|| {
        let raw: Vec<RawSolutionEntry> =
            serde_json::from_str(include_str!("../tables/solutions.json")).expect("valid json");
        raw.into_iter()
            .map(|r| {
                let (e1, e2, e3) = if r.case == "direct" {
                    (r.a.unwrap(), r.b.unwrap(), r.c.unwrap())
                } else {
                    (r.f.unwrap(), r.h.unwrap(), r.k.unwrap())
                };
                let mut exprs = [
                    parse(&e1).expect("expression parses"),
                    parse(&e2).expect("expression parses"),
                    parse(&e3).expect("expression parses"),
                ];
                if r.via_k {
                    // f and h are written in terms of k and its w-derivatives;
                    // resolve them against the explicit k now.
                    use crate::symexpr::{Atom, Dependent, JetKey};
                    let w = Atom::coord("w");
                    let k = exprs[2].clone();
                    let k1 = k.differentiate(&w);
                    let k2 = k1.differentiate(&w);
                    let k3 = k2.differentiate(&w);
                    let mut bind = BTreeMap::new();
                    bind.insert(Atom::Jet(JetKey::base(Dependent::K)), k);
                    bind.insert(Atom::Jet(JetKey::xt(Dependent::K, 1, 0).unwrap()), k1);
                    bind.insert(Atom::Jet(JetKey::xt(Dependent::K, 2, 0).unwrap()), k2);
                    bind.insert(Atom::Jet(JetKey::xt(Dependent::K, 3, 0).unwrap()), k3);
                    exprs[0] = exprs[0].substitute(&bind).expect("k-substitution");
                    exprs[1] = exprs[1].substitute(&bind).expect("k-substitution");
                }
                SolutionEntry {
                    name: r.name,
                    case: r.case,
                    exprs,
                    params: r.params,
                    via_k: r.via_k,
                    order3: r.order3,
                    expected: match r.expected.as_str() {
                        "pass" => ExpectedStatus::Pass,
                        _ => ExpectedStatus::Discrepancy,
                    },
                }
            })
            .collect()
    })
}

pub fn solution_entry(name: &str) -> &'static SolutionEntry {
    solution_catalog()
        .iter()
        .find(|e| e.name == name)
        .unwrap_or_else(|| panic!("no catalog entry '{name}'"))
}

/// The displayed transport of the worked example by the fifth group.
pub fn transport_g5() -> &'static [Expr; 3] {
    static CELL: OnceLock<[Expr; 3]> = OnceLock::new();
    CELL.get_or_init(|| {
        let raw: BTreeMap<String, String> =
            serde_json::from_str(include_str!("../tables/transport_g5.json")).expect("valid json");
        [
            parse(&raw["a"]).expect("entry parses"),
            parse(&raw["b"]).expect("entry parses"),
            parse(&raw["c"]).expect("entry parses"),
        ]
    })
}

/// Template of one optimal-system representative: fixed coefficients plus
/// the slots occupied by the free parameters (named a, b, c in order).
#[derive(Clone, Debug, Deserialize)]
pub struct CaseTemplate {
    pub case: usize,
    pub fixed: Vec<(usize, i64)>,
    pub free: Vec<usize>,
}

pub fn optimal_cases() -> &'static Vec<CaseTemplate> {
    static CELL: OnceLock<Vec<CaseTemplate>> = OnceLock::new();
    CELL.get_or_init(|| {
        serde_json::from_str(include_str!("../tables/optimal_system.json")).expect("valid json")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_load() {
        assert_eq!(system2().len(), 6);
        assert_eq!(general_system().len(), 6);
        assert_eq!(generators().len(), 7);
        assert_eq!(commutator_table().len(), 7);
        assert_eq!(adjoint_matrices().len(), 7);
        assert_eq!(flow_maps().len(), 7);
        assert_eq!(invariant_rows().len(), 8);
        assert_eq!(reduced_systems().len(), 8);
        assert_eq!(optimal_cases().len(), 21);
        assert!(solution_catalog().len() >= 17);
    }

    #[test]
    fn invariant_w_consistency() {
        // wx and wt must be the actual derivatives of w after replacing
        // the w atom by its definition.
        use crate::symexpr::Atom;
        for row in invariant_rows() {
            let mut bind = BTreeMap::new();
            bind.insert(Atom::coord("w"), row.w.clone());
            let wx = row.wx.substitute(&bind).unwrap();
            let wt = row.wt.substitute(&bind).unwrap();
            assert_eq!(wx, row.w.differentiate(&Atom::coord("x")), "row {}", row.id);
            assert_eq!(wt, row.w.differentiate(&Atom::coord("t")), "row {}", row.id);
        }
    }

    #[test]
    fn via_k_entries_resolved() {
        let e = solution_entry("case6_type2");
        // f and h no longer mention k-jets.
        for expr in &e.exprs[..2] {
            let mut has_jet = false;
            expr.for_each_atom_deep(&mut |a| {
                if matches!(a, crate::symexpr::Atom::Jet(_)) {
                    has_jet = true;
                }
            });
            assert!(!has_jet);
        }
    }
}
