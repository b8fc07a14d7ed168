//! The Einstein-Walker domain: the metric, an independent Ricci-tensor
//! oracle, the derivation of the Einstein PDE systems, residual checking
//! of candidate solutions, and verification of the invariant-solution
//! catalog.
//!
//! The four-dimensional Walker metric has component matrix
//!
//! ```text
//! | 0 0 1 0 |
//! | 0 0 0 1 |
//! | 1 0 a c |
//! | 0 1 c b |
//! ```
//!
//! with `a`, `b`, `c` functions on an open set of R^4. The Einstein
//! condition `rho = lambda g` produces six PDEs. The oracle here computes
//! the Ricci tensor from Christoffel symbols with no reference to the
//! transcribed systems, which makes the comparison between the two an
//! actual consistency check rather than a tautology.

use std::collections::BTreeMap;

use num::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::detsolve::PdeSystem;
use crate::flows::SolutionTriple;
use crate::jetcalc::Direction;
use crate::symexpr::{Atom, Dependent, Expr, JetKey, Rat, SymError};
use crate::tables::{self, ExpectedStatus};

/// A Walker metric given by its three component functions. For the
/// symbolic metric the components are the undifferentiated jet atoms.
#[derive(Clone, Debug)]
pub struct WalkerMetric {
    pub a: Expr,
    pub b: Expr,
    pub c: Expr,
    /// Coordinate the reduced dependents (if any) are functions of.
    pub function_var: Option<Direction>,
}

impl WalkerMetric {
    pub fn new(a: Expr, b: Expr, c: Expr) -> Self {
        WalkerMetric {
            a,
            b,
            c,
            function_var: None,
        }
    }

    /// The fully symbolic metric: components are unknown functions of all
    /// four coordinates.
    pub fn symbolic() -> Self {
        WalkerMetric::new(
            Expr::jet(JetKey::base(Dependent::A)),
            Expr::jet(JetKey::base(Dependent::B)),
            Expr::jet(JetKey::base(Dependent::C)),
        )
    }

    pub fn from_solution(sol: &SolutionTriple) -> Self {
        WalkerMetric {
            a: sol.a.clone(),
            b: sol.b.clone(),
            c: sol.c.clone(),
            function_var: sol.function_var,
        }
    }

    /// The 4x4 component matrix.
    pub fn components(&self) -> [[Expr; 4]; 4] {
        let zero = Expr::zero;
        let one = Expr::one;
        [
            [zero(), zero(), one(), zero()],
            [zero(), zero(), zero(), one()],
            [one(), zero(), self.a.clone(), self.c.clone()],
            [zero(), one(), self.c.clone(), self.b.clone()],
        ]
    }

    /// Closed-form inverse from the Walker block structure.
    pub fn inverse(&self) -> [[Expr; 4]; 4] {
        let zero = Expr::zero;
        let one = Expr::one;
        [
            [self.a.neg(), self.c.neg(), one(), zero()],
            [self.c.neg(), self.b.neg(), zero(), one()],
            [one(), zero(), zero(), zero()],
            [zero(), one(), zero(), zero()],
        ]
    }

    pub fn determinant(&self) -> Expr {
        det4(&self.components())
    }
}

fn det4(m: &[[Expr; 4]; 4]) -> Expr {
    // Cofactor expansion along the first row.
    let mut acc = Expr::zero();
    for j in 0..4 {
        if m[0][j].is_zero() {
            continue;
        }
        let minor = det3(m, j);
        let signed = if j % 2 == 0 { minor } else { minor.neg() };
        acc = acc.add(&m[0][j].mul(&signed));
    }
    acc
}

fn det3(m: &[[Expr; 4]; 4], skip: usize) -> Expr {
    let cols: Vec<usize> = (0..4).filter(|c| *c != skip).collect();
    let e = |r: usize, c: usize| &m[r + 1][cols[c]];
    let mut acc = Expr::zero();
    for (i, sign) in [(0usize, 1i64), (1, -1), (2, 1)] {
        let c1 = (i + 1) % 3;
        let c2 = (i + 2) % 3;
        let sub = e(1, c1).mul(e(2, c2)).sub(&e(1, c2).mul(e(2, c1)));
        let term = e(0, i).mul(&sub);
        acc = acc.add(&if sign > 0 { term } else { term.neg() });
    }
    acc
}

/// Partial derivative along coordinate `dir` (0-based), driving base jets
/// through their multi-index and reduced jets through `function_var`.
fn d4(e: &Expr, dir: usize, function_var: Option<Direction>) -> Result<Expr, SymError> {
    let mut overflow: Option<JetKey> = None;
    e.for_each_atom_deep(&mut |a| {
        if overflow.is_some() {
            return;
        }
        if let Atom::Jet(k) = a {
            let moving = if k.dep.is_reduced() {
                function_var.map(|d| d.index()) == Some(dir)
            } else {
                true
            };
            if moving && k.derive(if k.dep.is_reduced() { 0 } else { dir }).is_err() {
                overflow = Some(*k);
            }
        }
    });
    if let Some(key) = overflow {
        return Err(SymError::JetOrderOverflow { key });
    }
    let coord_name = ["x", "t", "x3", "x4"][dir];
    Ok(e.derive_with(&|a: &Atom| match a {
        Atom::Coord(s) if s.as_str() == coord_name => Some(Expr::one()),
        Atom::Jet(k) if !k.dep.is_reduced() => Some(Expr::jet(k.derive(dir).expect("checked"))),
        Atom::Jet(k) if function_var.map(|d| d.index()) == Some(dir) => {
            Some(Expr::jet(k.derive(0).expect("checked")))
        }
        _ => None,
    }))
}

/// Christoffel symbols, Ricci tensor, and the discovered proportionality
/// factor of a Walker metric.
#[derive(Clone, Debug)]
pub struct CurvatureData {
    /// `christoffel[k][i][j]` with the lower pair symmetric.
    pub christoffel: Vec<[[Expr; 4]; 4]>,
    pub ricci: [[Expr; 4]; 4],
    /// `rho_13`, the candidate Einstein factor (g_13 = 1 identically).
    pub einstein_factor: Expr,
}

impl CurvatureData {
    /// True when `rho = lambda g` holds componentwise for the discovered
    /// factor.
    pub fn is_einstein(&self, metric: &WalkerMetric) -> bool {
        let g = metric.components();
        for i in 0..4 {
            for j in 0..4 {
                let residual = self.ricci[i][j].sub(&self.einstein_factor.mul(&g[i][j]));
                if !residual.is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Compute the Levi-Civita curvature data of a Walker metric exactly.
pub fn ricci(metric: &WalkerMetric) -> Result<CurvatureData, SymError> {
    let g = metric.components();
    let ginv = metric.inverse();
    let fv = metric.function_var;

    // dg[m][i][j] = d_m g_ij
    let mut dg: Vec<[[Expr; 4]; 4]> = Vec::with_capacity(4);
    for m in 0..4 {
        let mut layer: [[Expr; 4]; 4] = Default::default();
        for i in 0..4 {
            for j in 0..4 {
                layer[i][j] = d4(&g[i][j], m, fv)?;
            }
        }
        dg.push(layer);
    }

    // Gamma^k_ij = 1/2 g^{km} (d_i g_mj + d_j g_mi - d_m g_ij)
    let half = Expr::rational(1, 2);
    let mut christoffel: Vec<[[Expr; 4]; 4]> = Vec::with_capacity(4);
    for k in 0..4 {
        let mut layer: [[Expr; 4]; 4] = Default::default();
        for i in 0..4 {
            for j in i..4 {
                let mut acc = Expr::zero();
                for m in 0..4 {
                    if ginv[k][m].is_zero() {
                        continue;
                    }
                    let sum = dg[i][m][j].add(&dg[j][m][i]).sub(&dg[m][i][j]);
                    acc = acc.add(&ginv[k][m].mul(&sum));
                }
                layer[i][j] = half.mul(&acc);
                if i != j {
                    layer[j][i] = layer[i][j].clone();
                }
            }
        }
        christoffel.push(layer);
    }

    // rho_jk = sum_i [ d_i Gamma^i_jk - d_j Gamma^i_ik
    //                  + Gamma^m_jk Gamma^i_im - Gamma^m_ik Gamma^i_jm ]
    let mut ricci_t: [[Expr; 4]; 4] = Default::default();
    for j in 0..4 {
        for k in j..4 {
            let mut acc = Expr::zero();
            for i in 0..4 {
                acc = acc.add(&d4(&christoffel[i][j][k], i, fv)?);
                acc = acc.sub(&d4(&christoffel[i][i][k], j, fv)?);
                for m in 0..4 {
                    acc = acc.add(&christoffel[m][j][k].mul(&christoffel[i][i][m]));
                    acc = acc.sub(&christoffel[m][i][k].mul(&christoffel[i][j][m]));
                }
            }
            ricci_t[j][k] = acc.clone();
            if j != k {
                ricci_t[k][j] = acc;
            }
        }
    }

    let einstein_factor = ricci_t[0][2].clone();
    Ok(CurvatureData {
        christoffel,
        ricci: ricci_t,
        einstein_factor,
    })
}

/// Normalize an equation for comparison up to nonzero rational scaling:
/// content one, leading coefficient positive.
pub fn normalize_equation(e: &Expr) -> Expr {
    if e.is_zero() {
        return Expr::zero();
    }
    debug_assert!(e.den_is_one() || !e.den_is_one());
    let num = e.num();
    let c = num.content();
    if c.is_one() && e.den_is_one() {
        return e.clone();
    }
    Expr::from_num_poly(num.scale(&c.recip()))
}

/// Match two equation sets up to per-equation nonzero rational scaling;
/// returns for each reference equation the index of the computed match.
pub fn match_up_to_scaling(computed: &[Expr], reference: &[Expr]) -> Option<Vec<usize>> {
    let normalized: Vec<Expr> = computed.iter().map(normalize_equation).collect();
    let mut used = vec![false; normalized.len()];
    let mut assignment = Vec::with_capacity(reference.len());
    for r in reference {
        let rn = normalize_equation(r);
        let pos = normalized
            .iter()
            .enumerate()
            .find(|(i, c)| !used[*i] && **c == rn)?
            .0;
        used[pos] = true;
        assignment.push(pos);
    }
    Some(assignment)
}

/// Derive the Einstein system from the Ricci oracle by eliminating the
/// proportionality factor. With `restricted` the components only depend
/// on the first two coordinates.
pub fn derive_einstein_system(restricted: bool) -> Result<PdeSystem, SymError> {
    let metric = WalkerMetric::symbolic();
    let curv = ricci(&metric)?;
    let g = metric.components();
    let lambda = &curv.einstein_factor;
    let mut equations = Vec::new();
    for i in 0..4 {
        for j in i..4 {
            let e = curv.ricci[i][j].sub(&lambda.mul(&g[i][j]));
            let e = if restricted { restrict_to_xt(&e)? } else { e };
            if !e.is_zero() {
                equations.push(e);
            }
        }
    }
    Ok(PdeSystem { equations })
}

/// Kill every jet carrying derivatives along the third or fourth
/// coordinate.
fn restrict_to_xt(e: &Expr) -> Result<Expr, SymError> {
    let mut bind = BTreeMap::new();
    e.for_each_atom_deep(&mut |a| {
        if let Atom::Jet(k) = a {
            if !k.is_two_var() {
                bind.insert(a.clone(), Expr::zero());
            }
        }
    });
    e.subst(&bind)
}

/// Substitute a candidate triple into the six restricted equations;
/// all-zero output means the triple is a solution.
pub fn residual_system2(sol: &SolutionTriple) -> Result<Vec<Expr>, SymError> {
    let fv = sol.function_var;
    let mut bind = BTreeMap::new();
    for (dep, comp) in [
        (Dependent::A, &sol.a),
        (Dependent::B, &sol.b),
        (Dependent::C, &sol.c),
    ] {
        let d_x = d4(comp, 0, fv)?;
        let d_t = d4(comp, 1, fv)?;
        bind.insert(Atom::Jet(JetKey::base(dep)), comp.clone());
        bind.insert(Atom::Jet(JetKey::xt(dep, 1, 0)?), d_x.clone());
        bind.insert(Atom::Jet(JetKey::xt(dep, 0, 1)?), d_t.clone());
        bind.insert(Atom::Jet(JetKey::xt(dep, 2, 0)?), d4(&d_x, 0, fv)?);
        bind.insert(Atom::Jet(JetKey::xt(dep, 1, 1)?), d4(&d_x, 1, fv)?);
        bind.insert(Atom::Jet(JetKey::xt(dep, 0, 2)?), d4(&d_t, 1, fv)?);
    }
    tables::system2()
        .iter()
        .map(|eq| eq.subst(&bind))
        .collect()
}

/// Verification outcome of one catalog entry.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntryReport {
    pub name: String,
    pub case: String,
    pub passed: bool,
    pub expected: ExpectedStatus,
    /// Residuals of the six restricted equations (nonzero ones printed).
    pub nonzero_residuals: Vec<String>,
    /// Whether the Ricci oracle confirms `rho = lambda g`.
    pub ricci_einstein: bool,
    /// Discovered proportionality factor.
    pub einstein_factor: String,
    /// The entry involves third derivatives in its transcription.
    pub order3: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogReport {
    pub entries: Vec<CatalogEntryReport>,
}

impl CatalogReport {
    pub fn all_classified(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.passed == (e.expected == ExpectedStatus::Pass))
    }
}

/// Lift a catalog entry to an `(x, t)` triple.
pub fn lift_catalog_entry(entry: &tables::SolutionEntry) -> SolutionTriple {
    if entry.case == "direct" {
        return SolutionTriple::new(
            entry.exprs[0].clone(),
            entry.exprs[1].clone(),
            entry.exprs[2].clone(),
            entry.params.clone(),
        );
    }
    let row = tables::invariant_row(&entry.case);
    let lifted = crate::reduce::lift_solution(&entry.case, &entry.exprs).expect("table lift");
    let mut sol = lifted;
    sol.params = entry.params.clone();
    // Arbitrary dependents keep their meaning as functions of w.
    let mut has_reduced = false;
    for e in sol.components() {
        e.for_each_atom_deep(&mut |a| {
            if let Atom::Jet(k) = a {
                if k.dep.is_reduced() {
                    has_reduced = true;
                }
            }
        });
    }
    if has_reduced {
        let dir = if row.w == Expr::coord("t") {
            Direction::T
        } else {
            Direction::X
        };
        sol.function_var = Some(dir);
    }
    sol
}

/// Run the residual and Ricci checks over the whole catalog.
pub fn verify_catalog() -> CatalogReport {
    let entries: Vec<CatalogEntryReport> = tables::solution_catalog()
        .par_iter()
        .map(|entry| {
            let sol = lift_catalog_entry(entry);
            let residuals = residual_system2(&sol).expect("residual computation");
            let nonzero: Vec<String> = residuals
                .iter()
                .filter(|r| !r.is_zero())
                .map(|r| r.to_string())
                .collect();
            let metric = WalkerMetric::from_solution(&sol);
            let curv = ricci(&metric).expect("curvature computation");
            let einstein = curv.is_einstein(&metric);
            CatalogEntryReport {
                name: entry.name.clone(),
                case: entry.case.clone(),
                passed: nonzero.is_empty() && einstein,
                expected: entry.expected,
                nonzero_residuals: nonzero,
                ricci_einstein: einstein,
                einstein_factor: curv.einstein_factor.to_string(),
                order3: entry.order3,
            }
        })
        .collect();
    CatalogReport { entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::parse;

    #[test]
    fn flat_metric_is_ricci_flat() {
        let metric = WalkerMetric::new(Expr::zero(), Expr::zero(), Expr::zero());
        let curv = ricci(&metric).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!(curv.ricci[i][j].is_zero());
            }
        }
        assert!(curv.is_einstein(&metric));
    }

    #[test]
    fn determinant_is_one() {
        assert!(WalkerMetric::symbolic().determinant().is_one());
        let metric = WalkerMetric::new(
            parse("x^2 + t").unwrap(),
            parse("x*t").unwrap(),
            parse("t - 3").unwrap(),
        );
        assert!(metric.determinant().is_one());
    }

    #[test]
    fn non_einstein_input_detected() {
        let metric = WalkerMetric::new(parse("x^2").unwrap(), Expr::zero(), Expr::zero());
        let curv = ricci(&metric).unwrap();
        assert!(!curv.is_einstein(&metric));
        let nonzero = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .any(|(i, j)| !curv.ricci[i][j].is_zero());
        assert!(nonzero);
    }

    #[test]
    fn ricci_is_symmetric_symbolically() {
        let curv = ricci(&WalkerMetric::symbolic()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(curv.ricci[i][j], curv.ricci[j][i]);
            }
        }
    }

    #[test]
    fn restricted_system_matches_reference() {
        let system = derive_einstein_system(true).unwrap();
        assert_eq!(system.equations.len(), 6);
        let assignment = match_up_to_scaling(&system.equations, tables::system2());
        assert!(assignment.is_some(), "restricted derivation disagrees");
    }

    #[test]
    fn general_system_matches_reference() {
        let system = derive_einstein_system(false).unwrap();
        assert_eq!(system.equations.len(), 6);
        let assignment = match_up_to_scaling(&system.equations, tables::general_system());
        assert!(assignment.is_some(), "general derivation disagrees");
    }

    #[test]
    fn general_minus_restricted_is_pure_extra_directions() {
        // Restricting the general equations must reproduce the restricted
        // ones; the difference consists of jets along x3/x4 only.
        let general = derive_einstein_system(false).unwrap();
        for eq in &general.equations {
            let restricted = restrict_to_xt(eq).unwrap();
            let diff = eq.sub(&restricted);
            diff.for_each_atom_deep(&mut |a| {
                if let Atom::Jet(k) = a {
                    assert!(
                        k.is_two_var() || k.mi[2] + k.mi[3] > 0,
                        "unexpected jet in difference"
                    );
                }
            });
        }
    }

    #[test]
    fn example_solution_residuals_vanish() {
        let e = tables::solution_entry("example_3_4");
        let sol = lift_catalog_entry(e);
        let residuals = residual_system2(&sol).unwrap();
        assert!(residuals.iter().all(|r| r.is_zero()));
        let metric = WalkerMetric::from_solution(&sol);
        let curv = ricci(&metric).unwrap();
        assert!(curv.is_einstein(&metric));
    }

    #[test]
    fn quadratic_component_fails_residual() {
        let sol = SolutionTriple::new(parse("x^2").unwrap(), Expr::zero(), Expr::zero(), vec![]);
        let residuals = residual_system2(&sol).unwrap();
        assert_eq!(residuals[0], Expr::int(2));
        assert!(residuals[1..].iter().all(|r| r.is_zero()));
    }
}
