//! Determining equations for the point symmetries of the restricted
//! Einstein system, and their exact nullspace under a bounded-degree
//! polynomial ansatz.
//!
//! The five infinitesimals are taken polynomial of total degree at most
//! `d` in `(x, t, a, b, c)` with unknown rational coefficients. Applying
//! the prolonged ansatz field to each equation, substituting the on-shell
//! rules to fixpoint, clearing the monomial denominators and collecting
//! coefficients of the remaining monomials yields one sparse linear row
//! per monomial. The nullspace of that matrix is the symmetry algebra cut
//! to the ansatz class; degree one already recovers the full
//! seven-dimensional algebra, and degree two confirms that no additional
//! polynomial symmetries exist there.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::jetcalc::{
    apply_prolonged, prolong2, total_derivative, Direction, VectorField,
};
use crate::symexpr::{Atom, Dependent, Expr, JetKey, Monomial, Poly, Rat, SymError};
use crate::tables;

/// An ordered system of polynomial jet-space equations over `(x, t)` with
/// dependents `(a, b, c)`.
#[derive(Clone, Debug)]
pub struct PdeSystem {
    pub equations: Vec<Expr>,
}

impl PdeSystem {
    /// The restricted Einstein system, transcribed.
    pub fn system2() -> Self {
        PdeSystem {
            equations: tables::system2().to_vec(),
        }
    }
}

#[derive(thiserror::Error, Debug)]
pub enum DetError {
    #[error("equation {eq} cannot be solved for {key:?}: coefficient vanishes or is nonlinear")]
    NotSolvable { eq: usize, key: JetKey },
    #[error("on-shell rules failed to reach a fixpoint")]
    RulesDiverge,
    #[error("determining system is nonlinear in the unknowns (bug)")]
    Nonlinear,
    #[error("expected six equations, found {0}")]
    WrongShape(usize),
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// Solved leading derivatives of the system plus their total-derivative
/// images up to order three, closed under mutual substitution.
#[derive(Clone, Debug)]
pub struct OnShellRules {
    /// Rule right-hand sides as cleared fractions: key -> num / den, the
    /// denominator a monomial in the undifferentiated dependents.
    rules: BTreeMap<JetKey, (Poly, Monomial)>,
}

/// Ranking of the leading derivatives: which equation is solved for which
/// jet. Divisions by `b`, `a` and `c` are what produce the
/// monomial-weighted determining equations downstream.
const RANKING: [(usize, Dependent, (u8, u8)); 6] = [
    (0, Dependent::A, (2, 0)),
    (1, Dependent::C, (2, 0)),
    (2, Dependent::C, (0, 2)),
    (3, Dependent::A, (0, 2)),
    (5, Dependent::B, (2, 0)),
    (4, Dependent::C, (1, 1)),
];

impl OnShellRules {
    pub fn new(sys: &PdeSystem) -> Result<Self, DetError> {
        if sys.equations.len() != 6 {
            return Err(DetError::WrongShape(sys.equations.len()));
        }
        let mut raw: Vec<(JetKey, Expr)> = Vec::new();
        for (eq_index, dep, (i, j)) in RANKING {
            let key = JetKey::xt(dep, i, j).expect("order two");
            let atom = Atom::Jet(key);
            let eq = &sys.equations[eq_index];
            let coeff = eq.differentiate(&atom);
            if coeff.is_zero() || coeff.contains_atom(&atom) {
                return Err(DetError::NotSolvable { eq: eq_index, key });
            }
            // eq = coeff*key + rest  =>  key = -rest/coeff
            let rest = eq.sub(&coeff.mul(&Expr::atom(atom.clone())));
            let rhs = rest.neg().div(&coeff)?;
            raw.push((key, rhs));
        }
        // Total-derivative images up to order three, first come first
        // ruled.
        let base: Vec<(JetKey, Expr)> = raw.clone();
        for (key, rhs) in &base {
            for dir in [Direction::X, Direction::T] {
                let derived = key.derive(dir.index())?;
                if raw.iter().any(|(k, _)| *k == derived) {
                    continue;
                }
                let image = total_derivative(rhs, dir)?;
                raw.push((derived, image));
            }
        }
        // Close under substitution: no rule right side may keep a ruled
        // key.
        let keys: BTreeSet<JetKey> = raw.iter().map(|(k, _)| *k).collect();
        let mut closed: BTreeMap<JetKey, Expr> = raw.into_iter().collect();
        for _pass in 0..8 {
            let bindings: BTreeMap<Atom, Expr> = closed
                .iter()
                .map(|(k, v)| (Atom::Jet(*k), v.clone()))
                .collect();
            let mut dirty = false;
            let mut next = BTreeMap::new();
            for (k, v) in &closed {
                let mut mentions = false;
                v.for_each_atom_deep(&mut |a| {
                    if let Atom::Jet(j) = a {
                        if keys.contains(j) {
                            mentions = true;
                        }
                    }
                });
                if mentions {
                    dirty = true;
                    next.insert(*k, v.subst(&bindings)?);
                } else {
                    next.insert(*k, v.clone());
                }
            }
            closed = next;
            if !dirty {
                let rules = closed
                    .into_iter()
                    .map(|(k, v)| {
                        let den_mono = v.den().monomial_content();
                        let den_rest = v
                            .den()
                            .div_monomial(&den_mono)
                            .expect("content divides");
                        // Denominators are monomials in (a, b, c) by
                        // construction; fold any residual constant into
                        // the numerator.
                        let c = den_rest.as_rational().expect("monomial denominator");
                        let num = v.num().scale(&c.recip());
                        (k, (num, den_mono))
                    })
                    .collect();
                return Ok(OnShellRules { rules });
            }
        }
        Err(DetError::RulesDiverge)
    }

    pub fn for_system2() -> &'static OnShellRules {
        static CELL: std::sync::OnceLock<OnShellRules> = std::sync::OnceLock::new();
        CELL.get_or_init(|| OnShellRules::new(&PdeSystem::system2()).expect("rules solvable"))
    }

    pub fn rule(&self, key: &JetKey) -> Option<Expr> {
        let (num, den) = self.rules.get(key)?;
        Some(
            Expr::from_num_poly(num.clone())
                .div(&Expr::from_num_poly(Poly::term(den.clone(), Rat::one())))
                .expect("denominator nonzero"),
        )
    }

    pub fn keys(&self) -> impl Iterator<Item = &JetKey> {
        self.rules.keys()
    }

    /// Substitute the rules into an expression (generic path).
    pub fn reduce(&self, e: &Expr) -> Result<Expr, SymError> {
        let bindings: BTreeMap<Atom, Expr> = self
            .rules
            .keys()
            .map(|k| (Atom::Jet(*k), self.rule(k).expect("present")))
            .collect();
        e.subst(&bindings)
    }

    /// Bulk path for big polynomials: substitute every ruled jet and
    /// return the numerator over a single cleared monomial denominator.
    pub fn reduce_poly(&self, p: &Poly) -> (Poly, Monomial) {
        let mut contributions: Vec<(Poly, Monomial)> = Vec::with_capacity(p.len());
        for (mono, coeff) in p.terms() {
            let mut base: Vec<(Atom, u32)> = Vec::new();
            let mut num = Poly::constant(coeff.clone());
            let mut den = Monomial::unit();
            let mut plain = true;
            for (atom, e) in mono.atoms() {
                let ruled = match atom {
                    Atom::Jet(k) => self.rules.get(k),
                    _ => None,
                };
                match ruled {
                    Some((rnum, rden)) => {
                        plain = false;
                        num = num.mul(&rnum.pow(*e));
                        let (_, dpow) = rden.pow(*e);
                        let (_, merged) = den.mul(&dpow);
                        den = merged;
                    }
                    None => base.push((atom.clone(), *e)),
                }
            }
            if plain {
                contributions.push((Poly::term(mono.clone(), coeff.clone()), Monomial::unit()));
            } else {
                let mut base_mono = Monomial::unit();
                for (a, e) in base {
                    let (f, m) = Monomial::atom_pow(a, e);
                    debug_assert!(f.is_one());
                    let (_, merged) = base_mono.mul(&m);
                    base_mono = merged;
                }
                contributions.push((num.mul_term(&base_mono, &Rat::one()), den));
            }
        }
        // Common denominator.
        let mut lcm = Monomial::unit();
        for (_, d) in &contributions {
            let g = lcm.gcd(d);
            let extra = d.div(&g).expect("gcd divides");
            let (_, merged) = lcm.mul(&extra);
            lcm = merged;
        }
        let mut acc: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (num, den) in contributions {
            let scale = lcm.div(&den).expect("lcm divisible");
            for (m, c) in num.terms() {
                let (f, scaled) = m.mul(&scale);
                debug_assert!(f.is_one());
                let entry = acc.entry(scaled).or_insert_with(Rat::zero);
                *entry += c;
            }
        }
        (Poly::from_map(acc), lcm)
    }
}

/// The linear conditions on the unknown ansatz coefficients.
#[derive(Clone, Debug)]
pub struct AnsatzSystem {
    pub degree: u32,
    /// Ansatz monomials in `(x, t, a, b, c)`.
    pub monomials: Vec<Monomial>,
    /// Number of unknowns: five coefficient slots per monomial.
    pub unknowns: usize,
    /// Deduplicated sparse rows, each sorted by column.
    pub rows: Vec<Vec<(usize, Rat)>>,
}

fn ansatz_variables() -> [Atom; 5] {
    [
        Atom::coord("x"),
        Atom::coord("t"),
        Atom::Jet(JetKey::base(Dependent::A)),
        Atom::Jet(JetKey::base(Dependent::B)),
        Atom::Jet(JetKey::base(Dependent::C)),
    ]
}

fn monomials_up_to(degree: u32) -> Vec<Monomial> {
    let vars = ansatz_variables();
    let mut out: Vec<Poly> = vec![Poly::one()];
    let mut frontier: Vec<Poly> = vec![Poly::one()];
    for _ in 0..degree {
        let mut next = Vec::new();
        for f in &frontier {
            for v in &vars {
                let p = f.mul(&Poly::atom(v.clone()));
                if !out.contains(&p) && !next.contains(&p) {
                    next.push(p);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    let mut monos: Vec<Monomial> = out
        .iter()
        .map(|p| p.terms().next().unwrap().0.clone())
        .collect();
    monos.sort();
    monos
}

/// Fresh ansatz of the given total degree with symbolic unknowns.
pub fn ansatz(degree: u32) -> AnsatzSystem {
    let monomials = monomials_up_to(degree);
    let unknowns = 5 * monomials.len();
    AnsatzSystem {
        degree,
        monomials,
        unknowns,
        rows: Vec::new(),
    }
}

fn unknown_name(index: usize) -> String {
    format!("u{index:03}")
}

fn unknown_index(name: &str) -> Option<usize> {
    name.strip_prefix('u').and_then(|d| d.parse().ok())
}

/// The ansatz vector field with unknown coefficients `u{slot*M+m}`.
pub fn ansatz_field(system: &AnsatzSystem) -> VectorField {
    let m = system.monomials.len();
    let slot = |s: usize| {
        let mut acc = Poly::zero();
        for (j, mono) in system.monomials.iter().enumerate() {
            let u = Atom::param(&unknown_name(s * m + j));
            let (f, with_u) = mono.mul(&Monomial::atom(u));
            debug_assert!(f.is_one());
            acc = acc.add(&Poly::term(with_u, Rat::one()));
        }
        Expr::from_num_poly(acc)
    };
    VectorField::new(slot(0), slot(1), slot(2), slot(3), slot(4))
        .expect("ansatz coefficients are point-field coefficients")
}

/// Express a polynomial vector field as an unknown vector of the ansatz;
/// `None` when a coefficient falls outside the monomial basis.
pub fn field_to_vector(system: &AnsatzSystem, vf: &VectorField) -> Option<Vec<Rat>> {
    let m = system.monomials.len();
    let mut v = vec![Rat::zero(); system.unknowns];
    for (s, coeff) in vf.coeffs().iter().enumerate() {
        if !coeff.den_is_one() {
            return None;
        }
        for (mono, c) in coeff.num().terms() {
            let j = system.monomials.iter().position(|mm| mm == mono)?;
            v[s * m + j] = c.clone();
        }
    }
    Some(v)
}

/// Generate the determining rows: one per collected monomial of every
/// on-shell-reduced invariance residual.
pub fn determining_equations(
    sys: &PdeSystem,
    mut system: AnsatzSystem,
) -> Result<AnsatzSystem, DetError> {
    let rules = OnShellRules::new(sys)?;
    let field = ansatz_field(&system);
    let pf = prolong2(&field)?;
    let per_equation: Result<Vec<Vec<Vec<(usize, Rat)>>>, DetError> = sys
        .equations
        .par_iter()
        .map(|eq| {
            let residual = apply_prolonged(&pf, eq);
            debug_assert!(residual.den_is_one());
            let (cleared, _den) = rules.reduce_poly(residual.num());
            collect_rows(&cleared)
        })
        .collect();
    let mut seen: BTreeSet<Vec<(usize, Rat)>> = BTreeSet::new();
    for rows in per_equation? {
        for row in rows {
            seen.insert(row);
        }
    }
    system.rows = seen.into_iter().collect();
    Ok(system)
}

/// Split each term into its unknown factor and its monomial key; the
/// coefficient of every key is one linear row.
fn collect_rows(p: &Poly) -> Result<Vec<Vec<(usize, Rat)>>, DetError> {
    let mut rows: BTreeMap<Monomial, BTreeMap<usize, Rat>> = BTreeMap::new();
    for (mono, coeff) in p.terms() {
        let mut unknown: Option<usize> = None;
        let mut key: Vec<(Atom, u32)> = Vec::new();
        for (atom, e) in mono.atoms() {
            match atom {
                Atom::Param(name) => match unknown_index(name.as_str()) {
                    Some(idx) => {
                        if unknown.is_some() || *e > 1 {
                            return Err(DetError::Nonlinear);
                        }
                        unknown = Some(idx);
                    }
                    None => key.push((atom.clone(), *e)),
                },
                _ => key.push((atom.clone(), *e)),
            }
        }
        let idx = unknown.ok_or(DetError::Nonlinear)?;
        let mut key_mono = Monomial::unit();
        for (a, e) in key {
            let (f, m) = Monomial::atom_pow(a, e);
            debug_assert!(f.is_one());
            let (_, merged) = key_mono.mul(&m);
            key_mono = merged;
        }
        let row = rows.entry(key_mono).or_default();
        let entry = row.entry(idx).or_insert_with(Rat::zero);
        *entry += coeff;
    }
    Ok(rows
        .into_values()
        .map(|row| {
            let mut r: Vec<(usize, Rat)> = row.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            normalize_row(&mut r);
            r
        })
        .filter(|r| !r.is_empty())
        .collect())
}

fn normalize_row(row: &mut Vec<(usize, Rat)>) {
    row.sort_by_key(|(c, _)| *c);
    if let Some((_, lead)) = row.first() {
        let inv = lead.clone().recip();
        for (_, c) in row.iter_mut() {
            *c *= &inv;
        }
    }
}

/// A basis of the symmetry algebra cut to the ansatz class.
#[derive(Clone, Debug)]
pub struct SymmetryBasis {
    pub fields: Vec<VectorField>,
    pub vectors: Vec<Vec<Rat>>,
    pub dimension: usize,
}

/// Exact nullspace of the determining matrix, deterministic
/// reduced-row-echelon normalization.
pub fn solve_nullspace(system: &AnsatzSystem) -> SymmetryBasis {
    let pivots = rref(system.rows.clone(), system.unknowns);
    let pivot_cols: BTreeSet<usize> = pivots.iter().map(|(c, _)| *c).collect();
    let mut vectors = Vec::new();
    for free in 0..system.unknowns {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); system.unknowns];
        v[free] = Rat::one();
        for (pc, prow) in &pivots {
            let coeff = prow
                .iter()
                .find(|(c, _)| *c == free)
                .map(|(_, x)| x.clone());
            if let Some(x) = coeff {
                v[*pc] = -x;
            }
        }
        vectors.push(v);
    }
    let m = system.monomials.len();
    let fields = vectors
        .iter()
        .map(|v| {
            let slot = |s: usize| {
                let mut acc = Poly::zero();
                for (j, mono) in system.monomials.iter().enumerate() {
                    let c = &v[s * m + j];
                    if c.is_zero() {
                        continue;
                    }
                    acc = acc.add(&Poly::term(mono.clone(), c.clone()));
                }
                Expr::from_num_poly(acc)
            };
            VectorField::new(slot(0), slot(1), slot(2), slot(3), slot(4))
                .expect("polynomial coefficients")
        })
        .collect();
    SymmetryBasis {
        dimension: vectors.len(),
        fields,
        vectors,
    }
}

/// Incremental Gauss-Jordan over sparse rows; returns the pivot rows
/// keyed by pivot column, fully reduced against each other.
fn rref(rows: Vec<Vec<(usize, Rat)>>, _ncols: usize) -> Vec<(usize, Vec<(usize, Rat)>)> {
    let mut pivots: Vec<(usize, Vec<(usize, Rat)>)> = Vec::new();
    for row in rows {
        let mut current = row;
        loop {
            current = reduce_against(&current, &pivots);
            match current.first() {
                None => break,
                Some((lead_col, lead_coeff)) => {
                    if pivots.iter().any(|(c, _)| c == lead_col) {
                        // Shouldn't happen after reduction; defensive.
                        continue;
                    }
                    let inv = lead_coeff.clone().recip();
                    for (_, c) in current.iter_mut() {
                        *c *= &inv;
                    }
                    let col = *lead_col;
                    // Back-eliminate the new pivot column from existing rows.
                    let new_row = current.clone();
                    for (_, prow) in pivots.iter_mut() {
                        if let Some((_, factor)) =
                            prow.iter().find(|(c, _)| *c == col).cloned()
                        {
                            *prow = row_sub(prow, &new_row, &factor);
                        }
                    }
                    pivots.push((col, new_row));
                    break;
                }
            }
        }
    }
    pivots.sort_by_key(|(c, _)| *c);
    pivots
}

fn reduce_against(
    row: &[(usize, Rat)],
    pivots: &[(usize, Vec<(usize, Rat)>)],
) -> Vec<(usize, Rat)> {
    let mut current: Vec<(usize, Rat)> = row.to_vec();
    loop {
        let hit = current
            .iter()
            .find_map(|(c, x)| {
                pivots
                    .iter()
                    .find(|(pc, _)| pc == c)
                    .map(|(_, prow)| (prow.clone(), x.clone()))
            });
        match hit {
            Some((prow, factor)) => {
                current = row_sub(&current, &prow, &factor);
            }
            None => return current,
        }
    }
}

/// `row - factor * other`, sparse merge.
fn row_sub(row: &[(usize, Rat)], other: &[(usize, Rat)], factor: &Rat) -> Vec<(usize, Rat)> {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let mut i = row.iter().peekable();
    let mut j = other.iter().peekable();
    loop {
        match (i.peek(), j.peek()) {
            (None, None) => break,
            (Some(_), None) => out.push(i.next().unwrap().clone()),
            (None, Some((c, x))) => {
                out.push((*c, -(x * factor)));
                j.next();
            }
            (Some((ci, _)), Some((cj, _))) => {
                if ci < cj {
                    out.push(i.next().unwrap().clone());
                } else if cj < ci {
                    let (c, x) = j.next().unwrap();
                    out.push((*c, -(x * factor)));
                } else {
                    let (c, xi) = i.next().unwrap();
                    let (_, xj) = j.next().unwrap();
                    let v = xi - &(xj * factor);
                    if !v.is_zero() {
                        out.push((*c, v));
                    }
                }
            }
        }
    }
    out
}

/// Exact membership of a vector in the span of the basis vectors.
pub fn in_span(basis: &[Vec<Rat>], target: &[Rat]) -> bool {
    let mut rows: Vec<Vec<(usize, Rat)>> = basis
        .iter()
        .map(|v| {
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect()
        })
        .collect();
    let before = rref(rows.clone(), target.len()).len();
    rows.push(
        target
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect(),
    );
    let after = rref(rows, target.len()).len();
    before == after
}

/// True when the prolonged field annihilates every equation on shell.
pub fn verify_symmetry(sys: &PdeSystem, vf: &VectorField) -> Result<bool, DetError> {
    let rules = OnShellRules::new(sys)?;
    let pf = prolong2(vf)?;
    for eq in &sys.equations {
        let residual = apply_prolonged(&pf, eq);
        if residual.is_zero() {
            continue;
        }
        if !residual.den_is_one() {
            return Ok(false);
        }
        let (cleared, _) = rules.reduce_poly(residual.num());
        if !cleared.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// CLI-facing summary of a symmetry computation.
#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    pub degree: u32,
    pub unknowns: usize,
    pub rows: usize,
    pub dimension: usize,
    pub basis: Vec<[String; 5]>,
    /// Membership of each reference generator in the computed span.
    pub reference_membership: Vec<bool>,
}

pub fn symmetry_report(degree: u32) -> Result<SymmetryReport, DetError> {
    let sys = PdeSystem::system2();
    let filled = determining_equations(&sys, ansatz(degree))?;
    let basis = solve_nullspace(&filled);
    let membership = tables::generators()
        .iter()
        .map(|g| {
            field_to_vector(&filled, g)
                .map(|v| in_span(&basis.vectors, &v))
                .unwrap_or(false)
        })
        .collect();
    Ok(SymmetryReport {
        degree,
        unknowns: filled.unknowns,
        rows: filled.rows.len(),
        dimension: basis.dimension,
        basis: basis
            .fields
            .iter()
            .map(|f| {
                let c = f.coeffs();
                [
                    c[0].to_string(),
                    c[1].to_string(),
                    c[2].to_string(),
                    c[3].to_string(),
                    c[4].to_string(),
                ]
            })
            .collect(),
        reference_membership: membership,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::parse;

    #[test]
    fn onshell_base_rules() {
        let rules = OnShellRules::for_system2();
        let a_xx = JetKey::xt(Dependent::A, 2, 0).unwrap();
        assert_eq!(rules.rule(&a_xx).unwrap(), parse("b_tt").unwrap());
        let c_xx = JetKey::xt(Dependent::C, 2, 0).unwrap();
        assert_eq!(rules.rule(&c_xx).unwrap(), parse("-b_xt").unwrap());
        let c_tt = JetKey::xt(Dependent::C, 0, 2).unwrap();
        assert_eq!(rules.rule(&c_tt).unwrap(), parse("-a_xt").unwrap());
    }

    #[test]
    fn rules_are_closed() {
        let rules = OnShellRules::for_system2();
        let keys: Vec<JetKey> = rules.keys().copied().collect();
        for k in &keys {
            let rhs = rules.rule(k).unwrap();
            rhs.for_each_atom_deep(&mut |a| {
                if let Atom::Jet(j) = a {
                    assert!(!keys.contains(j), "rule for {k:?} mentions ruled {j:?}");
                }
            });
        }
        // 6 base rules + order-3 images.
        assert_eq!(keys.len(), 16);
    }

    #[test]
    fn reduce_poly_matches_generic_path() {
        let rules = OnShellRules::for_system2();
        let e = parse("a*a_xx + b*c_xt^2 - c*a_tt*x").unwrap();
        let generic = rules.reduce(&e).unwrap();
        let (num, den) = rules.reduce_poly(e.num());
        let bulk = Expr::from_num_poly(num)
            .div(&Expr::from_num_poly(Poly::term(den, Rat::one())))
            .unwrap();
        assert_eq!(generic, bulk);
    }

    #[test]
    fn known_generators_are_symmetries() {
        let sys = PdeSystem::system2();
        for vf in tables::generators() {
            assert!(verify_symmetry(&sys, vf).unwrap());
        }
    }

    #[test]
    fn truncated_field_is_not_a_symmetry() {
        // x d/dt alone (the shear without its fiber terms).
        let sys = PdeSystem::system2();
        let vf = VectorField::new(
            Expr::zero(),
            parse("x").unwrap(),
            Expr::zero(),
            Expr::zero(),
            Expr::zero(),
        )
        .unwrap();
        assert!(!verify_symmetry(&sys, &vf).unwrap());
    }

    #[test]
    fn degree_zero_dimension_two() {
        let report = symmetry_report(0).unwrap();
        assert_eq!(report.dimension, 2);
    }

    #[test]
    fn degree_one_recovers_the_algebra() {
        let report = symmetry_report(1).unwrap();
        assert_eq!(report.dimension, 7);
        assert!(report.reference_membership.iter().all(|m| *m));
    }

    #[test]
    fn ansatz_counts() {
        assert_eq!(ansatz(0).unknowns, 5);
        assert_eq!(ansatz(1).unknowns, 30);
        assert_eq!(ansatz(2).unknowns, 105);
    }

    #[test]
    fn nullspace_members_verify() {
        let sys = PdeSystem::system2();
        let filled = determining_equations(&sys, ansatz(1)).unwrap();
        let basis = solve_nullspace(&filled);
        for vf in &basis.fields {
            assert!(verify_symmetry(&sys, vf).unwrap());
        }
    }
}
