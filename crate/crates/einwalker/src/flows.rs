//! One-parameter groups of the symmetry generators and their action on
//! solutions.
//!
//! Every generator in the algebra has coefficients affine in
//! `(x, t, a, b, c)`, so exponentiation reduces to the exact exponential
//! of a 6x6 augmented matrix. The resulting maps are closed-form: entries
//! polynomial in the group parameter `s` and in `exp(lambda*s)` factors.
//! The induced action on solution triples evaluates the old solution at
//! the inverse base point and pushes the components through the fiber
//! part; for a symmetry this always carries solutions to solutions, which
//! the residual checks downstream verify exactly.

use std::collections::BTreeMap;

use num::Zero;

use crate::jetcalc::{Direction, VectorField};
use crate::linexp::{exp_scaled, LinexpError, RatMat};
use crate::symexpr::{Atom, Dependent, Expr, JetKey, Rat, SymError};

/// Name of the group parameter.
pub const FLOW_PARAM: &str = "s";

#[derive(thiserror::Error, Debug)]
pub enum FlowError {
    #[error("coefficient is not affine in (x, t, a, b, c): {0}")]
    NonAffine(String),
    #[error(transparent)]
    Spectrum(#[from] LinexpError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error("flow does not project to the base: {what}")]
    NotFibered { what: String },
    #[error("solution transport needs explicit components (no free function symbols)")]
    NeedsExplicit,
    #[error("orbit step index {0} outside 1..=7")]
    BadGenerator(usize),
}

/// A one-parameter group as a coordinate map
/// `(x, t, a, b, c) -> (x~, t~, a~, b~, c~)` depending on the parameter s.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineFlow {
    pub map: [Expr; 5],
}

/// A candidate metric triple `a(x,t), b(x,t), c(x,t)` with free parameter
/// names. `function_var` marks entries whose components contain reduced
/// dependents standing for arbitrary functions of that coordinate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SolutionTriple {
    pub a: Expr,
    pub b: Expr,
    pub c: Expr,
    pub params: Vec<String>,
    pub function_var: Option<Direction>,
}

impl SolutionTriple {
    pub fn new(a: Expr, b: Expr, c: Expr, params: Vec<String>) -> Self {
        SolutionTriple {
            a,
            b,
            c,
            params,
            function_var: None,
        }
    }

    pub fn components(&self) -> [&Expr; 3] {
        [&self.a, &self.b, &self.c]
    }

    pub fn is_explicit(&self) -> bool {
        self.function_var.is_none()
    }
}

const VAR_NAMES: [&str; 5] = ["x", "t", "a", "b", "c"];

fn var_atom(i: usize) -> Atom {
    match i {
        0 => Atom::coord("x"),
        1 => Atom::coord("t"),
        2 => Atom::Jet(JetKey::base(Dependent::A)),
        3 => Atom::Jet(JetKey::base(Dependent::B)),
        _ => Atom::Jet(JetKey::base(Dependent::C)),
    }
}

/// Extract the affine decomposition `sum_j L[i][j] var_j + k[i]` of a
/// coefficient; every entry must be a rational constant.
fn affine_row(e: &Expr) -> Result<([Rat; 5], Rat), FlowError> {
    let mut linear: [Rat; 5] = [
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
    ];
    let mut constant = Rat::zero();
    if !e.den_is_one() {
        return Err(FlowError::NonAffine(e.to_string()));
    }
    'terms: for (mono, coeff) in e.num().terms() {
        if mono.is_unit() {
            constant = coeff.clone();
            continue;
        }
        if mono.degree() == 1 {
            let (atom, _) = mono.atoms().next().unwrap();
            for (j, _) in VAR_NAMES.iter().enumerate() {
                if *atom == var_atom(j) {
                    linear[j] = coeff.clone();
                    continue 'terms;
                }
            }
        }
        return Err(FlowError::NonAffine(e.to_string()));
    }
    Ok((linear, constant))
}

/// Exponentiate an affine generator into its one-parameter group.
pub fn exponentiate(vf: &VectorField) -> Result<AffineFlow, FlowError> {
    let mut aug: RatMat = vec![vec![Rat::zero(); 6]; 6];
    for (i, coeff) in vf.coeffs().iter().enumerate() {
        let (linear, constant) = affine_row(coeff)?;
        for j in 0..5 {
            aug[i][j] = linear[j].clone();
        }
        aug[i][5] = constant;
    }
    let m = exp_scaled(&aug, &Expr::param(FLOW_PARAM))?;
    let mut map: Vec<Expr> = Vec::with_capacity(5);
    for row in m.iter().take(5) {
        let mut acc = row[5].clone();
        for (j, entry) in row.iter().take(5).enumerate() {
            if entry.is_zero() {
                continue;
            }
            acc = acc.add(&entry.mul(&Expr::atom(var_atom(j))));
        }
        map.push(acc);
    }
    Ok(AffineFlow {
        map: map.try_into().expect("five components"),
    })
}

impl AffineFlow {
    /// The map with the group parameter replaced by an arbitrary
    /// expression.
    pub fn at(&self, param: &Expr) -> Result<[Expr; 5], SymError> {
        let mut bind = BTreeMap::new();
        bind.insert(Atom::param(FLOW_PARAM), param.clone());
        let mut out = Vec::with_capacity(5);
        for e in &self.map {
            out.push(e.subst(&bind)?);
        }
        Ok(out.try_into().expect("five components"))
    }

    /// Composition `self(s) . other(s')`: apply `other`, then `self`.
    pub fn compose(&self, other: &[Expr; 5]) -> Result<[Expr; 5], SymError> {
        let mut bind = BTreeMap::new();
        for (j, e) in other.iter().enumerate() {
            bind.insert(var_atom(j), e.clone());
        }
        let mut out = Vec::with_capacity(5);
        for e in &self.map {
            out.push(e.subst(&bind)?);
        }
        Ok(out.try_into().expect("five components"))
    }

    pub fn is_identity_at_zero(&self) -> bool {
        let at0 = match self.at(&Expr::zero()) {
            Ok(m) => m,
            Err(_) => return false,
        };
        at0.iter()
            .enumerate()
            .all(|(j, e)| *e == Expr::atom(var_atom(j)))
    }

    /// d/ds at s = 0, componentwise: recovers the generator.
    pub fn derivative_at_zero(&self) -> Result<VectorField, FlowError> {
        let s = Atom::param(FLOW_PARAM);
        let mut bind = BTreeMap::new();
        bind.insert(s.clone(), Expr::zero());
        let mut comps = Vec::with_capacity(5);
        for e in &self.map {
            comps.push(e.differentiate(&s).subst(&bind)?);
        }
        let mut it = comps.into_iter();
        Ok(VectorField::new(
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
        )
        .map_err(|e| FlowError::NonAffine(e.to_string()))?)
    }
}

/// Push a solution along the group: evaluate the old components at the
/// inverse base point and apply the fiber map. The result keeps the group
/// parameter symbolic.
pub fn act_on_solution(flow: &AffineFlow, sol: &SolutionTriple) -> Result<SolutionTriple, FlowError> {
    if !sol.is_explicit() {
        return Err(FlowError::NeedsExplicit);
    }
    let s_param = Expr::param(FLOW_PARAM);
    let inverse = flow.at(&s_param.neg())?;

    // The base part of the map must only involve (x, t, s).
    for e in &inverse[..2] {
        let mut bad = None;
        e.for_each_atom_deep(&mut |a| {
            if bad.is_none() && matches!(a, Atom::Jet(_)) {
                bad = Some(a.clone());
            }
        });
        if let Some(atom) = bad {
            return Err(FlowError::NotFibered {
                what: format!("base image depends on {atom}"),
            });
        }
    }
    // The fiber part must only involve (a, b, c, s).
    for e in &flow.map[2..] {
        let mut bad = None;
        e.for_each_atom_deep(&mut |a| {
            if bad.is_none() && matches!(a, Atom::Coord(_)) && *a != Atom::param(FLOW_PARAM) {
                bad = Some(a.clone());
            }
        });
        if let Some(atom) = bad {
            return Err(FlowError::NotFibered {
                what: format!("fiber image depends on {atom}"),
            });
        }
    }

    // Old components evaluated at the pulled-back base point.
    let mut pullback = BTreeMap::new();
    pullback.insert(Atom::coord("x"), inverse[0].clone());
    pullback.insert(Atom::coord("t"), inverse[1].clone());
    let old = [
        sol.a.subst(&pullback)?,
        sol.b.subst(&pullback)?,
        sol.c.subst(&pullback)?,
    ];

    let mut fiber_bind = BTreeMap::new();
    fiber_bind.insert(var_atom(2), old[0].clone());
    fiber_bind.insert(var_atom(3), old[1].clone());
    fiber_bind.insert(var_atom(4), old[2].clone());
    let a = flow.map[2].subst(&fiber_bind)?;
    let b = flow.map[3].subst(&fiber_bind)?;
    let c = flow.map[4].subst(&fiber_bind)?;

    let mut params = sol.params.clone();
    if !params.iter().any(|p| p == FLOW_PARAM) {
        params.push(FLOW_PARAM.to_string());
    }
    Ok(SolutionTriple {
        a,
        b,
        c,
        params,
        function_var: None,
    })
}

/// Transport a solution along a word of group elements, left to right,
/// with rational parameters.
pub fn orbit(sol: &SolutionTriple, word: &[(usize, Rat)]) -> Result<SolutionTriple, FlowError> {
    let mut current = sol.clone();
    for (index, param) in word {
        if !(1..=7).contains(index) {
            return Err(FlowError::BadGenerator(*index));
        }
        let flow = exponentiate(&crate::tables::generators()[index - 1])?;
        let moved = act_on_solution(&flow, &current)?;
        let mut bind = BTreeMap::new();
        bind.insert(Atom::param(FLOW_PARAM), Expr::constant(param.clone()));
        current = SolutionTriple {
            a: moved.a.subst(&bind)?,
            b: moved.b.subst(&bind)?,
            c: moved.c.subst(&bind)?,
            params: sol.params.clone(),
            function_var: None,
        };
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{parse, rat_i64};
    use crate::tables;

    #[test]
    fn exponentiate_matches_reference_maps() {
        for (i, (vf, expected)) in tables::generators()
            .iter()
            .zip(tables::flow_maps())
            .enumerate()
        {
            let flow = exponentiate(vf).unwrap();
            for (j, e) in flow.map.iter().enumerate() {
                assert_eq!(e, &expected[j], "generator {} component {}", i + 1, j);
            }
        }
    }

    #[test]
    fn identity_at_zero_and_derivative() {
        for vf in tables::generators() {
            let flow = exponentiate(vf).unwrap();
            assert!(flow.is_identity_at_zero());
            let back = flow.derivative_at_zero().unwrap();
            assert_eq!(&back, vf);
        }
    }

    #[test]
    fn group_law() {
        let s = Expr::param(FLOW_PARAM);
        let u = Expr::param("u");
        for vf in tables::generators() {
            let flow = exponentiate(vf).unwrap();
            let at_u = flow.at(&u).unwrap();
            let composed = flow.compose(&at_u).unwrap();
            let direct = flow.at(&s.add(&u)).unwrap();
            assert_eq!(composed, direct);
        }
    }

    #[test]
    fn scalar_multiple_reparametrizes() {
        // Flow of 2*X1 at s equals flow of X1 at 2s.
        let x1 = &tables::generators()[0];
        let doubled = x1.scale(&Expr::int(2));
        let f2 = exponentiate(&doubled).unwrap();
        let f1 = exponentiate(x1).unwrap();
        let two_s = Expr::param(FLOW_PARAM).mul_rat(&rat_i64(2));
        assert_eq!(f2.map, f1.at(&two_s).unwrap());
    }

    #[test]
    fn transport_shift_and_scale() {
        let sol = SolutionTriple::new(
            parse("x^2 + t").unwrap(),
            parse("x*t").unwrap(),
            parse("t^2").unwrap(),
            vec![],
        );
        // g1: arguments shift x -> x - s.
        let g1 = exponentiate(&tables::generators()[0]).unwrap();
        let moved = act_on_solution(&g1, &sol).unwrap();
        assert_eq!(moved.a, parse("(x - s)^2 + t").unwrap());
        // g7: components scale by e^s.
        let g7 = exponentiate(&tables::generators()[6]).unwrap();
        let scaled = act_on_solution(&g7, &sol).unwrap();
        assert_eq!(scaled.b, parse("x*t*exp(s)").unwrap());
    }

    #[test]
    fn orbit_word_composition() {
        let sol = SolutionTriple::new(
            parse("x").unwrap(),
            parse("t").unwrap(),
            Expr::zero(),
            vec![],
        );
        // Two x-translations compose additively.
        let two_steps = orbit(&sol, &[(1, rat_i64(1)), (1, rat_i64(2))]).unwrap();
        let one_step = orbit(&sol, &[(1, rat_i64(3))]).unwrap();
        assert_eq!(two_steps, one_step);
        // Empty word is the identity.
        assert_eq!(orbit(&sol, &[]).unwrap(), sol);
    }

    #[test]
    fn rejects_non_affine() {
        let vf = VectorField::new(
            parse("x^2").unwrap(),
            Expr::zero(),
            Expr::zero(),
            Expr::zero(),
            Expr::zero(),
        )
        .unwrap();
        assert!(matches!(exponentiate(&vf), Err(FlowError::NonAffine(_))));
    }
}
