//! Jet-space bookkeeping: total derivatives, characteristics, and the
//! second prolongation of a point vector field.
//!
//! The base variables are `(x, t)` with dependents `(a, b, c)`. A point
//! vector field acts on that five-dimensional space; its second
//! prolongation extends the action to all derivative coordinates of order
//! at most two, which is what the invariance condition for a second-order
//! system consumes.

use std::collections::BTreeMap;

use crate::symexpr::{Atom, Dependent, Expr, JetKey, SymError};

/// Derivative direction for the restricted two-variable calculus.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    X,
    T,
}

impl Direction {
    pub fn index(self) -> usize {
        match self {
            Direction::X => 0,
            Direction::T => 1,
        }
    }

    pub fn coord(self) -> Atom {
        match self {
            Direction::X => Atom::coord("x"),
            Direction::T => Atom::coord("t"),
        }
    }
}

pub const BASE_DEPENDENTS: [Dependent; 3] = [Dependent::A, Dependent::B, Dependent::C];

/// An infinitesimal generator
/// `xi1 d/dx + xi2 d/dt + phi1 d/da + phi2 d/db + phi3 d/dc`
/// whose coefficients depend on `(x, t, a, b, c)` only.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorField {
    pub xi1: Expr,
    pub xi2: Expr,
    pub phi1: Expr,
    pub phi2: Expr,
    pub phi3: Expr,
}

#[derive(thiserror::Error, Debug)]
pub enum JetError {
    #[error("vector-field coefficient depends on a derivative coordinate: {atom}")]
    NotPointField { atom: Atom },
    #[error(transparent)]
    Sym(#[from] SymError),
}

impl VectorField {
    pub fn new(xi1: Expr, xi2: Expr, phi1: Expr, phi2: Expr, phi3: Expr) -> Result<Self, JetError> {
        let vf = VectorField {
            xi1,
            xi2,
            phi1,
            phi2,
            phi3,
        };
        for e in vf.coeffs() {
            let mut bad = None;
            e.for_each_atom_deep(&mut |a| {
                if bad.is_some() {
                    return;
                }
                match a {
                    Atom::Jet(k) if k.order() > 0 || k.dep.is_reduced() => {
                        bad = Some(a.clone());
                    }
                    _ => {}
                }
            });
            if let Some(atom) = bad {
                return Err(JetError::NotPointField { atom });
            }
        }
        Ok(vf)
    }

    pub fn zero() -> Self {
        VectorField {
            xi1: Expr::zero(),
            xi2: Expr::zero(),
            phi1: Expr::zero(),
            phi2: Expr::zero(),
            phi3: Expr::zero(),
        }
    }

    pub fn coeffs(&self) -> [&Expr; 5] {
        [&self.xi1, &self.xi2, &self.phi1, &self.phi2, &self.phi3]
    }

    pub fn phi(&self, dep: Dependent) -> &Expr {
        match dep.index() {
            0 => &self.phi1,
            1 => &self.phi2,
            _ => &self.phi3,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().iter().all(|e| e.is_zero())
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField {
            xi1: self.xi1.add(&other.xi1),
            xi2: self.xi2.add(&other.xi2),
            phi1: self.phi1.add(&other.phi1),
            phi2: self.phi2.add(&other.phi2),
            phi3: self.phi3.add(&other.phi3),
        }
    }

    pub fn scale(&self, c: &Expr) -> VectorField {
        VectorField {
            xi1: self.xi1.mul(c),
            xi2: self.xi2.mul(c),
            phi1: self.phi1.mul(c),
            phi2: self.phi2.mul(c),
            phi3: self.phi3.mul(c),
        }
    }

    /// First-order action on a function of `(x, t, a, b, c)`.
    pub fn apply(&self, e: &Expr) -> Expr {
        e.derive_with(&|a: &Atom| match a {
            Atom::Coord(s) if s.as_str() == "x" => Some(self.xi1.clone()),
            Atom::Coord(s) if s.as_str() == "t" => Some(self.xi2.clone()),
            Atom::Jet(k) if k.order() == 0 && !k.dep.is_reduced() => {
                Some(self.phi(k.dep).clone())
            }
            _ => None,
        })
    }
}

/// Total derivative `D_x` or `D_t`: the chain rule through every jet
/// coordinate. The result may contain jets one order higher than the
/// input; exceeding order three is reported as an error.
pub fn total_derivative(e: &Expr, dir: Direction) -> Result<Expr, SymError> {
    total_derivative_dir(e, dir.index())
}

/// Total derivative along any of the four base coordinates (0-based).
/// Reduced jets (`f`, `h`, `k`) are not moved by this operator; the
/// similarity machinery drives them through its own chain rule.
pub(crate) fn total_derivative_dir(e: &Expr, dir: usize) -> Result<Expr, SymError> {
    // Probe for order overflow first so the error is loud and precise.
    let mut overflow: Option<JetKey> = None;
    e.for_each_atom_deep(&mut |a| {
        if overflow.is_some() {
            return;
        }
        if let Atom::Jet(k) = a {
            if !k.dep.is_reduced() && k.derive(dir).is_err() {
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
        Atom::Jet(k) if !k.dep.is_reduced() => {
            Some(Expr::jet(k.derive(dir).expect("order checked above")))
        }
        _ => None,
    }))
}

/// The characteristic `Q_alpha = phi_alpha - xi1 u_x - xi2 u_t`.
pub fn characteristic(vf: &VectorField, dep: Dependent) -> Expr {
    let ux = Expr::jet(JetKey::xt(dep, 1, 0).expect("order 1"));
    let ut = Expr::jet(JetKey::xt(dep, 0, 1).expect("order 1"));
    vf.phi(dep)
        .sub(&vf.xi1.mul(&ux))
        .sub(&vf.xi2.mul(&ut))
}

/// Slot of a prolongation coefficient: `(dependent, (i, j))` with
/// `1 <= i + j <= 2`; the mixed slot is stored once as `(1, 1)`.
pub type Slot = (Dependent, (u8, u8));

pub const SLOTS: [(u8, u8); 5] = [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];

/// Second prolongation of a point vector field: the fifteen coefficients
/// (six of first order, nine of second order) indexed by slot.
#[derive(Clone, Debug)]
pub struct ProlongedField {
    pub base: VectorField,
    pub coeffs: BTreeMap<Slot, Expr>,
}

/// Compute the second prolongation through the characteristics:
/// `phi^J = D_J Q + xi1 u_{J,x} + xi2 u_{J,t}`.
pub fn prolong2(vf: &VectorField) -> Result<ProlongedField, SymError> {
    use rayon::prelude::*;
    let jobs: Vec<(Dependent, (u8, u8))> = BASE_DEPENDENTS
        .iter()
        .flat_map(|dep| SLOTS.iter().map(move |s| (*dep, *s)))
        .collect();
    let computed: Result<Vec<(Slot, Expr)>, SymError> = jobs
        .par_iter()
        .map(|(dep, slot)| {
            let q = characteristic(vf, *dep);
            let dq = match slot {
                (1, 0) => total_derivative(&q, Direction::X)?,
                (0, 1) => total_derivative(&q, Direction::T)?,
                (2, 0) => total_derivative(&total_derivative(&q, Direction::X)?, Direction::X)?,
                (1, 1) => total_derivative(&total_derivative(&q, Direction::T)?, Direction::X)?,
                (0, 2) => total_derivative(&total_derivative(&q, Direction::T)?, Direction::T)?,
                _ => unreachable!(),
            };
            let ux = Expr::jet(JetKey::xt(*dep, slot.0 + 1, slot.1)?);
            let ut = Expr::jet(JetKey::xt(*dep, slot.0, slot.1 + 1)?);
            let coeff = dq.add(&vf.xi1.mul(&ux)).add(&vf.xi2.mul(&ut));
            Ok(((*dep, *slot), coeff))
        })
        .collect();
    Ok(ProlongedField {
        base: vf.clone(),
        coeffs: computed?.into_iter().collect(),
    })
}

/// Apply the prolonged field as a first-order operator to an expression of
/// jet order at most two.
pub fn apply_prolonged(pf: &ProlongedField, e: &Expr) -> Expr {
    let mut acc = pf.base.apply(e);
    for ((dep, (i, j)), coeff) in &pf.coeffs {
        if coeff.is_zero() {
            continue;
        }
        let slot_atom = Atom::Jet(JetKey::xt(*dep, *i, *j).expect("slot order <= 2"));
        let de = e.differentiate(&slot_atom);
        if de.is_zero() {
            continue;
        }
        acc = acc.add(&coeff.mul(&de));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::parse;

    fn x_translation() -> VectorField {
        VectorField::new(
            Expr::one(),
            Expr::zero(),
            Expr::zero(),
            Expr::zero(),
            Expr::zero(),
        )
        .unwrap()
    }

    /// x d/dx - 2b d/db - c d/dc
    fn scaling_x3() -> VectorField {
        VectorField::new(
            parse("x").unwrap(),
            Expr::zero(),
            Expr::zero(),
            parse("-2*b").unwrap(),
            parse("-c").unwrap(),
        )
        .unwrap()
    }

    /// t d/dx + 2c d/da + b d/dc
    fn shear_x5() -> VectorField {
        VectorField::new(
            parse("t").unwrap(),
            Expr::zero(),
            parse("2*c").unwrap(),
            Expr::zero(),
            parse("b").unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn total_derivative_basics() {
        let a = parse("a").unwrap();
        assert_eq!(
            total_derivative(&a, Direction::X).unwrap(),
            parse("a_x").unwrap()
        );
        assert_eq!(
            total_derivative(&parse("x").unwrap(), Direction::T).unwrap(),
            Expr::zero()
        );
        let e = parse("-2*b - x*b_x").unwrap();
        assert_eq!(
            total_derivative(&e, Direction::X).unwrap(),
            parse("-3*b_x - x*b_xx").unwrap()
        );
    }

    #[test]
    fn order_overflow_is_loud() {
        let e = parse("a_xxt").unwrap();
        assert!(total_derivative(&e, Direction::X).is_err());
    }

    #[test]
    fn characteristics() {
        assert_eq!(
            characteristic(&x_translation(), Dependent::A),
            parse("-a_x").unwrap()
        );
        assert_eq!(
            characteristic(&scaling_x3(), Dependent::B),
            parse("-2*b - x*b_x").unwrap()
        );
    }

    #[test]
    fn prolong_translation_vanishes() {
        let pf = prolong2(&x_translation()).unwrap();
        assert!(pf.coeffs.values().all(|c| c.is_zero()));
    }

    #[test]
    fn prolong_scaling_coefficients() {
        let pf = prolong2(&scaling_x3()).unwrap();
        assert_eq!(
            pf.coeffs[&(Dependent::B, (1, 0))],
            parse("-3*b_x").unwrap()
        );
    }

    #[test]
    fn prolong_shear_coefficient() {
        let pf = prolong2(&shear_x5()).unwrap();
        assert_eq!(
            pf.coeffs[&(Dependent::A, (0, 1))],
            parse("2*c_t - a_x").unwrap()
        );
    }

    #[test]
    fn apply_prolonged_uniform_scaling() {
        // a d/da + b d/db + c d/dc prolongs to the identity on every jet.
        let vf = VectorField::new(
            Expr::zero(),
            Expr::zero(),
            parse("a").unwrap(),
            parse("b").unwrap(),
            parse("c").unwrap(),
        )
        .unwrap();
        let pf = prolong2(&vf).unwrap();
        let e = parse("a_xx - b_tt").unwrap();
        assert_eq!(apply_prolonged(&pf, &e), e);
    }

    #[test]
    fn translation_annihilates_constant_coefficients() {
        let pf = prolong2(&x_translation()).unwrap();
        let e = parse("a_xx - b_tt + c_x*c_t").unwrap();
        assert!(apply_prolonged(&pf, &e).is_zero());
    }

    #[test]
    fn total_derivatives_commute() {
        let e = parse("a*b_x + c_t*x + t*a_t").unwrap();
        let xt = total_derivative(&total_derivative(&e, Direction::X).unwrap(), Direction::T)
            .unwrap();
        let tx = total_derivative(&total_derivative(&e, Direction::T).unwrap(), Direction::X)
            .unwrap();
        assert_eq!(xt, tx);
    }

    #[test]
    fn rejects_jet_coefficients() {
        assert!(VectorField::new(
            parse("a_x").unwrap(),
            Expr::zero(),
            Expr::zero(),
            Expr::zero(),
            Expr::zero(),
        )
        .is_err());
    }
}
