//! Canonical rational expressions.
//!
//! An [`Expr`] is a reduced fraction of two polynomials over atoms:
//! `gcd(num, den) = 1`, the denominator's leading coefficient is `+1`, and
//! any common exponential factor has been moved out of the denominator so
//! that the maximal `exp` inner of the denominator is zero. Under those
//! invariants structural equality coincides with equality of the
//! represented rational functions (with `ln`/`exp` atoms of distinct inner
//! expressions treated as independent transcendentals).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::symexpr::atom::{Atom, JetKey};
use crate::symexpr::gcd::poly_gcd;
use crate::symexpr::poly::{exp_normalize, rat_i64, Monomial, Poly, Rat};
use crate::symexpr::SymError;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Expr {
    num: Poly,
    den: Poly,
}

impl Expr {
    pub fn zero() -> Self {
        Expr {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Expr {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        Expr {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn int(n: i64) -> Self {
        Expr::constant(rat_i64(n))
    }

    pub fn rational(n: i64, d: i64) -> Self {
        Expr::constant(Rat::new(n.into(), d.into()))
    }

    pub fn atom(a: Atom) -> Self {
        match a {
            Atom::Exp(inner) => Expr::exp(inner.as_ref().clone()),
            other => Expr {
                num: Poly::atom(other),
                den: Poly::one(),
            },
        }
    }

    pub fn coord(name: &str) -> Self {
        Expr::atom(Atom::coord(name))
    }

    pub fn param(name: &str) -> Self {
        Expr::atom(Atom::param(name))
    }

    pub fn jet(key: JetKey) -> Self {
        Expr::atom(Atom::Jet(key))
    }

    pub(crate) fn from_num_poly(num: Poly) -> Self {
        Expr {
            num,
            den: Poly::one(),
        }
    }

    /// Canonicalize a fraction of polynomials.
    pub fn make(num: Poly, den: Poly) -> Result<Self, SymError> {
        if den.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Expr::zero());
        }
        let mut num = num;
        let mut den = den;
        for _ in 0..4 {
            let anchored = anchor_denominator(&mut num, &mut den);
            if den.as_rational().is_none() {
                let g = poly_gcd(&num, &den);
                if g.as_rational().is_none() {
                    num = num.div_exact(&g).expect("gcd divides numerator");
                    den = den.div_exact(&g).expect("gcd divides denominator");
                    continue;
                }
            }
            if anchored {
                break;
            }
        }
        let lc = den.leading_coeff();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(Expr { num, den })
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn den_is_one(&self) -> bool {
        self.den.as_rational().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den_is_one() && self.num.as_rational().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn as_rational(&self) -> Option<Rat> {
        if !self.den_is_one() {
            return None;
        }
        self.num.as_rational()
    }

    pub fn add(&self, other: &Expr) -> Expr {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Expr::make(self.num.add(&other.num), self.den.clone())
                .expect("denominator nonzero");
        }
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Expr::make(num, den).expect("denominator nonzero")
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Expr {
        Expr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        if self.is_zero() || other.is_zero() {
            return Expr::zero();
        }
        Expr::make(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("denominator nonzero")
    }

    pub fn mul_rat(self, c: &Rat) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            num: self.num.scale(c),
            den: self.den,
        }
    }

    pub fn div(&self, other: &Expr) -> Result<Expr, SymError> {
        if other.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Expr::make(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn pow_int(&self, n: i64) -> Result<Expr, SymError> {
        if n == 0 {
            return Ok(Expr::one());
        }
        let (base_num, base_den, e) = if n < 0 {
            if self.is_zero() {
                return Err(SymError::DivisionByZero);
            }
            (&self.den, &self.num, (-n) as u32)
        } else {
            (&self.num, &self.den, n as u32)
        };
        Expr::make(base_num.pow(e), base_den.pow(e))
    }

    /// `exp` with the additive rewrite built in: `exp(0) = 1` and integer
    /// multiples of `ln(c)` for positive rational `c` collapse into the
    /// coefficient.
    pub fn exp(e: Expr) -> Expr {
        let (c, atom) = exp_normalize(e);
        let base = match atom {
            Some(a) => Expr {
                num: Poly::atom(a),
                den: Poly::one(),
            },
            None => Expr::one(),
        };
        base.mul_rat(&c)
    }

    /// `ln` applies no rewrites at all; the argument must be nonzero.
    pub fn ln(e: Expr) -> Result<Expr, SymError> {
        if e.is_zero() {
            return Err(SymError::LnOfZero);
        }
        Ok(Expr {
            num: Poly::atom(Atom::Ln(Arc::new(e))),
            den: Poly::one(),
        })
    }

    /// Exact partial derivative with respect to a single atom, all other
    /// atoms held fixed; `ln`/`exp` inners are traversed by the chain rule.
    pub fn differentiate(&self, v: &Atom) -> Expr {
        self.derive_with(&|a: &Atom| {
            if a == v {
                Some(Expr::one())
            } else {
                None
            }
        })
    }

    /// Generic derivation: extend `vel` (the derivative assigned to each
    /// base atom) to the whole expression by linearity, the product rule,
    /// and the chain rule through `ln`/`exp` atoms. Total derivatives,
    /// vector-field actions and similarity substitutions are all instances.
    pub fn derive_with<F>(&self, vel: &F) -> Expr
    where
        F: Fn(&Atom) -> Option<Expr>,
    {
        let dn = poly_derive(&self.num, vel);
        if self.den_is_one() {
            return dn;
        }
        let dd = poly_derive(&self.den, vel);
        let den_expr = Expr::from_num_poly(self.den.clone());
        let num_expr = Expr::from_num_poly(self.num.clone());
        // (n' d - n d') / d^2
        let top = dn.mul(&den_expr).sub(&num_expr.mul(&dd));
        top.div(&den_expr.mul(&den_expr)).expect("denominator nonzero")
    }

    /// Simultaneous substitution. The bindings must not mention any bound
    /// atom on a right-hand side (checked); use the crate-internal
    /// [`Expr::subst`] for the unchecked parallel form.
    pub fn substitute(&self, bindings: &BTreeMap<Atom, Expr>) -> Result<Expr, SymError> {
        for (key, rhs) in bindings {
            let mut clash = None;
            rhs.for_each_atom_deep(&mut |a| {
                if clash.is_none() && bindings.contains_key(a) {
                    clash = Some(a.clone());
                }
            });
            let _ = key;
            if let Some(atom) = clash {
                return Err(SymError::CyclicBindings { atom });
            }
        }
        self.subst(bindings)
    }

    /// Parallel substitution: every occurrence of a bound atom is replaced
    /// by its image in one pass, right-hand sides are never re-visited.
    pub(crate) fn subst(&self, bindings: &BTreeMap<Atom, Expr>) -> Result<Expr, SymError> {
        if bindings.is_empty() || !self.mentions_any(bindings) {
            return Ok(self.clone());
        }
        let n = subst_poly(&self.num, bindings)?;
        let d = subst_poly(&self.den, bindings)?;
        n.div(&d)
    }

    fn mentions_any(&self, bindings: &BTreeMap<Atom, Expr>) -> bool {
        let mut hit = false;
        self.for_each_atom_deep(&mut |a| {
            if !hit && bindings.contains_key(a) {
                hit = true;
            }
        });
        hit
    }

    pub fn for_each_atom_deep<F: FnMut(&Atom)>(&self, f: &mut F) {
        self.num.for_each_atom_deep(f);
        self.den.for_each_atom_deep(f);
    }

    /// All atoms of the expression, including inside `ln`/`exp`.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut set = std::collections::BTreeSet::new();
        self.for_each_atom_deep(&mut |a| {
            set.insert(a.clone());
        });
        set.into_iter().collect()
    }

    pub fn contains_atom(&self, v: &Atom) -> bool {
        let mut hit = false;
        self.for_each_atom_deep(&mut |a| {
            if a == v {
                hit = true;
            }
        });
        hit
    }

    /// Total order compatible with addition: compares by the sign of the
    /// leading coefficient of the difference. Used to pick canonical
    /// exponential anchors.
    pub(crate) fn group_cmp(&self, other: &Expr) -> Ordering {
        let d = self.sub(other);
        if d.is_zero() {
            Ordering::Equal
        } else if d.num.leading_coeff().is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    /// Numeric evaluation; `env` supplies values for coordinate, jet and
    /// parameter atoms.
    pub fn eval_f64<F>(&self, env: &F) -> Result<f64, SymError>
    where
        F: Fn(&Atom) -> Option<f64>,
    {
        let n = eval_poly(&self.num, env)?;
        let d = eval_poly(&self.den, env)?;
        if d == 0.0 {
            return Err(SymError::DivisionByZero);
        }
        Ok(n / d)
    }
}

fn poly_derive<F>(p: &Poly, vel: &F) -> Expr
where
    F: Fn(&Atom) -> Option<Expr>,
{
    let mut acc = Expr::zero();
    for (mono, coeff) in p.terms() {
        for (atom, e) in mono.atoms() {
            let datom = match atom {
                Atom::Exp(inner) => {
                    let di = inner.derive_with(vel);
                    if di.is_zero() {
                        continue;
                    }
                    Expr::atom(atom.clone()).mul(&di)
                }
                Atom::Ln(inner) => {
                    let di = inner.derive_with(vel);
                    if di.is_zero() {
                        continue;
                    }
                    di.div(inner).expect("ln argument nonzero")
                }
                other => match vel(other) {
                    Some(v) if !v.is_zero() => v,
                    _ => continue,
                },
            };
            let rest = mono
                .div(&Monomial::atom(atom.clone()))
                .expect("atom present in monomial");
            let factor = Expr::from_num_poly(Poly::term(rest, coeff * rat_i64(*e as i64)));
            acc = acc.add(&factor.mul(&datom));
        }
    }
    acc
}

fn subst_poly(p: &Poly, bindings: &BTreeMap<Atom, Expr>) -> Result<Expr, SymError> {
    let mut acc = Expr::zero();
    for (mono, coeff) in p.terms() {
        let mut term = Expr::constant(coeff.clone());
        for (atom, e) in mono.atoms() {
            let replaced = match bindings.get(atom) {
                Some(r) => r.clone(),
                None => match atom {
                    Atom::Exp(inner) => Expr::exp(inner.subst(bindings)?),
                    Atom::Ln(inner) => Expr::ln(inner.subst(bindings)?)?,
                    other => Expr::atom(other.clone()),
                },
            };
            term = term.mul(&replaced.pow_int(*e as i64)?);
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

fn eval_poly<F>(p: &Poly, env: &F) -> Result<f64, SymError>
where
    F: Fn(&Atom) -> Option<f64>,
{
    let mut total = 0.0;
    for (mono, coeff) in p.terms() {
        let mut v = rat_to_f64(coeff);
        for (atom, e) in mono.atoms() {
            let base = match atom {
                Atom::Exp(inner) => inner.eval_f64(env)?.exp(),
                Atom::Ln(inner) => {
                    let x = inner.eval_f64(env)?;
                    if x <= 0.0 {
                        return Err(SymError::EvalDomain {
                            what: format!("ln of non-positive value {x}"),
                        });
                    }
                    x.ln()
                }
                other => env(other).ok_or_else(|| SymError::EvalDomain {
                    what: format!("no value for atom {other}"),
                })?,
            };
            v *= base.powi(*e as i32);
        }
        total += v;
    }
    Ok(total)
}

pub(crate) fn rat_to_f64(r: &Rat) -> f64 {
    let n: f64 = r.numer().to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = r.denom().to_string().parse().unwrap_or(f64::NAN);
    n / d
}

/// Move the common exponential direction out of the denominator: find the
/// maximal `exp` inner over denominator monomials (monomials without an
/// `exp` factor count as inner zero) and multiply through by its negation.
/// Returns true when the denominator was already anchored.
fn anchor_denominator(num: &mut Poly, den: &mut Poly) -> bool {
    let mut has_exp = false;
    den.for_each_atom_deep(&mut |a| {
        if matches!(a, Atom::Exp(_)) {
            has_exp = true;
        }
    });
    let mut max_inner = Expr::zero();
    if has_exp {
        for (mono, _) in den.terms() {
            let mut inner = Expr::zero();
            for (a, e) in mono.atoms() {
                if let Atom::Exp(p) = a {
                    inner = inner.add(&p.as_ref().clone().mul_rat(&rat_i64(*e as i64)));
                }
            }
            if inner.group_cmp(&max_inner) == Ordering::Greater {
                max_inner = inner;
            }
        }
    }
    if max_inner.is_zero() {
        return true;
    }
    let (c, atom) = exp_normalize(max_inner.neg());
    let mono = match atom {
        Some(a) => Monomial::atom(a),
        None => Monomial::unit(),
    };
    *num = num.mul_term(&mono, &c);
    *den = den.mul_term(&mono, &c);
    false
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den_is_one() {
            write_poly(f, &self.num)
        } else {
            f.write_str("(")?;
            write_poly(f, &self.num)?;
            f.write_str(")/(")?;
            write_poly(f, &self.den)?;
            f.write_str(")")
        }
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, p: &Poly) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    // Leading term first.
    for (i, (mono, coeff)) in p.terms().enumerate().rev() {
        let first = i + 1 == p.len();
        let c = if first {
            if coeff.is_negative() {
                f.write_str("-")?;
            }
            coeff.abs()
        } else if coeff.is_negative() {
            f.write_str(" - ")?;
            coeff.abs()
        } else {
            f.write_str(" + ")?;
            coeff.clone()
        };
        write_term(f, mono, &c)?;
    }
    Ok(())
}

fn write_term(f: &mut fmt::Formatter<'_>, mono: &Monomial, c: &Rat) -> fmt::Result {
    if mono.is_unit() {
        return write!(f, "{c}");
    }
    let mut lead = String::new();
    if !c.is_one() {
        lead = format!("{c}*");
    }
    f.write_str(&lead)?;
    for (i, (atom, e)) in mono.atoms().enumerate() {
        if i > 0 {
            f.write_str("*")?;
        }
        if *e == 1 {
            write!(f, "{atom}")?;
        } else {
            write!(f, "{atom}^{e}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::atom::Dependent;

    fn x() -> Expr {
        Expr::coord("x")
    }

    fn t() -> Expr {
        Expr::coord("t")
    }

    #[test]
    fn cancellation() {
        assert!(x().sub(&x()).is_zero());
        let r2 = Expr::param("r2");
        let num = x().mul(&x()).sub(&r2.mul(&r2));
        let den = x().sub(&r2);
        let q = num.div(&den).unwrap();
        assert_eq!(q, x().add(&r2));
    }

    #[test]
    fn division_by_zero_rejected() {
        assert!(x().div(&Expr::zero()).is_err());
        assert!(x().sub(&x()).pow_int(-1).is_err());
    }

    #[test]
    fn inverse_collapses() {
        let e = x().mul(&x().pow_int(-1).unwrap());
        assert!(e.is_one());
    }

    #[test]
    fn exp_inverse_is_negated_inner() {
        let s = Expr::param("s");
        let inv = Expr::exp(s.clone()).pow_int(-1).unwrap();
        assert_eq!(inv, Expr::exp(s.neg()));
    }

    #[test]
    fn exp_of_int_ln() {
        let three = Expr::int(3);
        let l = Expr::ln(three).unwrap();
        assert_eq!(Expr::exp(l.clone()), Expr::int(3));
        assert_eq!(
            Expr::exp(l.clone().mul_rat(&rat_i64(-2))),
            Expr::rational(1, 9)
        );
        // Half-integer multiples keep a residual exp atom.
        let half = l.mul_rat(&Rat::new(1.into(), 2.into()));
        let root = Expr::exp(half.clone());
        assert_eq!(root.clone().mul(&root), Expr::int(3));
    }

    #[test]
    fn ln_no_rewrites() {
        let x2 = x().mul(&x());
        let lhs = Expr::ln(x2).unwrap();
        let rhs = Expr::ln(x()).unwrap().mul_rat(&rat_i64(2));
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn differentiate_examples() {
        let r1 = Expr::param("r1");
        let r2 = Expr::param("r2");
        let r3 = Expr::param("r3");
        // d/dx (r1 x + r2) = r1
        let e = r1.mul(&x()).add(&r2);
        assert_eq!(e.differentiate(&Atom::coord("x")), r1);

        // d/dx [(r3^2/r1) x - (r2 r3^2 / r1^2) ln(r1 x + r2)] = r3^2 x/(r1 x + r2)
        let r3sq = r3.mul(&r3);
        let term1 = r3sq.div(&r1).unwrap().mul(&x());
        let lnarg = r1.mul(&x()).add(&r2);
        let term2 = r2
            .mul(&r3sq)
            .div(&r1.mul(&r1))
            .unwrap()
            .mul(&Expr::ln(lnarg.clone()).unwrap());
        let b = term1.sub(&term2);
        let db = b.differentiate(&Atom::coord("x"));
        let expected = r3sq.mul(&x()).div(&lnarg).unwrap();
        assert_eq!(db, expected);

        // second derivative: r2 r3^2 / (r1 x + r2)^2
        let d2 = db.differentiate(&Atom::coord("x"));
        let expected2 = r2.mul(&r3sq).div(&lnarg.mul(&lnarg)).unwrap();
        assert_eq!(d2, expected2);
    }

    #[test]
    fn substitute_examples() {
        let mut bind = BTreeMap::new();
        bind.insert(Atom::coord("x"), Expr::zero());
        assert_eq!(x().add(&t()).substitute(&bind).unwrap(), t());

        // substitute s -> 0 into exp(s)*c
        let s = Expr::param("s");
        let c = Expr::jet(JetKey::base(Dependent::C));
        let e = Expr::exp(s).mul(&c);
        let mut bind = BTreeMap::new();
        bind.insert(Atom::param("s"), Expr::zero());
        assert_eq!(e.substitute(&bind).unwrap(), c);
    }

    #[test]
    fn cyclic_bindings_rejected() {
        let mut bind = BTreeMap::new();
        bind.insert(Atom::coord("x"), x().add(&Expr::one()));
        assert!(matches!(
            x().substitute(&bind),
            Err(SymError::CyclicBindings { .. })
        ));
    }

    #[test]
    fn is_zero_examples() {
        let e = x().mul(&x().pow_int(-1).unwrap()).sub(&Expr::one());
        assert!(e.is_zero());
        let s = Expr::param("s");
        let e = Expr::exp(s.clone())
            .mul(&Expr::exp(s.neg()))
            .sub(&Expr::one());
        assert!(e.is_zero());
    }

    #[test]
    fn denominator_anchoring() {
        let s = Expr::param("s");
        // x / exp(s) must equal x * exp(-s)
        let a = x().div(&Expr::exp(s.clone())).unwrap();
        let b = x().mul(&Expr::exp(s.clone().neg()));
        assert_eq!(a, b);
        // exp(2s)/exp(s) = exp(s)
        let q = Expr::exp(s.clone().mul_rat(&rat_i64(2)))
            .div(&Expr::exp(s.clone()))
            .unwrap();
        assert_eq!(q, Expr::exp(s));
    }

    #[test]
    fn display_roundtrip_shape() {
        let e = x()
            .mul(&x())
            .sub(&t().mul_rat(&Rat::new(3.into(), 2.into())))
            .add(&Expr::one());
        let shown = e.to_string();
        assert!(shown.contains("x^2"));
    }
}
