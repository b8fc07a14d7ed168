//! Multivariate polynomials over the rationals in atoms.
//!
//! Terms are kept sorted in ascending graded-lexicographic order (total
//! degree first, ties broken along the fixed atom order, higher exponent on
//! the earlier atom winning). The last term is the leading term.
//!
//! Monomial multiplication is where the exponential rewrite lives: all
//! `exp` factors of a monomial are merged into a single atom
//! `exp(sum of inners)`, and integer multiples of `ln` of positive rational
//! constants are extracted from that sum into the coefficient. This is what
//! makes `exp(p)*exp(q) = exp(p+q)` and `exp(n*ln(c)) = c^n` hold by
//! construction.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

use crate::symexpr::atom::Atom;
use crate::symexpr::expr::Expr;

pub type Rat = BigRational;

pub fn rat_i64(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// A power product of atoms. Exponents are strictly positive and the atom
/// list is sorted; at most one `Exp` atom is present, always to power one.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<(Atom, u32)>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    /// Build from a pre-normalized atom. `Exp` atoms must come from
    /// [`exp_normalize`] so the single-exp invariant holds.
    pub fn atom(a: Atom) -> Self {
        Monomial(vec![(a, 1)])
    }

    pub fn atom_pow(a: Atom, e: u32) -> (Rat, Self) {
        if e == 0 {
            return (Rat::one(), Monomial::unit());
        }
        match a {
            Atom::Exp(inner) => {
                let scaled = inner.as_ref().clone().mul_rat(&rat_i64(e as i64));
                let (c, atom) = exp_normalize(scaled);
                match atom {
                    Some(at) => (c, Monomial(vec![(at, 1)])),
                    None => (c, Monomial::unit()),
                }
            }
            other => (Rat::one(), Monomial(vec![(other, e)])),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|(_, e)| *e as u64).sum()
    }

    pub fn atoms(&self) -> impl Iterator<Item = &(Atom, u32)> {
        self.0.iter()
    }

    pub fn exponent_of(&self, a: &Atom) -> u32 {
        self.0
            .iter()
            .find(|(at, _)| at == a)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn contains(&self, a: &Atom) -> bool {
        self.exponent_of(a) > 0
    }

    /// Multiply two monomials, merging exponential factors.
    pub fn mul(&self, other: &Monomial) -> (Rat, Monomial) {
        if self.is_unit() {
            return (Rat::one(), other.clone());
        }
        if other.is_unit() {
            return (Rat::one(), self.clone());
        }
        let mut plain: Vec<(Atom, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let mut exp_sum: Option<Expr> = None;
        let mut push = |atom: &Atom, e: u32, exp_sum: &mut Option<Expr>| {
            if let Atom::Exp(inner) = atom {
                let contrib = inner.as_ref().clone().mul_rat(&rat_i64(e as i64));
                *exp_sum = Some(match exp_sum.take() {
                    Some(s) => s.add(&contrib),
                    None => contrib,
                });
            } else {
                plain.push((atom.clone(), e));
            }
        };
        for (a, e) in &self.0 {
            push(a, *e, &mut exp_sum);
        }
        for (a, e) in &other.0 {
            push(a, *e, &mut exp_sum);
        }
        plain.sort_by(|(a, _), (b, _)| a.cmp(b));
        let mut merged: Vec<(Atom, u32)> = Vec::with_capacity(plain.len());
        for (a, e) in plain {
            match merged.last_mut() {
                Some((prev, pe)) if *prev == a => *pe += e,
                _ => merged.push((a, e)),
            }
        }
        let mut coeff = Rat::one();
        if let Some(sum) = exp_sum {
            let (c, atom) = exp_normalize(sum);
            coeff = c;
            if let Some(at) = atom {
                let pos = merged
                    .binary_search_by(|(a, _)| a.cmp(&at))
                    .unwrap_or_else(|p| p);
                merged.insert(pos, (at, 1));
            }
        }
        (coeff, Monomial(merged))
    }

    pub fn pow(&self, n: u32) -> (Rat, Monomial) {
        if n == 0 {
            return (Rat::one(), Monomial::unit());
        }
        if n == 1 {
            return (Rat::one(), self.clone());
        }
        let mut coeff = Rat::one();
        let mut out: Vec<(Atom, u32)> = Vec::with_capacity(self.0.len());
        for (a, e) in &self.0 {
            let (c, m) = Monomial::atom_pow(a.clone(), e * n);
            coeff *= c;
            for entry in m.0 {
                out.push(entry);
            }
        }
        out.sort_by(|(a, _), (b, _)| a.cmp(b));
        (coeff, Monomial(out))
    }

    /// Component-wise minimum (the strict monomial gcd; `exp` atoms only
    /// match on identical inner expressions).
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        for (a, e) in &self.0 {
            let oe = other.exponent_of(a);
            let m = (*e).min(oe);
            if m > 0 {
                out.push((a.clone(), m));
            }
        }
        Monomial(out)
    }

    /// Exact division; `None` when `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::new();
        let mut rhs = other.0.iter().peekable();
        for (a, e) in &self.0 {
            let mut rem = *e;
            if let Some((b, f)) = rhs.peek() {
                match b.cmp(a) {
                    Ordering::Equal => {
                        if *f > *e {
                            return None;
                        }
                        rem = *e - *f;
                        rhs.next();
                    }
                    Ordering::Less => return None,
                    Ordering::Greater => {}
                }
            }
            if rem > 0 {
                out.push((a.clone(), rem));
            }
        }
        if rhs.peek().is_some() {
            return None;
        }
        Some(Monomial(out))
    }

    fn cmp_grlex(&self, other: &Monomial) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        // Walk the union of atoms in ascending order; the first exponent
        // difference decides, higher exponent on the earlier atom winning.
        let mut i = self.0.iter().peekable();
        let mut j = other.0.iter().peekable();
        loop {
            match (i.peek(), j.peek()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((a, ea)), Some((b, eb))) => match a.cmp(b) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i.next();
                        j.next();
                    }
                },
            }
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_grlex(other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Normalize the inner expression of an `exp` factor.
///
/// Pulls out `exp(0) = 1` and integer multiples of `ln(c)` for positive
/// rational constants `c` (the coefficient of such a `ln` term keeps only
/// its fractional part in `[0, 1)`). Returns the extracted rational factor
/// and the surviving atom, if any.
pub fn exp_normalize(inner: Expr) -> (Rat, Option<Atom>) {
    if inner.is_zero() {
        return (Rat::one(), None);
    }
    let mut factor = Rat::one();
    let residual = if inner.den_is_one() {
        let mut kept: Vec<(Monomial, Rat)> = Vec::new();
        for (mono, coeff) in inner.num().terms() {
            let mut extracted = false;
            if mono.0.len() == 1 && mono.0[0].1 == 1 {
                if let Atom::Ln(arg) = &mono.0[0].0 {
                    if let Some(c) = arg.as_rational() {
                        if c.is_positive() {
                            let n = coeff.numer().div_floor(coeff.denom());
                            if !n.is_zero() {
                                factor *= pow_rat(&c, &n);
                            }
                            let rem = coeff - Rat::from_integer(n);
                            if !rem.is_zero() {
                                kept.push((mono.clone(), rem));
                            }
                            extracted = true;
                        }
                    }
                }
            }
            if !extracted {
                kept.push((mono.clone(), coeff.clone()));
            }
        }
        Expr::from_num_poly(Poly(kept))
    } else {
        inner
    };
    if residual.is_zero() {
        (factor, None)
    } else {
        (factor, Some(Atom::Exp(Arc::new(residual))))
    }
}

fn pow_rat(base: &Rat, exp: &BigInt) -> Rat {
    let mag = exp.magnitude().try_into().unwrap_or(u32::MAX);
    let p = Rat::new(
        num::pow::pow(base.numer().clone(), mag as usize),
        num::pow::pow(base.denom().clone(), mag as usize),
    );
    if exp.is_negative() {
        p.recip()
    } else {
        p
    }
}

/// A polynomial with rational coefficients; terms ascend in graded-lex
/// order, coefficients are nonzero.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Poly(pub(crate) Vec<(Monomial, Rat)>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly(vec![(Monomial::unit(), c)])
        }
    }

    pub fn atom(a: Atom) -> Self {
        Poly(vec![(Monomial::atom(a), Rat::one())])
    }

    pub fn term(mono: Monomial, c: Rat) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly(vec![(mono, c)])
        }
    }

    pub fn from_map(map: BTreeMap<Monomial, Rat>) -> Self {
        Poly(map.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> std::slice::Iter<'_, (Monomial, Rat)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_constant(&self) -> bool {
        self.0.is_empty() || (self.0.len() == 1 && self.0[0].0.is_unit())
    }

    pub fn as_rational(&self) -> Option<Rat> {
        if self.0.is_empty() {
            return Some(Rat::zero());
        }
        if self.0.len() == 1 && self.0[0].0.is_unit() {
            return Some(self.0[0].1.clone());
        }
        None
    }

    pub fn leading(&self) -> Option<&(Monomial, Rat)> {
        self.0.last()
    }

    pub fn leading_coeff(&self) -> Rat {
        self.0.last().map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut out: Vec<(Monomial, Rat)> = Vec::with_capacity(self.0.len() + other.0.len());
        let mut i = self.0.iter().peekable();
        let mut j = other.0.iter().peekable();
        loop {
            match (i.peek(), j.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(i.next().unwrap().clone()),
                (None, Some(_)) => out.push(j.next().unwrap().clone()),
                (Some((ma, _)), Some((mb, _))) => match ma.cmp(mb) {
                    Ordering::Less => out.push(i.next().unwrap().clone()),
                    Ordering::Greater => out.push(j.next().unwrap().clone()),
                    Ordering::Equal => {
                        let (m, ca) = i.next().unwrap();
                        let (_, cb) = j.next().unwrap();
                        let c = ca + cb;
                        if !c.is_zero() {
                            out.push((m.clone(), c));
                        }
                    }
                },
            }
        }
        Poly(out)
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|(m, c)| (m.clone(), -c.clone())).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if self.0.len() == 1 {
            let (m, c) = &self.0[0];
            return other.mul_term(m, c);
        }
        if other.0.len() == 1 {
            let (m, c) = &other.0[0];
            return self.mul_term(m, c);
        }
        let mut acc: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (ma, ca) in &self.0 {
            for (mb, cb) in &other.0 {
                let (f, m) = ma.mul(mb);
                let c = ca * cb * f;
                let entry = acc.entry(m).or_insert_with(Rat::zero);
                *entry += c;
            }
        }
        Poly::from_map(acc)
    }

    pub fn mul_term(&self, mono: &Monomial, coeff: &Rat) -> Poly {
        if coeff.is_zero() {
            return Poly::zero();
        }
        if mono.is_unit() {
            return self.scale(coeff);
        }
        let mut acc: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (m, c) in &self.0 {
            let (f, nm) = m.mul(mono);
            let entry = acc.entry(nm).or_insert_with(Rat::zero);
            *entry += c * coeff * f;
        }
        Poly::from_map(acc)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|(m, k)| (m.clone(), k * c)).collect())
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Rational content: gcd of coefficient numerators over lcm of
    /// denominators, with the sign of the leading coefficient.
    pub fn content(&self) -> Rat {
        if self.is_zero() {
            return Rat::zero();
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for (_, c) in &self.0 {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        let mut content = Rat::new(num, den);
        if self.leading_coeff().is_negative() {
            content = -content;
        }
        content
    }

    /// Monomial common to every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut iter = self.0.iter();
        let mut acc = match iter.next() {
            Some((m, _)) => m.clone(),
            None => return Monomial::unit(),
        };
        for (m, _) in iter {
            if acc.is_unit() {
                break;
            }
            acc = acc.gcd(m);
        }
        acc
    }

    /// Divide every term by a monomial (must divide exactly).
    pub fn div_monomial(&self, mono: &Monomial) -> Option<Poly> {
        if mono.is_unit() {
            return Some(self.clone());
        }
        let mut out = Vec::with_capacity(self.0.len());
        for (m, c) in &self.0 {
            out.push((m.div(mono)?, c.clone()));
        }
        Some(Poly(out))
    }

    /// Exact multivariate division; `None` if the division leaves a
    /// remainder. Only valid when no `exp` merging can occur between the
    /// quotient and divisor, which holds for the cofactor divisions done
    /// during gcd reduction.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() {
            return None;
        }
        if let Some(c) = divisor.as_rational() {
            return Some(self.scale(&c.recip()));
        }
        if divisor.0.len() == 1 {
            let (m, c) = &divisor.0[0];
            return self.div_monomial(m).map(|p| p.scale(&c.recip()));
        }
        let mut rem = self.clone();
        let mut acc: BTreeMap<Monomial, Rat> = BTreeMap::new();
        let (dm, dc) = divisor.leading().unwrap();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().unwrap();
            let qm = rm.div(dm)?;
            let qc = rc / dc;
            let mut chunk = divisor.mul_term(&qm, &qc);
            let entry = acc.entry(qm).or_insert_with(Rat::zero);
            *entry += qc;
            chunk = chunk.neg();
            rem = rem.add(&chunk);
        }
        Some(Poly::from_map(acc))
    }

    /// Visit every atom, including atoms inside `ln`/`exp` inners.
    pub fn for_each_atom_deep<F: FnMut(&Atom)>(&self, f: &mut F) {
        for (m, _) in &self.0 {
            for (a, _) in m.atoms() {
                f(a);
                if let Some(inner) = a.inner() {
                    inner.for_each_atom_deep(f);
                }
            }
        }
    }

    /// Atoms occurring directly in some monomial (no recursion).
    pub fn top_atoms(&self) -> Vec<Atom> {
        let mut set = std::collections::BTreeSet::new();
        for (m, _) in &self.0 {
            for (a, _) in m.atoms() {
                set.insert(a.clone());
            }
        }
        set.into_iter().collect()
    }

    pub fn max_atom(&self) -> Option<Atom> {
        self.0
            .iter()
            .filter_map(|(m, _)| m.atoms().map(|(a, _)| a).max())
            .max()
            .cloned()
    }

    pub fn degree_in(&self, a: &Atom) -> u32 {
        self.0.iter().map(|(m, _)| m.exponent_of(a)).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::atom(Atom::coord("x"))
    }

    fn t() -> Poly {
        Poly::atom(Atom::coord("t"))
    }

    #[test]
    fn add_cancels() {
        let p = x().add(&t()).sub(&t());
        assert_eq!(p, x());
        assert!(x().sub(&x()).is_zero());
    }

    #[test]
    fn grlex_order() {
        // x^2 has higher degree than x*t? no: equal degree; x earlier atom?
        // "t" < "x" lexicographically, so t is the earlier atom.
        let p = x().mul(&x()).add(&x().mul(&t())).add(&t());
        // ascending: t (deg 1) then lower of {x^2, xt} then leading.
        assert_eq!(p.0.len(), 3);
        assert_eq!(p.0[0].0.degree(), 1);
        // t^1 x^1 beats x^2 on the earlier atom t.
        assert_eq!(p.leading().unwrap().0.exponent_of(&Atom::coord("t")), 1);
    }

    #[test]
    fn exp_merge() {
        let s = Expr::param("s");
        let es = Expr::exp(s.clone());
        let prod = es.clone().mul(&es);
        let expected = Expr::exp(s.clone().add(&s));
        assert_eq!(prod, expected);
        let inv = Expr::exp(s.clone().neg());
        assert!(es.mul(&inv).is_one());
    }

    #[test]
    fn exact_division() {
        let p = x().mul(&x()).sub(&t().mul(&t()));
        let d = x().add(&t());
        let q = p.div_exact(&d).unwrap();
        assert_eq!(q, x().sub(&t()));
        assert!(p.div_exact(&x().sub(&Poly::one())).is_none());
    }
}
