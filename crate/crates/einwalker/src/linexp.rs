//! Closed-form exponentials `exp(time * A)` of rational matrices with
//! rational spectrum.
//!
//! The matrix is split into commuting semisimple and nilpotent parts via
//! the characteristic polynomial and spectral idempotents; the semisimple
//! part exponentiates to `exp(lambda * time)` factors and the nilpotent
//! part to a terminating series. Everything stays exact: entries of the
//! result are canonical expressions, polynomial in `time` and in
//! exponential atoms.

use num::{One, Signed, Zero};

use crate::symexpr::{Expr, Rat};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum LinexpError {
    #[error("matrix spectrum is not rational (irreducible factor of degree {degree} remains)")]
    NonRationalSpectrum { degree: usize },
}

pub type RatMat = Vec<Vec<Rat>>;

pub fn identity(n: usize) -> RatMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &RatMat, b: &RatMat) -> RatMat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![Rat::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if b[l][j].is_zero() {
                    continue;
                }
                let add = &a[i][l] * &b[l][j];
                out[i][j] += add;
            }
        }
    }
    out
}

fn mat_add_scaled(a: &RatMat, b: &RatMat, c: &Rat) -> RatMat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y * c).collect())
        .collect()
}

fn is_zero_mat(a: &RatMat) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

/// Characteristic polynomial coefficients `[c_n, ..., c_1, c_0]` with
/// `c_n = 1` (descending powers), by the Faddeev-LeVerrier recursion.
pub fn char_poly(a: &RatMat) -> Vec<Rat> {
    let n = a.len();
    let mut coeffs = vec![Rat::one()];
    let mut m = vec![vec![Rat::zero(); n]; n];
    let mut c = Rat::one();
    for k in 1..=n {
        // M_k = A (M_{k-1} + c_{k-1} I)
        let shifted: RatMat = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            &m[i][j] + &c
                        } else {
                            m[i][j].clone()
                        }
                    })
                    .collect()
            })
            .collect();
        m = mat_mul(a, &shifted);
        let trace: Rat = (0..n).map(|i| m[i][i].clone()).sum();
        c = -trace / Rat::from_integer(k.into());
        coeffs.push(c.clone());
    }
    coeffs
}

/// Rational roots with multiplicities; error if any factor is left over.
fn rational_roots(coeffs_desc: &[Rat]) -> Result<Vec<(Rat, usize)>, LinexpError> {
    // Ascending coefficient vector for synthetic division.
    let mut poly: Vec<Rat> = coeffs_desc.iter().rev().cloned().collect();
    let mut roots: Vec<(Rat, usize)> = Vec::new();

    // Strip zero roots.
    let mut zero_mult = 0;
    while poly.len() > 1 && poly[0].is_zero() {
        poly.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Rat::zero(), zero_mult));
    }
    while poly.len() > 1 {
        let root = match find_rational_root(&poly) {
            Some(r) => r,
            None => {
                return Err(LinexpError::NonRationalSpectrum {
                    degree: poly.len() - 1,
                })
            }
        };
        let mut mult = 0;
        while let Some(q) = divide_by_root(&poly, &root) {
            poly = q;
            mult += 1;
        }
        roots.push((root, mult));
    }
    Ok(roots)
}

fn eval_ascending(poly: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in poly.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn divide_by_root(poly: &[Rat], root: &Rat) -> Option<Vec<Rat>> {
    if !eval_ascending(poly, root).is_zero() {
        return None;
    }
    // Synthetic division by (x - root), ascending coefficients.
    let n = poly.len();
    let mut out = vec![Rat::zero(); n - 1];
    let mut carry = Rat::zero();
    for i in (0..n - 1).rev() {
        carry = &poly[i + 1] + root * &carry;
        out[i] = carry.clone();
    }
    Some(out)
}

fn find_rational_root(poly: &[Rat]) -> Option<Rat> {
    use num::bigint::BigInt;
    use num::Integer;
    // Clear denominators to a primitive integer polynomial.
    let mut lcm = BigInt::one();
    for c in poly {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = poly.iter().map(|c| (c * Rat::from_integer(lcm.clone())).to_integer()).collect();
    let a0 = ints[0].clone();
    let an = ints.last().unwrap().clone();
    debug_assert!(!a0.is_zero() && !an.is_zero());
    let mut p_divs = divisors(&a0.abs());
    p_divs.sort();
    let mut q_divs = divisors(&an.abs());
    q_divs.sort();
    for p in &p_divs {
        for q in &q_divs {
            for sign in [1i64, -1] {
                let cand = Rat::new(p * BigInt::from(sign), q.clone());
                if eval_ascending(poly, &cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

fn divisors(n: &num::BigInt) -> Vec<num::BigInt> {
    use num::bigint::BigInt;
    use num::Integer;
    // Trial division; spectra here are tiny integers.
    let mut out = Vec::new();
    let mut d = BigInt::one();
    loop {
        if &d * &d > *n {
            break;
        }
        if n.is_multiple_of(&d) {
            out.push(d.clone());
            let other = n / &d;
            if other != d {
                out.push(other);
            }
        }
        d = d + 1;
    }
    out
}

/// Dense univariate polynomial over the rationals, ascending coefficients.
#[derive(Clone, Debug, PartialEq)]
struct UPoly(Vec<Rat>);

impl UPoly {
    fn zero() -> Self {
        UPoly(vec![])
    }

    fn constant(c: Rat) -> Self {
        if c.is_zero() {
            UPoly::zero()
        } else {
            UPoly(vec![c])
        }
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn trim(mut self) -> Self {
        while self.0.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.0.pop();
        }
        self
    }

    fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let mut out = vec![Rat::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in o.0.iter().enumerate() {
            out[i] += c;
        }
        UPoly(out).trim()
    }

    fn scale(&self, c: &Rat) -> UPoly {
        if c.is_zero() {
            return UPoly::zero();
        }
        UPoly(self.0.iter().map(|x| x * c).collect())
    }

    fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly(out).trim()
    }

    fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero());
        let dd = d.degree();
        let lc = d.0.last().unwrap().clone();
        let mut rem = self.clone();
        let mut quo = vec![Rat::zero(); self.0.len().saturating_sub(dd)];
        while !rem.is_zero() && rem.degree() >= dd {
            let shift = rem.degree() - dd;
            let q = rem.0.last().unwrap() / &lc;
            quo[shift] = q.clone();
            let mut sub = vec![Rat::zero(); shift];
            sub.extend(d.0.iter().map(|c| c * &q));
            rem = rem.add(&UPoly(sub).scale(&-Rat::one()));
        }
        (UPoly(quo).trim(), rem)
    }

    /// Extended gcd: returns (g, u, v) with u*self + v*other = g.
    fn ext_gcd(&self, other: &UPoly) -> (UPoly, UPoly, UPoly) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let mut s0 = UPoly::constant(Rat::one());
        let mut s1 = UPoly::zero();
        let mut t0 = UPoly::zero();
        let mut t1 = UPoly::constant(Rat::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let new_s = s0.add(&q.mul(&s1).scale(&-Rat::one()));
            let new_t = t0.add(&q.mul(&t1).scale(&-Rat::one()));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = new_s;
            t0 = t1;
            t1 = new_t;
        }
        (r0, s0, t0)
    }

    fn eval_mat(&self, a: &RatMat) -> RatMat {
        let n = a.len();
        let mut acc = vec![vec![Rat::zero(); n]; n];
        for c in self.0.iter().rev() {
            acc = mat_mul(&acc, a);
            for i in 0..n {
                acc[i][i] += c;
            }
        }
        acc
    }
}

/// `(x - root)^mult` as a UPoly.
fn linear_power(root: &Rat, mult: usize) -> UPoly {
    let lin = UPoly(vec![-root.clone(), Rat::one()]);
    let mut acc = UPoly::constant(Rat::one());
    for _ in 0..mult {
        acc = acc.mul(&lin);
    }
    acc
}

/// Exact `exp(time * A)`; the entries are polynomials in `time` times
/// `exp(lambda * time)` atoms, one per eigenvalue.
pub fn exp_scaled(a: &RatMat, time: &Expr) -> Result<Vec<Vec<Expr>>, LinexpError> {
    let n = a.len();
    let coeffs = char_poly(a);
    let roots = rational_roots(&coeffs)?;

    // Spectral idempotents via CRT against the characteristic polynomial.
    let char_up = UPoly(coeffs.iter().rev().cloned().collect()).trim();
    let mut semisimple = vec![vec![Rat::zero(); n]; n];
    let mut projectors: Vec<(Rat, RatMat)> = Vec::new();
    for (root, mult) in &roots {
        let m_i = linear_power(root, *mult);
        let (q_i, _r) = char_up.divrem(&m_i);
        debug_assert!(_r.is_zero());
        // Inverse of q_i modulo (x - root)^mult.
        let (g, u, _v) = q_i.ext_gcd(&m_i);
        // g is a nonzero constant (q_i and m_i are coprime).
        debug_assert_eq!(g.degree(), 0);
        let inv = u.scale(&g.0[0].recip());
        let e_i = q_i.mul(&inv);
        let (_, e_i_red) = e_i.divrem(&char_up);
        let p_i = e_i_red.eval_mat(a);
        semisimple = mat_add_scaled(&semisimple, &p_i, root);
        projectors.push((root.clone(), p_i));
    }
    let nilpotent = mat_add_scaled(a, &semisimple, &-Rat::one());

    // exp(time*N) as a terminating series.
    let mut exp_n: Vec<Vec<Expr>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Expr::one() } else { Expr::zero() })
                .collect()
        })
        .collect();
    let mut n_pow = identity(n);
    let mut factorial = Rat::one();
    for k in 1..n {
        n_pow = mat_mul(&n_pow, &nilpotent);
        if is_zero_mat(&n_pow) {
            break;
        }
        factorial *= Rat::from_integer(k.into());
        let tk = time.pow_int(k as i64).expect("nonnegative power");
        for i in 0..n {
            for j in 0..n {
                if n_pow[i][j].is_zero() {
                    continue;
                }
                let term = tk
                    .clone()
                    .mul_rat(&(&n_pow[i][j] / &factorial));
                exp_n[i][j] = exp_n[i][j].add(&term);
            }
        }
    }

    // exp(time*S) = sum_i exp(lambda_i time) P_i.
    let mut exp_s: Vec<Vec<Expr>> = (0..n)
        .map(|_| (0..n).map(|_| Expr::zero()).collect())
        .collect();
    for (root, p) in &projectors {
        let factor = Expr::exp(time.clone().mul_rat(root));
        for i in 0..n {
            for j in 0..n {
                if p[i][j].is_zero() {
                    continue;
                }
                exp_s[i][j] = exp_s[i][j].add(&factor.clone().mul_rat(&p[i][j]));
            }
        }
    }

    // Product exp(S t) exp(N t).
    let mut out: Vec<Vec<Expr>> = (0..n)
        .map(|_| (0..n).map(|_| Expr::zero()).collect())
        .collect();
    for i in 0..n {
        for l in 0..n {
            if exp_s[i][l].is_zero() {
                continue;
            }
            for j in 0..n {
                if exp_n[l][j].is_zero() {
                    continue;
                }
                out[i][j] = out[i][j].add(&exp_s[i][l].mul(&exp_n[l][j]));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{parse, rat_i64};
    use std::collections::BTreeMap;

    fn s() -> Expr {
        Expr::param("s")
    }

    #[test]
    fn nilpotent_block() {
        // [[0,1],[0,0]] -> [[1,s],[0,1]]
        let a = vec![
            vec![Rat::zero(), Rat::one()],
            vec![Rat::zero(), Rat::zero()],
        ];
        let m = exp_scaled(&a, &s()).unwrap();
        assert_eq!(m[0][0], Expr::one());
        assert_eq!(m[0][1], s());
        assert!(m[1][0].is_zero());
    }

    #[test]
    fn diagonal_block() {
        // diag(1, -2) -> diag(e^s, e^-2s)
        let a = vec![
            vec![Rat::one(), Rat::zero()],
            vec![Rat::zero(), -rat_i64(2)],
        ];
        let m = exp_scaled(&a, &s()).unwrap();
        assert_eq!(m[0][0], Expr::exp(s()));
        assert_eq!(m[1][1], Expr::exp(s().mul_rat(&-rat_i64(2))));
    }

    #[test]
    fn jordan_block() {
        // [[1,1],[0,1]] -> e^s [[1,s],[0,1]]
        let a = vec![vec![Rat::one(), Rat::one()], vec![Rat::zero(), Rat::one()]];
        let m = exp_scaled(&a, &s()).unwrap();
        assert_eq!(m[0][0], Expr::exp(s()));
        assert_eq!(m[0][1], Expr::exp(s()).mul(&s()));
    }

    #[test]
    fn group_law_and_derivative() {
        // Mixed semisimple + nilpotent 3x3.
        let a = vec![
            vec![rat_i64(1), rat_i64(1), Rat::zero()],
            vec![Rat::zero(), rat_i64(1), Rat::zero()],
            vec![Rat::zero(), rat_i64(2), -rat_i64(1)],
        ];
        let m = exp_scaled(&a, &s()).unwrap();
        let m2 = exp_scaled(&a, &parse("u").unwrap()).unwrap();
        let msum = exp_scaled(&a, &parse("s + u").unwrap()).unwrap();
        // M(s) M(u) = M(s+u)
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = Expr::zero();
                for l in 0..3 {
                    acc = acc.add(&m[i][l].mul(&m2[l][j]));
                }
                assert_eq!(acc, msum[i][j], "({i},{j})");
            }
        }
        // d/ds at 0 recovers A.
        let zero_bind: BTreeMap<_, _> =
            [(crate::symexpr::Atom::param("s"), Expr::zero())].into();
        for i in 0..3 {
            for j in 0..3 {
                let d = m[i][j].differentiate(&crate::symexpr::Atom::param("s"));
                let at0 = d.substitute(&zero_bind).unwrap();
                assert_eq!(at0, Expr::constant(a[i][j].clone()), "({i},{j})");
            }
        }
    }

    #[test]
    fn irrational_spectrum_rejected() {
        // [[0,1],[2,0]] has eigenvalues +-sqrt(2).
        let a = vec![vec![Rat::zero(), Rat::one()], vec![rat_i64(2), Rat::zero()]];
        assert!(matches!(
            exp_scaled(&a, &s()),
            Err(LinexpError::NonRationalSpectrum { .. })
        ));
    }
}
