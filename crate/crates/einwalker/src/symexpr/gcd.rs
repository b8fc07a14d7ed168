//! Multivariate polynomial gcd over the rationals.
//!
//! Recursive univariate reduction: pick the largest atom present, split
//! into content and primitive part over the remaining atoms, and run a
//! primitive pseudo-remainder sequence. Denominators in this crate stay
//! small (monomials in the dependents, linear solution denominators,
//! power-of-coordinate prefactors), so the primitive PRS is entirely
//! adequate.

use num::{One, Zero};

use crate::symexpr::atom::Atom;
use crate::symexpr::poly::{Monomial, Poly, Rat};

/// Gcd of two polynomials, normalized to content one with a positive
/// leading coefficient. Constants (and any pair with a constant) reduce to
/// gcd one.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return normalize(b.clone());
    }
    if b.is_zero() {
        return normalize(a.clone());
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    // Common monomial factor first: cheap, and the dominant case for
    // on-shell denominators.
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.gcd(&mb);
    let ra = a.div_monomial(&ma).expect("content divides");
    let rb = b.div_monomial(&mb).expect("content divides");
    let core = if ra.is_constant() || rb.is_constant() {
        Poly::one()
    } else {
        gcd_inner(&ra, &rb)
    };
    normalize(core.mul_term(&mg, &Rat::one()))
}

fn gcd_inner(a: &Poly, b: &Poly) -> Poly {
    if a == b {
        return a.clone();
    }
    let va = a.max_atom();
    let vb = b.max_atom();
    let v = match (va, vb) {
        (Some(x), Some(y)) => {
            if x != y {
                // The larger atom is missing from one side: the gcd cannot
                // involve it, so it divides the content of the richer side.
                let x_rich = x > y;
                let top = if x_rich { x } else { y };
                let (rich, poor) = if x_rich { (a, b) } else { (b, a) };
                let coeffs = to_univariate(rich, &top);
                let mut g = poor.clone();
                for c in coeffs {
                    if g.is_constant() {
                        return Poly::one();
                    }
                    g = gcd_inner(&g, &c);
                }
                return g;
            }
            x
        }
        _ => return Poly::one(),
    };

    let ca = to_univariate(a, &v);
    let cb = to_univariate(b, &v);
    let cont_a = vec_content(&ca);
    let cont_b = vec_content(&cb);
    let cont = if cont_a.is_constant() || cont_b.is_constant() {
        Poly::one()
    } else {
        gcd_inner(&cont_a, &cont_b)
    };
    let pa = divide_vec(&ca, &cont_a);
    let pb = divide_vec(&cb, &cont_b);

    // Primitive PRS on the primitive parts.
    let (mut f, mut g) = if pa.len() >= pb.len() {
        (pa, pb)
    } else {
        (pb, pa)
    };
    loop {
        let r = pseudo_rem(&f, &g, &v);
        if r.iter().all(|p| p.is_zero()) {
            let prim = primitive(&g);
            return cont.mul(&from_univariate(&prim, &v));
        }
        f = g;
        g = primitive(&r);
    }
}

/// Coefficients by exponent of `v` (index = exponent).
fn to_univariate(p: &Poly, v: &Atom) -> Vec<Poly> {
    let deg = p.degree_in(v) as usize;
    let mut out = vec![Poly::zero(); deg + 1];
    for (mono, coeff) in p.terms() {
        let e = mono.exponent_of(v) as usize;
        let rest = if e > 0 {
            let (_, mv) = Monomial::atom_pow(v.clone(), e as u32);
            mono.div(&mv).expect("exponent accounted")
        } else {
            mono.clone()
        };
        out[e] = out[e].add(&Poly::term(rest, coeff.clone()));
    }
    out
}

fn from_univariate(coeffs: &[Poly], v: &Atom) -> Poly {
    let mut acc = Poly::zero();
    for (e, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (f, mv) = Monomial::atom_pow(v.clone(), e as u32);
        acc = acc.add(&c.mul_term(&mv, &f));
    }
    acc
}

fn vec_content(coeffs: &[Poly]) -> Poly {
    let mut g = Poly::zero();
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        g = if g.is_zero() {
            c.clone()
        } else if g.is_constant() {
            return Poly::one();
        } else {
            gcd_inner(&g, c)
        };
    }
    if g.is_zero() {
        Poly::one()
    } else {
        normalize(g)
    }
}

fn divide_vec(coeffs: &[Poly], d: &Poly) -> Vec<Poly> {
    coeffs
        .iter()
        .map(|c| {
            if c.is_zero() {
                Poly::zero()
            } else {
                c.div_exact(d).expect("content divides coefficients")
            }
        })
        .collect()
}

fn primitive(coeffs: &[Poly]) -> Vec<Poly> {
    let cont = vec_content(coeffs);
    divide_vec(coeffs, &cont)
}

/// Pseudo-remainder of `f` by `g` in the main variable: multiply `f` by
/// lc(g)^(deg f - deg g + 1) and divide.
fn pseudo_rem(f: &[Poly], g: &[Poly], v: &Atom) -> Vec<Poly> {
    let df = top_degree(f);
    let dg = top_degree(g);
    debug_assert!(dg <= df);
    let lc_g = g[dg].clone();
    let mut r: Vec<Poly> = f.to_vec();
    let mut dr = df;
    let _ = v;
    while dr >= dg && !r.iter().all(|p| p.is_zero()) {
        if r[dr].is_zero() {
            if dr == 0 {
                break;
            }
            dr -= 1;
            continue;
        }
        let lead = r[dr].clone();
        // r = lc_g * r - lead * g * v^(dr - dg)
        for c in r.iter_mut() {
            *c = c.mul(&lc_g);
        }
        let shift = dr - dg;
        for (i, gc) in g.iter().enumerate() {
            if gc.is_zero() {
                continue;
            }
            r[i + shift] = r[i + shift].sub(&lead.mul(gc));
        }
        debug_assert!(r[dr].is_zero());
        if dr == 0 {
            break;
        }
        dr -= 1;
    }
    // Trim to degree < dg.
    r.truncate(dg.max(1));
    while r.len() > 1 && r.last().map(|p| p.is_zero()).unwrap_or(false) {
        r.pop();
    }
    r
}

fn top_degree(coeffs: &[Poly]) -> usize {
    let mut d = coeffs.len();
    while d > 0 {
        if !coeffs[d - 1].is_zero() {
            return d - 1;
        }
        d -= 1;
    }
    0
}

fn normalize(p: Poly) -> Poly {
    if p.is_zero() {
        return p;
    }
    let c = p.content();
    if c.is_one() {
        return p;
    }
    if c.is_zero() {
        return p;
    }
    p.scale(&c.recip())
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
    fn univariate_gcd() {
        // gcd(x^2 - 1, x - 1) = x - 1
        let a = x().mul(&x()).sub(&Poly::one());
        let b = x().sub(&Poly::one());
        assert_eq!(poly_gcd(&a, &b), b);
    }

    #[test]
    fn multivariate_gcd() {
        // gcd((x+t)^2 (x-t), (x+t) t) = x+t
        let s = x().add(&t());
        let a = s.mul(&s).mul(&x().sub(&t()));
        let b = s.mul(&t());
        assert_eq!(poly_gcd(&a, &b), s);
    }

    #[test]
    fn coprime() {
        let a = x().add(&Poly::one());
        let b = t().add(&Poly::one());
        assert_eq!(poly_gcd(&a, &b), Poly::one());
    }

    #[test]
    fn monomial_fast_path() {
        let a = x().mul(&t()).mul(&t());
        let b = t().mul(&x()).mul(&x());
        assert_eq!(poly_gcd(&a, &b), x().mul(&t()));
    }
}
