//! Exact symbolic expression kernel.
//!
//! Everything downstream (prolongation, determining equations, curvature,
//! reductions) is built on one representation: a canonical rational
//! function over [`Atom`]s with arbitrary-precision rational coefficients.
//! There is no floating point anywhere in the kernel; every identity the
//! crate claims is checked by exact cancellation.
//!
//! Normalization policy, fixed once:
//!
//! * fractions are reduced (`gcd(num, den) = 1`) and the denominator's
//!   leading coefficient is `+1` under the graded-lex monomial order;
//! * `exp(p)*exp(q)` rewrites to `exp(p+q)`, `exp(0) = 1`, and integer
//!   multiples of `ln(c)` for positive rational `c` collapse out of
//!   exponents (`exp(2*ln(3)) = 9`);
//! * `ln` has no automatic rewrites: `ln(x^2)` and `2*ln(x)` are distinct
//!   (and `is_zero` on their difference answers `false` by design);
//! * expressions are immutable values, safe to share across threads.
//!
//! Zero testing is sound and complete for rational functions of atoms;
//! `ln`/`exp` atoms with distinct inner expressions are treated as
//! independent transcendentals.

mod atom;
mod expr;
mod gcd;
mod parse;
mod poly;

pub use atom::{Atom, Dependent, JetKey, Symbol, MAX_JET_ORDER};
pub use expr::Expr;
pub use parse::parse;
pub use poly::{rat, rat_i64, Monomial, Poly, Rat};

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SymError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("ln of zero")]
    LnOfZero,
    #[error("jet order above {max} for {key:?}", max = MAX_JET_ORDER)]
    JetOrderOverflow { key: JetKey },
    #[error("binding right-hand side mentions bound atom {atom}")]
    CyclicBindings { atom: Atom },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown function '{name}' at byte {pos}")]
    UnknownFunction { name: String, pos: usize },
    #[error("cannot evaluate: {what}")]
    EvalDomain { what: String },
}
