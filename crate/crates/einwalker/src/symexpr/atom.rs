//! Atoms: the indeterminates of the expression kernel.
//!
//! An expression is a rational function whose "variables" are atoms. Atoms
//! come in five kinds with a fixed total order used everywhere canonical
//! ordering matters:
//!
//! `Coord < Jet < Param < Ln < Exp`
//!
//! Coordinates compare by name, jet symbols by `(dependent, multi-index)`,
//! parameters by name, and `ln`/`exp` atoms by their inner expressions
//! (which are themselves canonical, so structural comparison is semantic
//! comparison).

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::symexpr::expr::Expr;
use crate::symexpr::SymError;

/// Interned-ish symbol name (cheap to clone, compares as a string).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

/// Dependent variables carrying jet symbols.
///
/// `A`, `B`, `C` are the metric components as functions of `(x, t)`;
/// `F`, `H`, `K` are the reduced dependents as functions of the similarity
/// variable `w`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Dependent {
    A,
    B,
    C,
    F,
    H,
    K,
}

impl Dependent {
    pub fn letter(self) -> char {
        match self {
            Dependent::A => 'a',
            Dependent::B => 'b',
            Dependent::C => 'c',
            Dependent::F => 'f',
            Dependent::H => 'h',
            Dependent::K => 'k',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        Some(match c {
            'a' => Dependent::A,
            'b' => Dependent::B,
            'c' => Dependent::C,
            'f' => Dependent::F,
            'h' => Dependent::H,
            'k' => Dependent::K,
            _ => return None,
        })
    }

    /// Index 0..3 for the base dependents (a, b, c); reduced dependents map
    /// to 0..3 as well (f, h, k).
    pub fn index(self) -> usize {
        match self {
            Dependent::A | Dependent::F => 0,
            Dependent::B | Dependent::H => 1,
            Dependent::C | Dependent::K => 2,
        }
    }

    pub fn is_reduced(self) -> bool {
        matches!(self, Dependent::F | Dependent::H | Dependent::K)
    }
}

/// Maximum jet order carried by any symbol.
///
/// The second prolongation of a second-order system needs total derivatives
/// up to order three; anything beyond that indicates a runaway computation
/// and is rejected loudly.
pub const MAX_JET_ORDER: u8 = 3;

/// A derivative coordinate `u^alpha_J`.
///
/// The multi-index counts derivatives with respect to the four base
/// coordinates. The restricted two-variable calculus uses slots 0 and 1
/// (`x` and `t`); the full Walker geometry uses all four. Reduced
/// dependents (`F`, `H`, `K`) use slot 0 with the meaning d/dw.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct JetKey {
    pub dep: Dependent,
    pub mi: [u8; 4],
}

impl JetKey {
    pub fn new(dep: Dependent, mi: [u8; 4]) -> Result<Self, SymError> {
        let key = JetKey { dep, mi };
        if key.order() > MAX_JET_ORDER {
            return Err(SymError::JetOrderOverflow { key });
        }
        Ok(key)
    }

    /// Undifferentiated dependent variable.
    pub fn base(dep: Dependent) -> Self {
        JetKey { dep, mi: [0; 4] }
    }

    /// Two-variable jet with `i` x-derivatives and `j` t-derivatives.
    pub fn xt(dep: Dependent, i: u8, j: u8) -> Result<Self, SymError> {
        JetKey::new(dep, [i, j, 0, 0])
    }

    pub fn order(&self) -> u8 {
        self.mi.iter().sum()
    }

    /// Bump the derivative count in coordinate direction `dir` (0-based).
    pub fn derive(&self, dir: usize) -> Result<Self, SymError> {
        let mut mi = self.mi;
        mi[dir] += 1;
        JetKey::new(self.dep, mi)
    }

    /// True if the key only involves the first two coordinates.
    pub fn is_two_var(&self) -> bool {
        self.mi[2] == 0 && self.mi[3] == 0
    }
}

impl fmt::Display for JetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dep.letter())?;
        if self.order() == 0 {
            return Ok(());
        }
        f.write_str("_")?;
        if self.is_two_var() {
            let (letters, counts) = if self.dep.is_reduced() {
                // Reduced dependents are univariate in w.
                (['w', 'w'], [self.mi[0] + self.mi[1], 0])
            } else {
                (['x', 't'], [self.mi[0], self.mi[1]])
            };
            for (ch, n) in letters.iter().zip(counts.iter()) {
                for _ in 0..*n {
                    write!(f, "{ch}")?;
                }
            }
        } else {
            for (slot, n) in self.mi.iter().enumerate() {
                for _ in 0..*n {
                    write!(f, "{}", slot + 1)?;
                }
            }
        }
        Ok(())
    }
}

/// An indeterminate of the expression kernel.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Atom {
    Coord(Symbol),
    Jet(JetKey),
    Param(Symbol),
    Ln(Arc<Expr>),
    Exp(Arc<Expr>),
}

impl Atom {
    pub fn coord(name: &str) -> Self {
        Atom::Coord(Symbol::new(name))
    }

    pub fn param(name: &str) -> Self {
        Atom::Param(Symbol::new(name))
    }

    pub fn jet(key: JetKey) -> Self {
        Atom::Jet(key)
    }

    fn rank(&self) -> u8 {
        match self {
            Atom::Coord(_) => 0,
            Atom::Jet(_) => 1,
            Atom::Param(_) => 2,
            Atom::Ln(_) => 3,
            Atom::Exp(_) => 4,
        }
    }

    pub fn inner(&self) -> Option<&Expr> {
        match self {
            Atom::Ln(e) | Atom::Exp(e) => Some(e),
            _ => None,
        }
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.rank().cmp(&other.rank()) {
            Ordering::Equal => match (self, other) {
                (Atom::Coord(a), Atom::Coord(b)) => a.cmp(b),
                (Atom::Jet(a), Atom::Jet(b)) => a.cmp(b),
                (Atom::Param(a), Atom::Param(b)) => a.cmp(b),
                (Atom::Ln(a), Atom::Ln(b)) => a.cmp(b),
                (Atom::Exp(a), Atom::Exp(b)) => a.cmp(b),
                _ => unreachable!("rank already compared"),
            },
            o => o,
        }
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Coord(s) | Atom::Param(s) => write!(f, "{s}"),
            Atom::Jet(k) => write!(f, "{k}"),
            Atom::Ln(e) => write!(f, "ln({e})"),
            Atom::Exp(e) => write!(f, "exp({e})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jet_order_cap() {
        assert!(JetKey::xt(Dependent::A, 2, 1).is_ok());
        assert!(JetKey::xt(Dependent::A, 2, 2).is_err());
        let k = JetKey::xt(Dependent::B, 1, 2).unwrap();
        assert!(k.derive(0).is_err());
    }

    #[test]
    fn jet_display() {
        assert_eq!(JetKey::base(Dependent::A).to_string(), "a");
        assert_eq!(JetKey::xt(Dependent::A, 1, 0).unwrap().to_string(), "a_x");
        assert_eq!(JetKey::xt(Dependent::C, 1, 1).unwrap().to_string(), "c_xt");
        assert_eq!(JetKey::xt(Dependent::B, 2, 1).unwrap().to_string(), "b_xxt");
        assert_eq!(
            JetKey::new(Dependent::A, [0, 1, 0, 1]).unwrap().to_string(),
            "a_24"
        );
        assert_eq!(JetKey::xt(Dependent::F, 2, 0).unwrap().to_string(), "f_ww");
    }

    #[test]
    fn atom_order_kinds() {
        let x = Atom::coord("x");
        let jet = Atom::jet(JetKey::base(Dependent::A));
        let p = Atom::param("r1");
        assert!(x < jet);
        assert!(jet < p);
    }
}
