//! Parser for the ASCII expression grammar.
//!
//! Identifiers are `[A-Za-z][A-Za-z0-9_]*`; integer literals and `p/q`
//! fractions; operators `+ - * / ^` with standard precedence and a
//! right-associative integer `^`; functions `ln(...)` and `exp(...)`;
//! parentheses.
//!
//! Reserved identifiers: `x`, `t`, `w` are coordinates; `a`, `b`, `c` are
//! the metric components with jet suffixes `a_x`, `b_xt`, `c_tt`, ...
//! (digit form `a_12` addresses the four-coordinate calculus); `f`, `h`,
//! `k` are the reduced dependents with suffixes `f_w`, `h_ww`, ...
//! Every other identifier is a free parameter.

use num::BigInt;
use num::rational::BigRational;

use crate::symexpr::atom::{Dependent, JetKey};
use crate::symexpr::expr::Expr;
use crate::symexpr::SymError;

pub fn parse(text: &str) -> Result<Expr, SymError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> SymError {
        SymError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, ch: u8) -> bool {
        if self.peek() == Some(ch) {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, SymError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SymError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat(b'/') {
                let rhs = self.unary()?;
                if rhs.is_zero() {
                    return Err(self.err("division by zero"));
                }
                acc = acc.div(&rhs)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, SymError> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, SymError> {
        let base = self.primary()?;
        if self.eat(b'^') {
            let e = self.exponent()?;
            return base.pow_int(e).map_err(|_| self.err("zero base with negative exponent"));
        }
        Ok(base)
    }

    /// Integer exponent: `3`, `-3`, `(-3)`, right-associative chains.
    fn exponent(&mut self) -> Result<i64, SymError> {
        let paren = self.eat(b'(');
        let neg = self.eat(b'-');
        let n = self.integer()?;
        let mut value = n;
        if self.eat(b'^') {
            let up = self.exponent()?;
            if up < 0 {
                return Err(self.err("negative exponent in exponent tower"));
            }
            value = n
                .checked_pow(up.try_into().map_err(|_| self.err("exponent too large"))?)
                .ok_or_else(|| self.err("exponent overflow"))?;
        }
        if paren && !self.eat(b')') {
            return Err(self.err("expected ')' after exponent"));
        }
        Ok(if neg { -value } else { value })
    }

    fn integer(&mut self) -> Result<i64, SymError> {
        let start = self.pos;
        while self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let v: i64 = s.parse().map_err(|_| self.err("integer literal out of range"))?;
        self.skip_ws();
        Ok(v)
    }

    fn primary(&mut self) -> Result<Expr, SymError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: BigInt = s.parse().unwrap();
                self.skip_ws();
                Ok(Expr::constant(BigRational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => self.identifier(),
            _ => Err(self.err("expected expression")),
        }
    }

    fn identifier(&mut self) -> Result<Expr, SymError> {
        let start = self.pos;
        while self
            .peek()
            .map(|c| c.is_ascii_alphanumeric() || c == b'_')
            .unwrap_or(false)
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
        self.skip_ws();
        if self.peek() == Some(b'(') {
            // Function application.
            self.pos += 1;
            self.skip_ws();
            let arg = self.expr()?;
            if !self.eat(b')') {
                return Err(self.err("expected ')' after function argument"));
            }
            return match name.as_str() {
                "ln" => Expr::ln(arg).map_err(|_| SymError::Parse {
                    pos: start,
                    msg: "ln of zero".to_string(),
                }),
                "exp" => Ok(Expr::exp(arg)),
                _ => Err(SymError::UnknownFunction { name, pos: start }),
            };
        }
        resolve_identifier(&name).ok_or(SymError::Parse {
            pos: start,
            msg: format!("malformed jet symbol '{name}'"),
        })
    }
}

/// Map an identifier to its atom per the reserved-name table.
fn resolve_identifier(name: &str) -> Option<Expr> {
    match name {
        "x" | "t" | "w" => return Some(Expr::coord(name)),
        "ln" | "exp" => return None,
        _ => {}
    }
    let mut chars = name.chars();
    let head = chars.next().expect("identifier nonempty");
    let rest: String = chars.collect();
    if let Some(dep) = Dependent::from_letter(head) {
        if rest.is_empty() {
            return Some(Expr::jet(JetKey::base(dep)));
        }
        if let Some(suffix) = rest.strip_prefix('_') {
            return jet_from_suffix(dep, suffix).map(Expr::jet);
        }
        // Names like "k3" fall through to parameters.
    }
    Some(Expr::param(name))
}

fn jet_from_suffix(dep: Dependent, suffix: &str) -> Option<JetKey> {
    if suffix.is_empty() {
        return None;
    }
    let mut mi = [0u8; 4];
    if dep.is_reduced() {
        if !suffix.chars().all(|c| c == 'w') {
            return None;
        }
        mi[0] = suffix.len() as u8;
    } else if suffix.chars().all(|c| c == 'x' || c == 't') {
        for c in suffix.chars() {
            match c {
                'x' => mi[0] += 1,
                't' => mi[1] += 1,
                _ => unreachable!(),
            }
        }
    } else if suffix.chars().all(|c| ('1'..='4').contains(&c)) {
        for c in suffix.chars() {
            mi[c as usize - '1' as usize] += 1;
        }
    } else {
        return None;
    }
    JetKey::new(dep, mi).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::atom::Atom;

    #[test]
    fn parse_basics() {
        let e = parse("r1*x + r2").unwrap();
        assert_eq!(e.num().len(), 2);
        assert!(parse("x - x").unwrap().is_zero());
        assert_eq!(parse("7/3").unwrap(), Expr::rational(7, 3));
    }

    #[test]
    fn parse_example_with_ln() {
        let e = parse("(r3^2/r1)*x - (r2*r3^2/r1^2)*ln(r1*x+r2)").unwrap();
        let mut has_ln = false;
        e.for_each_atom_deep(&mut |a| {
            if matches!(a, Atom::Ln(_)) {
                has_ln = true;
            }
        });
        assert!(has_ln);
    }

    #[test]
    fn parse_jets() {
        assert_eq!(parse("a_xt").unwrap(), Expr::jet(JetKey::xt(Dependent::A, 1, 1).unwrap()));
        assert_eq!(parse("b_12").unwrap(), Expr::jet(JetKey::xt(Dependent::B, 1, 1).unwrap()));
        assert_eq!(parse("f_ww").unwrap(), Expr::jet(JetKey::xt(Dependent::F, 2, 0).unwrap()));
        assert!(parse("a_z").is_err());
        assert!(parse("a_xxxx").is_err());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse("sin(x)"), Err(SymError::UnknownFunction { .. })));
        assert!(parse("1/0").is_err());
        assert!(parse("x +").is_err());
        assert!(parse("(x").is_err());
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(parse("2^3^2").unwrap(), Expr::int(512));
        assert_eq!(parse("-x^2").unwrap(), parse("0 - x^2").unwrap());
        assert_eq!(parse("x^-2").unwrap(), parse("1/x^2").unwrap());
        assert_eq!(parse("x^(-2)").unwrap(), parse("1/x^2").unwrap());
        assert_eq!(parse("6/2*x").unwrap(), parse("3*x").unwrap());
    }

    #[test]
    fn print_parse_fixpoint() {
        for text in [
            "r1*x + r2",
            "(r3^2/r1)*x - (r2*r3^2/r1^2)*ln(r1*x+r2)",
            "a_xx - b_tt",
            "(x^2 - t)/(x + 5)",
            "exp(2*s)*b + exp(s)*c",
        ] {
            let e = parse(text).unwrap();
            let printed = e.to_string();
            let back = parse(&printed).unwrap();
            assert_eq!(e, back, "fixpoint failed for {text} -> {printed}");
        }
    }
}
