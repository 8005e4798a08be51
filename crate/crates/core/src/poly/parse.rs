//! Recursive-descent parser for the ASCII polynomial grammar.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*          division only by nonzero constants
//! unary := ('-' | '+') unary | power
//! power := atom ('^' '-'? integer)?            negative powers only of parameter monomials
//! atom  := integer | ident | '(' expr ')'
//! ```
//!
//! `d l m n` (or `∂ λ μ ν`) are the indeterminates; other identifiers must be declared
//! parameters or bound names.

use std::collections::BTreeMap;

use num::{BigInt, One, Zero};

use super::{Monomial, Poly, Q};
use crate::error::{Error, Result};
use crate::sym::Var;

#[derive(Clone, Debug, Default)]
pub struct ParseContext {
    pub params: Vec<String>,
    /// Names that expand to fixed polynomials.
    pub bindings: BTreeMap<String, Poly>,
    /// Treat every unknown identifier as a parameter.
    pub any_param: bool,
}

impl ParseContext {
    pub fn with_params(params: &[&str]) -> Self {
        ParseContext {
            params: params.iter().map(|s| s.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn permissive() -> Self {
        ParseContext { any_param: true, ..Default::default() }
    }
}

/// Parses with no parameters declared.
pub fn parse(src: &str) -> Result<Poly> {
    parse_with(src, &ParseContext::default())
}

pub fn parse_with(src: &str, ctx: &ParseContext) -> Result<Poly> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut p = Parser { src, chars, pos: 0, ctx };
    let out = p.expr()?;
    p.skip_ws();
    if let Some(&(at, c)) = p.chars.get(p.pos) {
        return Err(Error::Syntax { position: at, message: format!("unexpected `{c}`") });
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
    ctx: &'a ParseContext,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map(|(i, _)| *i).unwrap_or(self.src.len())
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { position: self.offset(), message: message.into() })
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc += self.term()?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc -= &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some('/') => {
                    self.pos += 1;
                    let at = self.offset();
                    let rhs = self.unary()?;
                    match rhs.constant_value() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                        Some(_) => {
                            return Err(Error::Syntax { position: at, message: "division by zero".into() })
                        }
                        None => {
                            return Err(Error::Syntax {
                                position: at,
                                message: "division is only by nonzero constants".into(),
                            })
                        }
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let at = self.offset();
        let n = self.integer()?;
        let e: u32 = n
            .try_into()
            .map_err(|_| Error::Syntax { position: at, message: "exponent too large".into() })?;
        if !negative {
            return Ok(base.pow(e));
        }
        let (m, c) = match base.leading_term() {
            Some((m, c)) if base.len() == 1 && m.all_vars(|v| !v.is_indeterminate()) => (m.clone(), c.clone()),
            _ => {
                return Err(Error::Syntax {
                    position: at,
                    message: "negative exponents apply only to parameter monomials".into(),
                })
            }
        };
        let inv = m.iter().fold(Monomial::one(), |acc, (v, k)| acc.mul(&Monomial::var(v, -k)));
        Ok(Poly::term(c.recip(), inv).pow(e))
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let text: String = self.chars[start..self.pos].iter().map(|(_, c)| *c).collect();
        Ok(text.parse().expect("digits parse as integer"))
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Poly::constant(Q::from_integer(n)))
            }
            Some(c) if c.is_alphabetic() || c == '_' || c == '∂' => self.ident(),
            Some(c) => self.err(format!("unexpected `{c}`")),
            None => self.err("unexpected end of input"),
        }
    }

    fn ident(&mut self) -> Result<Poly> {
        let start = self.pos;
        let at = self.offset();
        if self.chars[self.pos].1 == '∂' {
            self.pos += 1;
        } else {
            while self
                .chars
                .get(self.pos)
                .is_some_and(|(_, c)| c.is_alphanumeric() || *c == '_')
            {
                self.pos += 1;
            }
        }
        let name: String = self.chars[start..self.pos].iter().map(|(_, c)| *c).collect();
        let var = match name.as_str() {
            "d" | "∂" => Some(Var::D),
            "l" | "λ" => Some(Var::Lambda),
            "m" | "μ" => Some(Var::Mu),
            "n" | "ν" => Some(Var::Nu),
            _ => None,
        };
        if let Some(v) = var {
            return Ok(Poly::var(v));
        }
        if let Some(p) = self.ctx.bindings.get(&name) {
            return Ok(p.clone());
        }
        if self.ctx.any_param || self.ctx.params.contains(&name) {
            return Ok(Poly::param(&name));
        }
        Err(Error::UnknownSymbol { name, position: at })
    }
}

impl Poly {
    /// Parses with every non-reserved identifier treated as a parameter.
    pub fn parse_permissive(src: &str) -> Result<Poly> {
        parse_with(src, &ParseContext::permissive())
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q_frac;

    #[test]
    fn precedence() {
        assert_eq!(parse("-d^2").unwrap(), -parse("d*d").unwrap());
        assert_eq!(parse("1 + 2*3").unwrap(), Poly::int(7));
        assert_eq!(parse("(1 + 2)*3").unwrap(), Poly::int(9));
        assert_eq!(parse("3/2").unwrap(), Poly::constant(q_frac(3, 2)));
        assert_eq!(parse("∂ + λ").unwrap(), parse("d + l").unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        match parse("d + + ") {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 6),
            other => panic!("{other:?}"),
        }
        match parse("d + zeta") {
            Err(Error::UnknownSymbol { name, position }) => {
                assert_eq!(name, "zeta");
                assert_eq!(position, 4);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("d / l"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("d^-1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("(d"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn bindings_expand() {
        let mut ctx = ParseContext::default();
        ctx.bindings.insert("x".into(), parse("d + 1").unwrap());
        assert_eq!(parse_with("x^2", &ctx).unwrap(), parse("d^2 + 2*d + 1").unwrap());
    }
}
