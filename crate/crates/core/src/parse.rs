//! Recursive-descent parser for polynomial text.
//!
//! Grammar (no implicit multiplication):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | power
//! power := atom ('^' integer)?
//! atom  := integer | identifier | '(' expr ')'
//! ```

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(String),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Int(chars[start..i].iter().collect()), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if "+-*^()".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(Error::Syntax { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Arc<PolyRing>,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    resolve: &'a dyn Fn(&str) -> Option<Poly>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Op('+')) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Op('-')) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op('*')) = self.peek() {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let at = self.here();
            match self.toks.get(self.pos).cloned() {
                Some((Tok::Int(s), _)) => {
                    self.pos += 1;
                    let e: u32 = s
                        .parse()
                        .map_err(|_| Error::Syntax { pos: at, msg: "exponent too large".into() })?;
                    if let Some(d) = base.total_degree() {
                        if d.saturating_mul(e as u64) > u32::MAX as u64 {
                            return Err(Error::Overflow);
                        }
                    }
                    Ok(base.pow(e as u64))
                }
                _ => Err(Error::Syntax { pos: at, msg: "expected a nonnegative integer exponent".into() }),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let at = self.here();
        match self.toks.get(self.pos).cloned() {
            Some((Tok::Int(s), _)) => {
                self.pos += 1;
                let p = self.ring.p() as u64;
                let v = s.bytes().fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p);
                Ok(self.ring.constant(v as u32))
            }
            Some((Tok::Ident(name), pos)) => {
                self.pos += 1;
                if let Some(i) = self.ring.var_index(&name) {
                    return Ok(self.ring.var(i));
                }
                match (self.resolve)(&name) {
                    Some(p) if p.ring().as_ref() == self.ring.as_ref() => Ok(p),
                    Some(_) => Err(Error::RingMismatch),
                    None => Err(Error::UnknownVariable { name, pos }),
                }
            }
            Some((Tok::Op('('), _)) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(Error::Syntax { pos: self.here(), msg: "expected `)`".into() }),
                }
            }
            Some((t, _)) => Err(Error::Syntax { pos: at, msg: format!("unexpected token {}", describe(&t)) }),
            None => Err(Error::Syntax { pos: at, msg: "unexpected end of input".into() }),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(s) | Tok::Ident(s) => format!("`{s}`"),
        Tok::Op(c) => format!("`{c}`"),
    }
}

/// Parses `text` as a polynomial in `ring`.
pub fn parse_poly(ring: &Arc<PolyRing>, text: &str) -> Result<Poly> {
    parse_poly_with(ring, text, &|_| None)
}

/// Like [`parse_poly`], but identifiers that are not ring variables are looked up
/// through `resolve` (used by the session DSL for named bindings).
pub fn parse_poly_with(ring: &Arc<PolyRing>, text: &str, resolve: &dyn Fn(&str) -> Option<Poly>) -> Result<Poly> {
    let toks = tokenize(text)?;
    let end = text.chars().count();
    let mut parser = Parser { ring, toks, pos: 0, end, resolve };
    let out = parser.expr()?;
    if parser.pos != parser.toks.len() {
        let (t, pos) = &parser.toks[parser.pos];
        return Err(Error::Syntax { pos: *pos, msg: format!("unexpected token {}", describe(t)) });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MonomialOrder;

    #[test]
    fn grammar_cases() {
        let r = PolyRing::new(2, &["x", "y"], MonomialOrder::Grevlex).unwrap();
        let f = parse_poly(&r, "x^2 + y^3").unwrap();
        assert_eq!(f.terms().len(), 2);
        assert_eq!(f.coeff(&[2, 0]), 1);
        assert_eq!(f.coeff(&[0, 3]), 1);

        let r3 = PolyRing::new(3, &["x"], MonomialOrder::Lex).unwrap();
        assert!(parse_poly(&r3, "3*x").unwrap().is_zero());
        assert_eq!(parse_poly(&r3, "-x^2").unwrap().to_string(), "2*x^2");
        assert_eq!(parse_poly(&r3, "(x+1)^3").unwrap().to_string(), "x^3 + 1");
    }

    #[test]
    fn errors_carry_positions() {
        let r = PolyRing::new(2, &["x", "y"], MonomialOrder::Grevlex).unwrap();
        assert_eq!(parse_poly(&r, "x + w"), Err(Error::UnknownVariable { name: "w".into(), pos: 4 }));
        assert!(matches!(parse_poly(&r, "x +"), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse_poly(&r, "xy"), Err(Error::UnknownVariable { .. })));
        assert!(matches!(parse_poly(&r, "x y"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly(&r, "x^y"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly(&r, "(x"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly(&r, "x $ y"), Err(Error::Syntax { pos: 2, .. })));
    }

    #[test]
    fn d4_equation() {
        let r = PolyRing::new(2, &["x", "y", "z"], MonomialOrder::Grevlex).unwrap();
        let h = parse_poly(&r, "z^2 + x*y*z + x*y^2 + x^2*y").unwrap();
        assert_eq!(h.terms().len(), 4);
        assert_eq!(parse_poly(&r, &h.to_string()).unwrap(), h);
    }
}
