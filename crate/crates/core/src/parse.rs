//! Text grammar for polynomials.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' integer)?
//! primary := integer ('/' integer)? | identifier | 'zeta' | '(' expr ')'
//! ```
//!
//! Whitespace is ignored and implicit multiplication is rejected. Error
//! columns are 1-based character positions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing, Ring};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Bad(char),
}

fn syntax(column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { column, message: message.into() }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().unwrap()), col));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            // reported when the parser reaches it, so earlier errors win
            _ => Tok::Bad(c),
        };
        out.push((t, col));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
    ring: &'a Ring,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        if let Some(Tok::Minus) = self.peek() {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.primary()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let col = self.col();
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| syntax(col, "exponent too large"))?;
                    if e > 1000 {
                        return Err(syntax(col, "exponent too large"));
                    }
                    return Ok(base.pow(e));
                }
                _ => return Err(syntax(col, "expected a non-negative integer exponent")),
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Poly> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Int(p)) => {
                self.pos += 1;
                let mut value = BigRational::from_integer(p);
                if let Some(Tok::Slash) = self.peek() {
                    self.pos += 1;
                    let qcol = self.col();
                    match self.peek().cloned() {
                        Some(Tok::Int(q)) if !q.is_zero() => {
                            self.pos += 1;
                            value /= BigRational::from_integer(q);
                        }
                        Some(Tok::Int(_)) => return Err(syntax(qcol, "zero denominator")),
                        _ => return Err(syntax(qcol, "expected an integer denominator")),
                    }
                }
                Ok(Poly::constant(self.ring, Scalar::from_rational(value)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "zeta" {
                    return match self.ring.field().zeta() {
                        Some(z) => Ok(Poly::constant(self.ring, z)),
                        None => Err(Error::NotInField(format!(
                            "`zeta` at column {col} over {}",
                            self.ring.field()
                        ))),
                    };
                }
                match self.ring.var_index(&name) {
                    Some(i) => Ok(Poly::var(self.ring, i)),
                    None => Err(Error::UnknownVariable(name)),
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(syntax(self.col(), "expected `)`")),
                }
            }
            Some(Tok::Bad(c)) => Err(syntax(col, format!("unexpected character `{c}`"))),
            Some(t) => Err(syntax(col, format!("unexpected token {t:?}"))),
            None => Err(syntax(col, "unexpected end of input")),
        }
    }
}

/// Parses `text` as a polynomial of `ring`.
pub fn parse_poly(text: &str, ring: &Ring) -> Result<Poly> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, end_col: text.chars().count() + 1, ring };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(syntax(p.col(), "unexpected trailing input (implicit multiplication is not allowed)"));
    }
    Ok(out)
}

/// Parses a field constant such as `-3/2` or `1 + zeta`.
pub fn parse_scalar(text: &str, field: &Field) -> Result<Scalar> {
    let empty: Ring = PolyRing::new::<&str>(&[], field.clone())?;
    let p = parse_poly(text, &empty)?;
    Ok(p.as_constant().expect("no variables"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    #[test]
    fn reads_terms() {
        let r = PolyRing::rational(&["x", "y", "z"]);
        let f = parse_poly("x^2*y - 3/2", &r).unwrap();
        assert_eq!(f.nterms(), 2);
        assert_eq!(f.coeff(&Monomial(vec![2, 1, 0])), Scalar::one());
        assert_eq!(f.coeff(&Monomial(vec![0, 0, 0])), Scalar::frac(-3, 2));
        assert!(parse_poly("0", &r).unwrap().is_zero());
        assert_eq!(parse_poly(" -x^2 ", &r).unwrap().to_string(), "-x^2");
        assert_eq!(parse_poly("(x+y)^2", &r).unwrap().to_string(), "x^2 + 2*x*y + y^2");
    }

    #[test]
    fn errors() {
        let r = PolyRing::rational(&["x", "y", "z"]);
        match parse_poly("z(1,", &r) {
            Err(Error::Syntax { column, .. }) => assert_eq!(column, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(parse_poly("w + 1", &r), Err(Error::UnknownVariable("w".into())));
        assert!(matches!(parse_poly("zeta*x", &r), Err(Error::NotInField(_))));
        assert!(matches!(parse_poly("2x", &r), Err(Error::Syntax { column: 2, .. })));
        assert!(matches!(parse_poly("x/2", &r), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("x^", &r), Err(Error::Syntax { column: 3, .. })));
    }

    #[test]
    fn cyclotomic_root() {
        let r = PolyRing::new(&["x"], Field::Cyclotomic(4)).unwrap();
        let f = parse_poly("x - zeta", &r).unwrap();
        assert!(f.evaluate(&[Scalar::zeta(4)]).unwrap().is_zero());
        let g = parse_poly("(1 + 2*zeta)*x^2 - zeta", &r).unwrap();
        assert_eq!(parse_poly(&g.to_string(), &r).unwrap(), g);
    }
}
