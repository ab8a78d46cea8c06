//! Text syntax for polynomials: `x1^2*x2 - 3/4*x3^5`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{AlgebraError, Result};
use crate::poly::{Polynomial, RingRef};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

struct Parser<'a> {
    ring: &'a RingRef,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    col_offset: usize,
    end_col: usize,
}

fn lex(src: &str, line: usize, col_offset: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = src.chars().collect();
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
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().unwrap()), start));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(AlgebraError::Parse {
                line,
                column: col_offset + i + 1,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let col = self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col);
        Err(AlgebraError::Parse { line: self.line, column: self.col_offset + col + 1, message: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = if self.eat('-') {
            -&self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if self.eat('/') {
                let d = self.power()?;
                if !d.is_constant() || d.is_zero() {
                    return self.err("division only by nonzero constants");
                }
                acc = acc.scalar_mul(&d.constant_term().inv());
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Int(k)) => {
                    self.pos += 1;
                    let k: u32 = k.try_into().map_err(|_| AlgebraError::Invalid("exponent too large".into()))?;
                    Ok(base.pow(k))
                }
                _ => self.err("expected integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let c = self.ring.field().from_rational(&BigRational::from_integer(n))?;
                Ok(Polynomial::constant(self.ring, c))
            }
            Some(Tok::Ident(name)) => match self.ring.var_index(&name) {
                Some(i) => {
                    self.pos += 1;
                    Ok(Polynomial::var(self.ring, i))
                }
                None => self.err(format!("undeclared variable `{name}`")),
            },
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-&self.power()?)
            }
            _ => self.err("expected a number, variable or `(`"),
        }
    }
}

/// Parses a polynomial in `ring`.
pub fn parse_polynomial(ring: &RingRef, src: &str) -> Result<Polynomial> {
    parse_polynomial_at(ring, src, 1, 0)
}

/// Like [`parse_polynomial`], reporting positions relative to a line and
/// column offset inside a larger file.
pub fn parse_polynomial_at(ring: &RingRef, src: &str, line: usize, col_offset: usize) -> Result<Polynomial> {
    let toks = lex(src, line, col_offset)?;
    let mut p = Parser { ring, toks, pos: 0, line, col_offset, end_col: src.chars().count() };
    if p.toks.is_empty() {
        return p.err("empty polynomial");
    }
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

/// Parses a comma-separated list of polynomials.
pub fn parse_polynomial_list(ring: &RingRef, src: &str) -> Result<Vec<Polynomial>> {
    parse_polynomial_list_at(ring, src, 1, 0)
}

/// Like [`parse_polynomial_list`] with positions inside a larger file.
pub fn parse_polynomial_list_at(ring: &RingRef, src: &str, line: usize, col_offset: usize) -> Result<Vec<Polynomial>> {
    let mut out = Vec::new();
    let mut offset = col_offset;
    for piece in src.split(',') {
        if !piece.trim().is_empty() {
            out.push(parse_polynomial_at(ring, piece, line, offset)?);
        }
        offset += piece.chars().count() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::poly::Ring;

    #[test]
    fn parses_rational_coefficients() {
        let r = Ring::new(Field::Rational, ["x1", "x2", "x3"]);
        let f = parse_polynomial(&r, "x1^2*x2 - 3/4*x3^5").unwrap();
        assert_eq!(f.to_string(), "-3/4*x3^5 + x1^2*x2");
        assert_eq!(parse_polynomial(&r, "-(x1 - 1)^2").unwrap().to_string(), "-x1^2 + 2*x1 - 1");
    }

    #[test]
    fn reports_columns() {
        let r = Ring::new(Field::Rational, ["x"]);
        match parse_polynomial(&r, "x + y") {
            Err(AlgebraError::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
        assert!(parse_polynomial(&r, "x +").is_err());
        assert!(parse_polynomial(&r, "x # 2").is_err());
    }

    #[test]
    fn prime_field_reduction() {
        let r = Ring::new(Field::prime(5).unwrap(), ["x"]);
        assert_eq!(parse_polynomial(&r, "7*x + 1/2").unwrap().to_string(), "2*x + 3");
    }
}
