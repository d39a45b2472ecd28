//! Text grammar for polynomials: variables `x1..xl`, integer or `p/q`
//! literals, `+ - * ^`, parentheses. Whitespace is ignored.

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::Polynomial;
use super::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("polynomial syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { offset: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digit string"))
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.digits()?;
            let e: u32 = match u32::try_from(e) {
                Ok(e) if e <= 64 => e,
                _ => return self.err("exponent too large"),
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'x') => {
                self.pos += 1;
                let idx = self.digits()?;
                let idx: usize = match usize::try_from(idx) {
                    Ok(i) if i >= 1 && i <= self.nvars => i,
                    _ => return self.err(format!("variable index out of range 1..={}", self.nvars)),
                };
                Ok(Polynomial::var(self.nvars, idx - 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.digits()?;
                let mut value = Rational::from_integer(n);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let d = self.digits()?;
                    if d.is_zero() {
                        return self.err("zero denominator");
                    }
                    value /= Rational::from_integer(d);
                }
                Ok(Polynomial::constant(self.nvars, Scalar::real(value)))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a polynomial in `nvars` variables.
pub fn parse_polynomial(src: &str, nvars: usize) -> Result<Polynomial, ParseError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, nvars };
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::rat;

    #[test]
    fn parses_grammar() {
        let p = parse_polynomial(" (x1 + 1/2*x2)^2 - x1*x2 ", 2).unwrap();
        let expected = &Polynomial::var(2, 0).pow(2) + &Polynomial::var(2, 1).pow(2).scale_rational(&rat(1, 4));
        assert_eq!(p, expected);
        assert_eq!(parse_polynomial("-3", 1).unwrap().constant_term(), Scalar::from_int(-3));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_polynomial("x3", 2).is_err());
        assert!(parse_polynomial("x1 +", 2).is_err());
        assert!(parse_polynomial("1/0", 2).is_err());
        assert!(parse_polynomial("x1 x2", 2).is_err());
    }

    #[test]
    fn display_round_trip() {
        let p = parse_polynomial("x1^3 - 2/3*x1*x2^2 + 5*x2 - 7", 2).unwrap();
        assert_eq!(parse_polynomial(&p.to_string(), 2).unwrap(), p);
    }
}
