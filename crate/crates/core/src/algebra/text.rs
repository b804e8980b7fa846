//! Polynomial text syntax: `3*x^2*y - z*u`, `(x + y)^2`, `1/2*x`.

use std::fmt;

use num::bigint::BigInt;

use super::field::Field;
use super::monomial::Monomial;
use super::polynomial::Polynomial;

/// Parse failure with a byte offset into the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TextError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for TextError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at offset {}", self.message, self.offset)
    }
}

impl std::error::Error for TextError {}

// keeps `(x+y)^k` style inputs from exploding
const MAX_TERMS: usize = 20_000;
const MAX_DEGREE: u32 = 512;
const MAX_EXPONENT: u32 = 256;

pub fn parse_polynomial<K: Field>(text: &str, vars: &[String]) -> Result<Polynomial<K>, TextError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, vars };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> TextError {
        TextError { offset: self.pos, message: msg.to_string() }
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

    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn guard<K: Field>(&self, p: Polynomial<K>) -> Result<Polynomial<K>, TextError> {
        if p.len() > MAX_TERMS || p.total_degree().unwrap_or(0) > MAX_DEGREE {
            return Err(self.err("polynomial too large"));
        }
        Ok(p)
    }

    fn expr<K: Field>(&mut self) -> Result<Polynomial<K>, TextError> {
        let mut acc = Polynomial::zero(self.nvars());
        let mut first = true;
        loop {
            let neg = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => break,
            };
            first = false;
            let t = self.term()?;
            acc = if neg { acc.sub(&t) } else { acc.add(&t) };
            acc = self.guard(acc)?;
        }
        Ok(acc)
    }

    fn term<K: Field>(&mut self) -> Result<Polynomial<K>, TextError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = self.guard(acc.mul(&f))?;
        }
        Ok(acc)
    }

    fn factor<K: Field>(&mut self) -> Result<Polynomial<K>, TextError> {
        let base: Polynomial<K> = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e.try_into().ok().filter(|&e| e <= MAX_EXPONENT).ok_or_else(|| self.err("exponent too large"))?;
            if base.len() == 1 {
                // single term: raise exponents directly
                let (m, c) = &base.terms()[0];
                if m.degree() as u64 * e as u64 > MAX_DEGREE as u64 {
                    return Err(self.err("polynomial too large"));
                }
                let exps: Vec<u16> = m.exponents().iter().map(|&x| x * e as u16).collect();
                let mut coeff = K::one();
                for _ in 0..e {
                    coeff = coeff * c.clone();
                }
                return Ok(Polynomial::term(Monomial::from_exponents(&exps), coeff));
            }
            let mut acc = Polynomial::one(self.nvars());
            for _ in 0..e {
                acc = self.guard(acc.mul(&base))?;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom<K: Field>(&mut self) -> Result<Polynomial<K>, TextError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.bigint()?;
                let mut value = K::from_bigint(&n);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let d = self.bigint()?;
                    let dv = K::from_bigint(&d);
                    value = value.div(&dv).ok_or_else(|| self.err("division by zero"))?;
                }
                Ok(Polynomial::constant(self.nvars(), value))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                match self.vars.iter().position(|v| v == name) {
                    Some(i) => Ok(Polynomial::var(self.nvars(), i)),
                    None => {
                        self.pos = start;
                        Err(self.err(&format!("unknown variable `{name}`")))
                    }
                }
            }
            Some(_) => Err(self.err("expected a number, variable or `(`")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> Result<&'a str, TextError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("0"))
    }

    fn bigint(&mut self) -> Result<BigInt, TextError> {
        let s = self.digits()?;
        if s.len() > 200 {
            return Err(self.err("integer literal too long"));
        }
        s.parse::<BigInt>().map_err(|_| self.err("bad integer"))
    }

    fn integer(&mut self) -> Result<u64, TextError> {
        let s = self.digits()?;
        s.parse::<u64>().map_err(|_| self.err("exponent too large"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{Rational, F32003};

    fn names() -> Vec<String> {
        ["x", "y", "z", "u"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_and_prints() {
        let p: Polynomial<F32003> = parse_polynomial("3*x^2*y - z*u", &names()).unwrap();
        assert_eq!(p.fmt_with(&names()), "3*x^2*y - z*u");
        let q: Polynomial<F32003> = parse_polynomial("(x+y)*(x-y)", &names()).unwrap();
        assert_eq!(q.fmt_with(&names()), "x^2 - y^2");
        let r: Polynomial<Rational> = parse_polynomial("1/2*x - 1", &names()).unwrap();
        assert_eq!(r.fmt_with(&names()), "(1/2)*x - 1");
        let s: Polynomial<F32003> = parse_polynomial("-x^0", &names()).unwrap();
        assert_eq!(s.fmt_with(&names()), "-1");
    }

    #[test]
    fn reports_errors() {
        let e = parse_polynomial::<F32003>("x + w", &names()).unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(parse_polynomial::<F32003>("x +", &names()).is_err());
        assert!(parse_polynomial::<F32003>("(x", &names()).is_err());
        assert!(parse_polynomial::<F32003>("x 2", &names()).is_err());
        assert!(parse_polynomial::<F32003>("1/0", &names()).is_err());
        assert!(parse_polynomial::<F32003>("((x+y)^100)^100", &names()).is_err());
    }
}
