//! Parsing of expressions such as `x1*u2^3 - 2*x2*u1 + 1`.

use std::sync::Arc;

use super::element::AlgebraElement;
use super::presentation::AlgebraPresentation;
use crate::error::{Error, Result};

/// One parsed summand: integer coefficient times an ordered product of
/// named factors with exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedTerm {
    pub coeff: i64,
    pub factors: Vec<(String, u32)>,
}

pub fn parse_terms(input: &str) -> Result<Vec<ParsedTerm>> {
    let mut p = TermParser { s: input.as_bytes(), pos: 0, src: input };
    let terms = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(terms)
}

struct TermParser<'a> {
    s: &'a [u8],
    pos: usize,
    src: &'a str,
}

impl TermParser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at column {} in {:?}", self.pos + 1, self.src))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Vec<ParsedTerm>> {
        let mut out = Vec::new();
        let mut sign = 1i64;
        match self.peek() {
            Some(b'-') => {
                sign = -1;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            None => return Err(self.err("empty expression")),
            _ => {}
        }
        loop {
            let mut t = self.term()?;
            t.coeff *= sign;
            out.push(t);
            match self.peek() {
                Some(b'+') => {
                    sign = 1;
                    self.pos += 1;
                }
                Some(b'-') => {
                    sign = -1;
                    self.pos += 1;
                }
                _ => return Ok(out),
            }
        }
    }

    fn term(&mut self) -> Result<ParsedTerm> {
        let mut t = ParsedTerm { coeff: 1, factors: Vec::new() };
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let n = self.number()?;
                    t.coeff = t.coeff.checked_mul(n).ok_or_else(|| self.err("coefficient overflow"))?;
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let name = self.ident();
                    let mut e = 1;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        e = u32::try_from(self.number()?).map_err(|_| self.err("exponent too large"))?;
                    }
                    t.factors.push((name, e));
                }
                _ => return Err(self.err("expected a number or a name")),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok(t);
            }
        }
    }

    fn number(&mut self) -> Result<i64> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.src[start..self.pos].parse().map_err(|_| self.err("bad number"))
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        self.src[start..self.pos].to_string()
    }
}

impl AlgebraElement {
    /// Parse a homogeneous expression. `"0"` needs `degree` to be given.
    pub fn parse(pres: &Arc<AlgebraPresentation>, input: &str, degree: Option<u32>) -> Result<Self> {
        let f = pres.field();
        let mut acc: Option<AlgebraElement> = degree.map(|d| AlgebraElement::zero(pres, d));
        for t in parse_terms(input)? {
            if t.factors.is_empty() && f.reduce(t.coeff) == 0 {
                continue;
            }
            let mut prod = AlgebraElement::one(pres);
            for (name, e) in &t.factors {
                let g = AlgebraElement::generator(pres, name)?;
                prod = prod.multiply(&g.pow(*e)?)?;
            }
            let prod = prod.scale(f.reduce(t.coeff));
            // a zero coefficient still fixes the degree of its term
            let term_degree = prod.degree();
            acc = Some(match acc {
                None => prod,
                Some(a) if a.degree() == term_degree => a.add(&prod)?,
                Some(a) => return Err(Error::Inhomogeneous(a.degree(), term_degree)),
            });
        }
        acc.ok_or_else(|| Error::Parse(format!("cannot infer the degree of {input:?}")))
    }
}
