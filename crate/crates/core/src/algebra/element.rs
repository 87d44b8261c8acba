use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::presentation::{AlgebraPresentation, DegreeBasis, Monomial};
use crate::error::{Error, Result};
use crate::linalg::{Fp, FpVector};

/// A homogeneous element: an F_p-combination of monomials of one degree.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    pres: Arc<AlgebraPresentation>,
    degree: u32,
    terms: BTreeMap<Monomial, u32>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        same_presentation(&self.pres, &other.pres) && self.degree == other.degree && self.terms == other.terms
    }
}

impl Eq for AlgebraElement {}

pub(crate) fn same_presentation(a: &Arc<AlgebraPresentation>, b: &Arc<AlgebraPresentation>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl AlgebraElement {
    pub fn zero(pres: &Arc<AlgebraPresentation>, degree: u32) -> Self {
        AlgebraElement { pres: pres.clone(), degree, terms: BTreeMap::new() }
    }

    pub fn one(pres: &Arc<AlgebraPresentation>) -> Self {
        Self::from_monomial(pres, pres.unit(), 1)
    }

    pub fn from_monomial(pres: &Arc<AlgebraPresentation>, m: Monomial, coeff: u32) -> Self {
        let degree = pres.monomial_degree(&m);
        let mut terms = BTreeMap::new();
        let c = coeff % pres.p();
        if c != 0 {
            terms.insert(m, c);
        }
        AlgebraElement { pres: pres.clone(), degree, terms }
    }

    pub fn generator(pres: &Arc<AlgebraPresentation>, name: &str) -> Result<Self> {
        let i = pres.generator_index(name).ok_or_else(|| Error::Parse(format!("unknown generator {name:?}")))?;
        Ok(Self::from_monomial(pres, pres.generator_monomial(i), 1))
    }

    pub fn presentation(&self) -> &Arc<AlgebraPresentation> {
        &self.pres
    }

    pub fn field(&self) -> Fp {
        self.pres.field()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if same_presentation(&self.pres, &other.pres) {
            Ok(())
        } else {
            Err(Error::PresentationMismatch)
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: u32) {
        let f = self.pres.field();
        if c.is_multiple_of(f.p()) {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c % f.p());
            }
            Entry::Occupied(mut e) => {
                let v = f.add(*e.get(), c);
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        if self.degree != other.degree {
            return Err(Error::Inhomogeneous(self.degree, other.degree));
        }
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(self.field().neg(1))
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field();
        let c = c % f.p();
        let terms =
            if c == 0 { BTreeMap::new() } else { self.terms.iter().map(|(m, &v)| (m.clone(), f.mul(v, c))).collect() };
        AlgebraElement { pres: self.pres.clone(), degree: self.degree, terms }
    }

    /// Graded-commutative product.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let f = self.field();
        let mut out = AlgebraElement::zero(&self.pres, self.degree + other.degree);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                if let Some((m, s)) = self.pres.multiply_monomials(a, b) {
                    out.add_term(m, f.mul(f.mul(ca, cb), s));
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = AlgebraElement::one(&self.pres);
        for _ in 0..e {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    /// Coordinates in the given degree basis.
    pub fn to_vector(&self, basis: &DegreeBasis) -> Result<FpVector> {
        let mut v = vec![0; basis.len()];
        for (m, &c) in &self.terms {
            let i = basis
                .index_of(m)
                .ok_or_else(|| Error::Dimension(format!("monomial outside basis of degree {}", self.degree)))?;
            v[i] = c;
        }
        Ok(v)
    }

    pub fn from_vector(pres: &Arc<AlgebraPresentation>, degree: u32, basis: &DegreeBasis, v: &[u32]) -> Self {
        let mut out = AlgebraElement::zero(pres, degree);
        for (m, &c) in basis.monomials.iter().zip(v) {
            if c != 0 {
                out.terms.insert(m.clone(), c);
            }
        }
        out
    }

    /// Rendering like `x1*u2 - x2*u1`, terms in basis order.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let f = self.field();
        let mut s = String::new();
        for (i, (m, &c)) in self.terms.iter().enumerate() {
            let sc = f.signed(c);
            let (neg, mag) = if sc < 0 { (true, (-sc) as u64) } else { (false, sc as u64) };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.pres.render_monomial(m);
            match (mag, mono.as_str()) {
                (1, _) => s.push_str(&mono),
                (_, "1") => s.push_str(&mag.to_string()),
                _ => {
                    s.push_str(&mag.to_string());
                    s.push('*');
                    s.push_str(&mono);
                }
            }
        }
        s
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
