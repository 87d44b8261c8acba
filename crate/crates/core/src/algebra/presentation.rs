use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Fp;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorKind {
    /// Unbounded powers allowed. Odd degree only when p = 2.
    Polynomial,
    /// Odd degree, squares to zero.
    Exterior,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    pub kind: GeneratorKind,
}

/// A free graded-commutative algebra over F_p: polynomial generators
/// tensored with an exterior algebra on odd generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraPresentation {
    field: Fp,
    gens: Vec<Generator>,
}

impl AlgebraPresentation {
    pub fn new(field: Fp, gens: Vec<Generator>) -> Result<Arc<Self>> {
        let mut seen = HashSet::new();
        for g in &gens {
            if g.name.is_empty() || !g.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::Presentation(format!("bad generator name {:?}", g.name)));
            }
            if g.name.starts_with(|c: char| c.is_ascii_digit()) {
                return Err(Error::Presentation(format!("generator name {:?} starts with a digit", g.name)));
            }
            if !seen.insert(g.name.clone()) {
                return Err(Error::Presentation(format!("duplicate generator {:?}", g.name)));
            }
            if g.degree == 0 {
                return Err(Error::Presentation(format!("generator {} has degree 0", g.name)));
            }
            match g.kind {
                GeneratorKind::Exterior if g.degree % 2 == 0 => {
                    return Err(Error::Presentation(format!("exterior generator {} has even degree", g.name)));
                }
                GeneratorKind::Polynomial if g.degree % 2 == 1 && field.p() != 2 => {
                    return Err(Error::Presentation(format!("odd polynomial generator {} requires p = 2", g.name)));
                }
                _ => {}
            }
        }
        Ok(Arc::new(AlgebraPresentation { field, gens }))
    }

    /// The ground field on its own, concentrated in degree 0.
    pub fn ground(field: Fp) -> Arc<Self> {
        Arc::new(AlgebraPresentation { field, gens: Vec::new() })
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn is_polynomial_index(&self, i: usize) -> bool {
        self.gens[i].kind == GeneratorKind::Polynomial
    }

    /// Monomial basis of the degree-`q` component, in descending
    /// lexicographic order of exponent vectors (declaration order).
    pub fn degree_basis(&self, q: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.gens.len()];
        self.enumerate(0, q, &mut exps, &mut out);
        out
    }

    fn enumerate(&self, i: usize, remaining: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == self.gens.len() {
            if remaining == 0 {
                out.push(Monomial { exps: exps.clone() });
            }
            return;
        }
        let g = &self.gens[i];
        let max = match g.kind {
            GeneratorKind::Exterior => (remaining / g.degree).min(1),
            GeneratorKind::Polynomial => remaining / g.degree,
        };
        for e in (0..=max).rev() {
            exps[i] = e;
            self.enumerate(i + 1, remaining - e * g.degree, exps, out);
        }
        exps[i] = 0;
    }

    pub fn dim(&self, q: u32) -> usize {
        self.degree_basis(q).len()
    }

    /// Monomials of degree `q` involving only polynomial generators.
    pub fn polynomial_basis(&self, q: u32) -> Vec<Monomial> {
        self.degree_basis(q)
            .into_iter()
            .filter(|m| m.exps.iter().enumerate().all(|(i, &e)| e == 0 || self.is_polynomial_index(i)))
            .collect()
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.exps.iter().zip(&self.gens).map(|(e, g)| e * g.degree).sum()
    }

    pub fn unit(&self) -> Monomial {
        Monomial { exps: vec![0; self.gens.len()] }
    }

    pub fn generator_monomial(&self, i: usize) -> Monomial {
        let mut exps = vec![0; self.gens.len()];
        exps[i] = 1;
        Monomial { exps }
    }

    /// Product of two basis monomials: the result and the sign residue, or
    /// `None` when an exterior generator would repeat.
    pub fn multiply_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, u32)> {
        let mut swaps = 0usize;
        let mut later_odd_in_a = 0usize;
        // walk from the end so each odd factor of b counts odd factors of a
        // that sit after it in declaration order
        for i in (0..self.gens.len()).rev() {
            if self.gens[i].kind == GeneratorKind::Exterior {
                if a.exps[i] == 1 && b.exps[i] == 1 {
                    return None;
                }
                if b.exps[i] == 1 {
                    swaps += later_odd_in_a;
                }
                if a.exps[i] == 1 {
                    later_odd_in_a += 1;
                }
            }
        }
        let exps = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
        Some((Monomial { exps }, self.field.sign(swaps % 2 == 1)))
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .exps
            .iter()
            .zip(&self.gens)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, g)| if e == 1 { g.name.clone() } else { format!("{}^{}", g.name, e) })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for AlgebraPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let poly: Vec<String> = self
            .gens
            .iter()
            .filter(|g| g.kind == GeneratorKind::Polynomial)
            .map(|g| format!("{}({})", g.name, g.degree))
            .collect();
        let ext: Vec<String> = self
            .gens
            .iter()
            .filter(|g| g.kind == GeneratorKind::Exterior)
            .map(|g| format!("{}({})", g.name, g.degree))
            .collect();
        write!(f, "F_{}[{}]", self.p(), poly.join(", "))?;
        if !ext.is_empty() {
            write!(f, " ⊗ Λ({})", ext.join(", "))?;
        }
        Ok(())
    }
}

/// Exponent vector in generator declaration order. The basis element it
/// names is the product of its generators taken in that order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub(crate) exps: Vec<u32>,
}

impl Monomial {
    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }
}

// Larger exponent vectors first, matching `degree_basis`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.exps.cmp(&self.exps)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Cached monomial basis of one degree with a reverse index.
#[derive(Clone, Debug)]
pub struct DegreeBasis {
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl DegreeBasis {
    pub fn new(monomials: Vec<Monomial>) -> Self {
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        DegreeBasis { monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// Degree bases `0..=max_degree` of one presentation.
#[derive(Clone, Debug)]
pub struct BasisTable {
    pres: Arc<AlgebraPresentation>,
    degrees: Vec<DegreeBasis>,
}

impl BasisTable {
    pub fn new(pres: &Arc<AlgebraPresentation>, max_degree: u32) -> Self {
        let degrees = (0..=max_degree).map(|q| DegreeBasis::new(pres.degree_basis(q))).collect();
        BasisTable { pres: pres.clone(), degrees }
    }

    pub fn presentation(&self) -> &Arc<AlgebraPresentation> {
        &self.pres
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees.len() as u32 - 1
    }

    pub fn degree(&self, q: u32) -> Option<&DegreeBasis> {
        self.degrees.get(q as usize)
    }

    pub fn dim(&self, q: u32) -> usize {
        self.degree(q).map_or(0, |b| b.len())
    }
}
