use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::element::{same_presentation, AlgebraElement};
use super::presentation::{AlgebraPresentation, GeneratorKind};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SteenrodOp {
    /// β for odd p, Sq¹ for p = 2.
    Bockstein,
    /// P¹, odd p only.
    Power,
}

/// β and P¹ on a presentation, fixed on generators and extended by the
/// Cartan formula. β obeys β(ab) = β(a)b + (-1)^|a| aβ(b).
#[derive(Clone, Debug)]
pub struct SteenrodAction {
    pres: Arc<AlgebraPresentation>,
    bockstein: Vec<AlgebraElement>,
    power: Option<Vec<AlgebraElement>>,
}

impl SteenrodAction {
    pub fn new(
        pres: &Arc<AlgebraPresentation>,
        bockstein: Vec<AlgebraElement>,
        power: Option<Vec<AlgebraElement>>,
    ) -> Result<Self> {
        let p = pres.p();
        if p == 2 && power.is_some() {
            return Err(Error::Unsupported("P^1 at p = 2; use Sq^1 as the Bockstein".into()));
        }
        let check = |imgs: &[AlgebraElement], shift: u32, what: &str| -> Result<()> {
            if imgs.len() != pres.ngens() {
                return Err(Error::Map(format!("{what}: {} images for {} generators", imgs.len(), pres.ngens())));
            }
            for (g, img) in pres.generators().iter().zip(imgs) {
                if !same_presentation(img.presentation(), pres) || img.degree() != g.degree + shift {
                    return Err(Error::Map(format!("{what} of {} has the wrong degree or ring", g.name)));
                }
            }
            Ok(())
        };
        check(&bockstein, 1, "bockstein")?;
        if let Some(pw) = &power {
            check(pw, 2 * (p - 1), "P^1")?;
        }
        Ok(SteenrodAction { pres: pres.clone(), bockstein, power })
    }

    /// The standard action on H*((Z/p)^n; F_p) with generators laid out as
    /// x1..xn (degree 1) followed, for odd p, by u1..un (degree 2).
    pub fn standard(pres: &Arc<AlgebraPresentation>) -> Result<Self> {
        let p = pres.p();
        let gens = pres.generators();
        let mono = |i: usize, e: u32| -> Result<AlgebraElement> {
            AlgebraElement::from_monomial(pres, pres.generator_monomial(i), 1).pow(e)
        };
        if p == 2 {
            if !gens.iter().all(|g| g.degree == 1 && g.kind == GeneratorKind::Polynomial) {
                return Err(Error::Presentation("expected degree-1 polynomial generators at p = 2".into()));
            }
            let sq = (0..gens.len()).map(|i| mono(i, 2)).collect::<Result<Vec<_>>>()?;
            return Self::new(pres, sq, None);
        }
        let n = gens.len() / 2;
        let layout_ok = gens.len().is_multiple_of(2)
            && gens[..n].iter().all(|g| g.degree == 1 && g.kind == GeneratorKind::Exterior)
            && gens[n..].iter().all(|g| g.degree == 2 && g.kind == GeneratorKind::Polynomial);
        if !layout_ok {
            return Err(Error::Presentation("expected x1..xn then u1..un".into()));
        }
        let mut beta = Vec::with_capacity(2 * n);
        let mut pw = Vec::with_capacity(2 * n);
        for i in 0..n {
            beta.push(mono(n + i, 1)?);
            pw.push(AlgebraElement::zero(pres, 2 * p - 1));
        }
        for i in 0..n {
            beta.push(AlgebraElement::zero(pres, 3));
            pw.push(mono(n + i, p)?);
        }
        Self::new(pres, beta, Some(pw))
    }

    pub fn presentation(&self) -> &Arc<AlgebraPresentation> {
        &self.pres
    }

    pub fn supports(&self, op: SteenrodOp) -> bool {
        match op {
            SteenrodOp::Bockstein => true,
            SteenrodOp::Power => self.power.is_some(),
        }
    }

    /// Operations available at this prime.
    pub fn ops(&self) -> Vec<SteenrodOp> {
        [SteenrodOp::Bockstein, SteenrodOp::Power].into_iter().filter(|&o| self.supports(o)).collect()
    }

    pub fn degree_shift(&self, op: SteenrodOp) -> u32 {
        match op {
            SteenrodOp::Bockstein => 1,
            SteenrodOp::Power => 2 * (self.pres.p() - 1),
        }
    }

    pub fn apply(&self, op: SteenrodOp, e: &AlgebraElement) -> Result<AlgebraElement> {
        if !same_presentation(e.presentation(), &self.pres) {
            return Err(Error::PresentationMismatch);
        }
        let (images, odd) = match op {
            SteenrodOp::Bockstein => (&self.bockstein, true),
            SteenrodOp::Power => (self.power.as_ref().ok_or_else(|| Error::Unsupported("P^1 at p = 2".into()))?, false),
        };
        let f = self.pres.field();
        let gens = self.pres.generators();
        let mut out = AlgebraElement::zero(&self.pres, e.degree() + self.degree_shift(op));
        for (m, c) in e.terms() {
            // expand the monomial as an ordered word of generators
            let word: Vec<usize> =
                m.exponents().iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize)).collect();
            let mut prefix_degree = 0u32;
            for j in 0..word.len() {
                let mut term = AlgebraElement::one(&self.pres);
                for (pos, &g) in word.iter().enumerate() {
                    let factor = if pos == j {
                        images[g].clone()
                    } else {
                        AlgebraElement::from_monomial(&self.pres, self.pres.generator_monomial(g), 1)
                    };
                    term = term.multiply(&factor)?;
                }
                let sign = f.sign(odd && prefix_degree % 2 == 1);
                out = out.add(&term.scale(f.mul(sign, c)))?;
                prefix_degree += gens[word[j]].degree;
            }
        }
        Ok(out)
    }
}
