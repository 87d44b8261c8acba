use std::sync::Arc;

use super::element::{same_presentation, AlgebraElement};
use super::presentation::{AlgebraPresentation, DegreeBasis, GeneratorKind};
use crate::error::{Error, Result};
use crate::linalg::FpMatrix;

/// Algebra homomorphism determined by the images of the source generators.
#[derive(Clone, Debug)]
pub struct AlgebraMap {
    source: Arc<AlgebraPresentation>,
    target: Arc<AlgebraPresentation>,
    images: Vec<AlgebraElement>,
}

impl AlgebraMap {
    pub fn new(
        source: &Arc<AlgebraPresentation>,
        target: &Arc<AlgebraPresentation>,
        images: Vec<AlgebraElement>,
    ) -> Result<Self> {
        if source.p() != target.p() {
            return Err(Error::ModulusMismatch(source.p(), target.p()));
        }
        if images.len() != source.ngens() {
            return Err(Error::Map(format!("{} images for {} generators", images.len(), source.ngens())));
        }
        for (g, img) in source.generators().iter().zip(&images) {
            if !same_presentation(img.presentation(), target) {
                return Err(Error::Map(format!("image of {} is not in the target", g.name)));
            }
            if img.degree() != g.degree {
                return Err(Error::Map(format!(
                    "image of {} has degree {}, expected {}",
                    g.name,
                    img.degree(),
                    g.degree
                )));
            }
            if g.kind == GeneratorKind::Exterior && !img.multiply(img)?.is_zero() {
                return Err(Error::Map(format!("image of {} does not square to zero", g.name)));
            }
        }
        Ok(AlgebraMap { source: source.clone(), target: target.clone(), images })
    }

    /// Parse each image from text, in generator order.
    pub fn from_strings(
        source: &Arc<AlgebraPresentation>,
        target: &Arc<AlgebraPresentation>,
        images: &[&str],
    ) -> Result<Self> {
        let parsed = images
            .iter()
            .zip(source.generators())
            .map(|(s, g)| AlgebraElement::parse(target, s, Some(g.degree)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, parsed)
    }

    pub fn identity(pres: &Arc<AlgebraPresentation>) -> Self {
        let images =
            (0..pres.ngens()).map(|i| AlgebraElement::from_monomial(pres, pres.generator_monomial(i), 1)).collect();
        AlgebraMap { source: pres.clone(), target: pres.clone(), images }
    }

    pub fn source(&self) -> &Arc<AlgebraPresentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<AlgebraPresentation> {
        &self.target
    }

    pub fn image_of_generator(&self, i: usize) -> &AlgebraElement {
        &self.images[i]
    }

    pub fn apply(&self, e: &AlgebraElement) -> Result<AlgebraElement> {
        if !same_presentation(e.presentation(), &self.source) {
            return Err(Error::PresentationMismatch);
        }
        let mut out = AlgebraElement::zero(&self.target, e.degree());
        for (m, c) in e.terms() {
            let mut prod = AlgebraElement::one(&self.target);
            for (i, &k) in m.exponents().iter().enumerate() {
                if k > 0 {
                    prod = prod.multiply(&self.images[i].pow(k)?)?;
                }
            }
            out = out.add(&prod.scale(c))?;
        }
        Ok(out)
    }

    /// Matrix of the degree-`q` component in the monomial bases, with rows
    /// indexed by the target basis and columns by the source basis.
    pub fn degree_matrix(&self, q: u32) -> Result<FpMatrix> {
        let src = DegreeBasis::new(self.source.degree_basis(q));
        let tgt = DegreeBasis::new(self.target.degree_basis(q));
        let cols = src
            .monomials
            .iter()
            .map(|m| self.apply(&AlgebraElement::from_monomial(&self.source, m.clone(), 1))?.to_vector(&tgt))
            .collect::<Result<Vec<_>>>()?;
        FpMatrix::from_columns(self.source.field(), tgt.len(), &cols)
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &AlgebraMap) -> Result<AlgebraMap> {
        if !same_presentation(inner.target(), &self.source) {
            return Err(Error::PresentationMismatch);
        }
        let images = inner.images.iter().map(|e| self.apply(e)).collect::<Result<Vec<_>>>()?;
        Ok(AlgebraMap { source: inner.source.clone(), target: self.target.clone(), images })
    }
}
