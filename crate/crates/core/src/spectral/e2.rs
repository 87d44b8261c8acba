use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::fiber::FiberAlgebra;
use crate::algebra::{AlgebraElement, AlgebraPresentation, DegreeBasis};
use crate::error::{Error, Result};
use crate::essential::{ess_by_restriction_kernels, GradedIdeal};
use crate::group::{cohomology_ring, GroupSpec};
use crate::linalg::{Fp, FpVector};

/// Extra columns computed beyond the requested cutoff, one page's worth
/// for each of d2..d5, so that every requested total degree is exact.
pub const COLUMN_MARGIN: u32 = 2 + 3 + 4 + 5;

/// What a differential may hit in the bottom row E^{*,0}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BottomRowPolicy {
    /// No restriction.
    Unconstrained,
    /// Nothing: a fixed point splits H*(G) off H*_G(M).
    Forbidden,
    /// Only essential classes: images restrict to zero on every proper
    /// subgroup.
    Essential,
}

/// A class of E_2^{k,l} = H^k(G) ⊗ H^l(M) in coordinates: index
/// `base * b_l + fiber` over the monomial basis of H^k(G) and the fiber
/// classes of degree l.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SsElement {
    pub k: u32,
    pub l: u32,
    pub coords: FpVector,
}

impl SsElement {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

/// One summand `base ⊗ fiber` of a class given in text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub base: String,
    pub fiber: String,
}

impl TermSpec {
    pub fn new(base: &str, fiber: &str) -> Self {
        TermSpec { base: base.into(), fiber: fiber.into() }
    }
}

/// Shared, immutable data of one spectral sequence run.
#[derive(Debug)]
pub struct E2Context {
    group: GroupSpec,
    base: Arc<AlgebraPresentation>,
    bases: Vec<DegreeBasis>,
    fiber: FiberAlgebra,
    k_max: u32,
    work: u32,
    policy: BottomRowPolicy,
    ess: Option<GradedIdeal>,
}

impl E2Context {
    pub fn new(g: &GroupSpec, fiber: FiberAlgebra, k_max: u32, policy: BottomRowPolicy) -> Result<Arc<Self>> {
        if fiber.field() != g.field() {
            return Err(Error::ModulusMismatch(fiber.field().p(), g.p()));
        }
        let work = k_max + COLUMN_MARGIN;
        let base = cohomology_ring(g);
        let bases = (0..=work).map(|k| DegreeBasis::new(base.degree_basis(k))).collect();
        let ess = match policy {
            BottomRowPolicy::Essential => Some(ess_by_restriction_kernels(g, work)?),
            _ => None,
        };
        Ok(Arc::new(E2Context { group: *g, base, bases, fiber, k_max, work, policy, ess }))
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn field(&self) -> Fp {
        self.group.field()
    }

    pub fn base(&self) -> &Arc<AlgebraPresentation> {
        &self.base
    }

    pub fn fiber(&self) -> &FiberAlgebra {
        &self.fiber
    }

    /// Largest total degree the caller asked for.
    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    /// Largest column carried internally.
    pub fn working_cutoff(&self) -> u32 {
        self.work
    }

    pub fn policy(&self) -> BottomRowPolicy {
        self.policy
    }

    pub fn essential(&self) -> Option<&GradedIdeal> {
        self.ess.as_ref()
    }

    pub fn base_basis(&self, k: u32) -> Result<&DegreeBasis> {
        self.bases.get(k as usize).ok_or(Error::AboveCutoff { degree: k, cutoff: self.work })
    }

    pub fn cell_dim(&self, k: u32, l: u32) -> usize {
        self.bases.get(k as usize).map_or(0, DegreeBasis::len) * self.fiber.dim(l)
    }

    pub fn zero(&self, k: u32, l: u32) -> SsElement {
        SsElement { k, l, coords: vec![0; self.cell_dim(k, l)] }
    }

    /// `b ⊗ φ` for a base element and a fiber basis class.
    pub fn tensor(&self, b: &AlgebraElement, fiber: &str) -> Result<SsElement> {
        let (l, j) = self.fiber.class(fiber)?;
        let k = b.degree();
        let bv = b.to_vector(self.base_basis(k)?)?;
        let bl = self.fiber.dim(l);
        let mut out = self.zero(k, l);
        for (i, &c) in bv.iter().enumerate() {
            out.coords[i * bl + j] = c;
        }
        Ok(out)
    }

    /// Parse a sum of `base ⊗ fiber` terms. An empty list is rejected
    /// since its bidegree is unknown.
    pub fn parse(&self, terms: &[TermSpec]) -> Result<SsElement> {
        let mut acc: Option<SsElement> = None;
        for t in terms {
            let (l, _) = self.fiber.class(&t.fiber)?;
            let b = AlgebraElement::parse(&self.base, &t.base, None)?;
            let e = self.tensor(&b, &t.fiber)?;
            acc = Some(match acc {
                None => e,
                Some(a) if (a.k, a.l) == (e.k, e.l) => self.add(&a, &e),
                Some(a) => {
                    return Err(Error::Differential(format!(
                        "mixed bidegrees ({}, {}) and ({}, {l}) in one class",
                        a.k, a.l, e.k
                    )))
                }
            });
        }
        acc.ok_or_else(|| Error::Differential("empty class".into()))
    }

    /// Parse with a known bidegree; an empty list is zero there.
    pub fn parse_at(&self, terms: &[TermSpec], k: u32, l: u32) -> Result<SsElement> {
        if terms.is_empty() {
            return Ok(self.zero(k, l));
        }
        let e = self.parse(terms)?;
        if (e.k, e.l) != (k, l) {
            return Err(Error::Differential(format!("class has bidegree ({}, {}), expected ({k}, {l})", e.k, e.l)));
        }
        Ok(e)
    }

    pub fn add(&self, a: &SsElement, b: &SsElement) -> SsElement {
        let mut out = a.clone();
        self.field().axpy(&mut out.coords, 1, &b.coords);
        out
    }

    pub fn scale(&self, a: &SsElement, c: u32) -> SsElement {
        let mut out = a.clone();
        self.field().scale(&mut out.coords, c);
        out
    }

    /// (b1 ⊗ φ1)(b2 ⊗ φ2) = (-1)^{l1 k2} b1 b2 ⊗ φ1 φ2.
    pub fn multiply(&self, a: &SsElement, b: &SsElement) -> Result<SsElement> {
        let f = self.field();
        let (k, l) = (a.k + b.k, a.l + b.l);
        let mut out = self.zero(k, l);
        if out.coords.is_empty() {
            return Ok(out);
        }
        let (ba, bb, bt) = (self.base_basis(a.k)?, self.base_basis(b.k)?, self.base_basis(k)?);
        let (la, lb, lt) = (self.fiber.dim(a.l), self.fiber.dim(b.l), self.fiber.dim(l));
        let koszul = f.sign(a.l % 2 == 1 && b.k % 2 == 1);
        for (ia, &ca) in a.coords.iter().enumerate().filter(|(_, &c)| c != 0) {
            let (ma, fa) = (ia / la, ia % la);
            for (ib, &cb) in b.coords.iter().enumerate().filter(|(_, &c)| c != 0) {
                let (mb, fb) = (ib / lb, ib % lb);
                let Some((m, s)) = self.base.multiply_monomials(&ba.monomials[ma], &bb.monomials[mb]) else {
                    continue;
                };
                let mi = bt.index_of(&m).expect("product lies in the degree basis");
                let fiber = self.fiber.product(a.l, fa, b.l, fb);
                let c = f.mul(f.mul(ca, cb), f.mul(s, koszul));
                for (j, &x) in fiber.iter().enumerate().filter(|(_, &x)| x != 0) {
                    let slot = &mut out.coords[mi * lt + j];
                    *slot = f.add(*slot, f.mul(c, x));
                }
            }
        }
        Ok(out)
    }

    /// Text such as `x1*x2⊗w - u1⊗z`.
    pub fn render(&self, e: &SsElement) -> String {
        let f = self.field();
        let Some(bb) = self.bases.get(e.k as usize) else {
            return "?".into();
        };
        let names = self.fiber.classes(e.l);
        let bl = names.len();
        let mut s = String::new();
        for (i, &c) in e.coords.iter().enumerate().filter(|(_, &c)| c != 0) {
            let sc = f.signed(c);
            let first = s.is_empty();
            match (first, sc < 0) {
                (true, true) => s.push('-'),
                (false, true) => s.push_str(" - "),
                (false, false) => s.push_str(" + "),
                (true, false) => {}
            }
            let mag = sc.unsigned_abs();
            if mag != 1 {
                s.push_str(&format!("{mag}*"));
            }
            s.push_str(&self.base.render_monomial(&bb.monomials[i / bl]));
            s.push('⊗');
            s.push_str(&names[i % bl]);
        }
        if s.is_empty() {
            "0".into()
        } else {
            s
        }
    }

    /// Is a bottom-row class allowed as a differential image modulo the
    /// given boundaries?
    pub(crate) fn bottom_row_allows(&self, v: &SsElement, boundaries: &crate::linalg::Subspace) -> Result<bool> {
        debug_assert_eq!(v.l, 0);
        Ok(match self.policy {
            BottomRowPolicy::Unconstrained => true,
            BottomRowPolicy::Forbidden => boundaries.contains(&v.coords),
            BottomRowPolicy::Essential => {
                let ess = self.ess.as_ref().expect("essential policy carries the ideal");
                ess.part(v.k)?.sum(boundaries).contains(&v.coords)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_and_products() {
        let g = GroupSpec::new(3, 2).unwrap();
        let ctx =
            E2Context::new(&g, FiberAlgebra::preset("cp2", 3).unwrap(), 12, BottomRowPolicy::Unconstrained).unwrap();
        assert_eq!(ctx.cell_dim(2, 2), 3);
        assert_eq!(ctx.cell_dim(0, 0), 1);
        assert_eq!(ctx.cell_dim(3, 5), 0);
        let z = ctx.parse(&[TermSpec::new("1", "z")]).unwrap();
        let w = ctx.parse(&[TermSpec::new("1", "w")]).unwrap();
        assert_eq!(ctx.multiply(&z, &z).unwrap(), w);
        let g2 = ctx.parse(&[TermSpec::new("x1*u2 - x2*u1", "1")]).unwrap();
        let prod = ctx.multiply(&g2, &z).unwrap();
        assert_eq!(ctx.render(&prod), "x1*u2⊗z - x2*u1⊗z");
        assert!(ctx.multiply(&w, &z).unwrap().coords.is_empty());
    }

    #[test]
    fn koszul_sign() {
        let g = GroupSpec::new(5, 1).unwrap();
        let ctx =
            E2Context::new(&g, FiberAlgebra::preset("s1xs3", 5).unwrap(), 6, BottomRowPolicy::Unconstrained).unwrap();
        let a = ctx.parse(&[TermSpec::new("1", "alpha")]).unwrap();
        let x = ctx.parse(&[TermSpec::new("x", "1")]).unwrap();
        let ax = ctx.multiply(&a, &x).unwrap();
        let xa = ctx.multiply(&x, &a).unwrap();
        assert_eq!(ax, ctx.scale(&xa, 4));
    }
}
