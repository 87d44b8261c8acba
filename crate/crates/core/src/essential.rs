//! The essential ideal Ess*(G): classes restricting to zero on every
//! proper subgroup, computed both as a Steenrod closure and as an
//! intersection of restriction kernels.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraMap, AlgebraPresentation, DegreeBasis, SteenrodAction, SteenrodOp};
use crate::error::{Error, Result};
use crate::group::{
    cohomology_ring, cyclic_subgroups, hyperplanes, restriction_along, restriction_map, ring_with_indices, GroupSpec,
};
use crate::linalg::{FpMatrix, Subspace};

/// Mùi generator degrees for rank 3 at p = 3, carried as data.
pub const RANK3_P3_MUI_DEGREES: [u32; 8] = [3, 4, 8, 9, 20, 21, 25, 26];

/// How a basis vector of a [`GradedIdeal`] first appeared.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Provenance {
    Seed,
    RingMultiple { parent: usize, generator: String },
    Steenrod { parent: usize, op: SteenrodOp },
    RestrictionKernel,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProvenanceEntry {
    pub degree: u32,
    pub element: String,
    pub how: Provenance,
}

/// A homogeneous ideal known through degree `cutoff`, one echelon
/// subspace of monomial coordinates per degree.
#[derive(Clone, Debug)]
pub struct GradedIdeal {
    pres: Arc<AlgebraPresentation>,
    cutoff: u32,
    bases: Vec<DegreeBasis>,
    parts: Vec<Subspace>,
    log: Vec<ProvenanceEntry>,
}

impl GradedIdeal {
    fn empty(pres: &Arc<AlgebraPresentation>, cutoff: u32) -> Self {
        let bases: Vec<DegreeBasis> = (0..=cutoff).map(|q| DegreeBasis::new(pres.degree_basis(q))).collect();
        let parts = bases.iter().map(|b| Subspace::zero(pres.field(), b.len())).collect();
        GradedIdeal { pres: pres.clone(), cutoff, bases, parts, log: Vec::new() }
    }

    fn insert(&mut self, e: &AlgebraElement, how: Provenance) -> Result<bool> {
        let q = e.degree();
        let v = e.to_vector(&self.bases[q as usize])?;
        let grew = self.parts[q as usize].insert(&v);
        if grew {
            self.log.push(ProvenanceEntry { degree: q, element: e.render(), how });
        }
        Ok(grew)
    }

    pub fn presentation(&self) -> &Arc<AlgebraPresentation> {
        &self.pres
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn dim(&self, q: u32) -> usize {
        self.parts.get(q as usize).map_or(0, Subspace::dim)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.parts.iter().map(Subspace::dim).collect()
    }

    /// Degree-`q` part in the coordinates of `degree_basis(q)`.
    pub fn part(&self, q: u32) -> Result<&Subspace> {
        self.parts.get(q as usize).ok_or(Error::AboveCutoff { degree: q, cutoff: self.cutoff })
    }

    /// Echelon basis of the degree-`q` part.
    pub fn basis(&self, q: u32) -> Result<Vec<AlgebraElement>> {
        let part = self.part(q)?;
        let b = &self.bases[q as usize];
        Ok(part.basis().iter().map(|v| AlgebraElement::from_vector(&self.pres, q, b, v)).collect())
    }

    pub fn provenance(&self) -> &[ProvenanceEntry] {
        &self.log
    }

    pub fn contains(&self, e: &AlgebraElement) -> Result<bool> {
        let q = e.degree();
        let part = self.part(q)?;
        Ok(part.contains(&e.to_vector(&self.bases[q as usize])?))
    }

    /// Same per-degree subspaces through the smaller of the two cutoffs.
    pub fn agrees_with(&self, other: &GradedIdeal) -> bool {
        self.parts.iter().zip(&other.parts).all(|(a, b)| a == b)
    }
}

pub fn ess_membership(ideal: &GradedIdeal, e: &AlgebraElement) -> Result<bool> {
    ideal.contains(e)
}

fn supported(g: &GroupSpec) -> Result<()> {
    match (g.p(), g.rank()) {
        (2, 2..=3) => Ok(()),
        (p, 2) if p != 2 => Ok(()),
        (p, n) => Err(Error::Unsupported(format!("Steenrod closure for p = {p}, rank {n}"))),
    }
}

/// Product of all nonzero linear forms, in the mod-2 ring.
fn product_of_linear_forms(pres: &Arc<AlgebraPresentation>, n: usize) -> Result<AlgebraElement> {
    let mut acc = AlgebraElement::one(pres);
    for code in 1u32..(1 << n) {
        let mut form = AlgebraElement::zero(pres, 1);
        for i in 0..n {
            if code >> (n - 1 - i) & 1 == 1 {
                form = form.add(&AlgebraElement::from_monomial(pres, pres.generator_monomial(i), 1))?;
            }
        }
        acc = acc.multiply(&form)?;
    }
    Ok(acc)
}

/// Seed class of the closure: x1*x2 for odd p, the product of all nonzero
/// linear forms for p = 2.
pub fn seed_class(g: &GroupSpec) -> Result<AlgebraElement> {
    supported(g)?;
    let pres = cohomology_ring(g);
    if g.p() == 2 {
        product_of_linear_forms(&pres, g.rank())
    } else {
        AlgebraElement::parse(&pres, "x1*x2", None)
    }
}

/// Smallest ideal containing the seed class and closed under β and P¹
/// (Sq¹ at p = 2), through degree `cutoff`.
pub fn steenrod_closure(g: &GroupSpec, cutoff: u32) -> Result<GradedIdeal> {
    let seed = seed_class(g)?;
    if cutoff < seed.degree() {
        return Err(Error::Unsupported(format!("cutoff {cutoff} is below the seed degree {}", seed.degree())));
    }
    let pres = seed.presentation().clone();
    let action = SteenrodAction::standard(&pres)?;
    let mut ideal = GradedIdeal::empty(&pres, cutoff);
    let gens: Vec<(String, AlgebraElement)> = pres
        .generators()
        .iter()
        .enumerate()
        .map(|(i, gd)| (gd.name.clone(), AlgebraElement::from_monomial(&pres, pres.generator_monomial(i), 1)))
        .collect();

    ideal.insert(&seed, Provenance::Seed)?;
    let mut queue = vec![(0usize, seed)];
    while let Some((parent, e)) = queue.pop() {
        let mut found = Vec::new();
        for (name, x) in &gens {
            if e.degree() + x.degree() <= cutoff {
                found.push((e.multiply(x)?, Provenance::RingMultiple { parent, generator: name.clone() }));
            }
        }
        for op in action.ops() {
            if e.degree() + action.degree_shift(op) <= cutoff {
                found.push((action.apply(op, &e)?, Provenance::Steenrod { parent, op }));
            }
        }
        for (img, how) in found {
            if ideal.insert(&img, how)? {
                queue.push((ideal.log.len() - 1, img));
            }
        }
    }
    Ok(ideal)
}

/// Intersection of the kernels of restriction to every maximal subgroup,
/// degree by degree. In rank 2 these are the p+1 subgroups of order p.
pub fn ess_by_restriction_kernels(g: &GroupSpec, cutoff: u32) -> Result<GradedIdeal> {
    if g.rank() == 0 {
        return Err(Error::Group("the trivial group has no essential classes to compute".into()));
    }
    let pres = cohomology_ring(g);
    let maps = hyperplanes(g).iter().map(|k| restriction_map(g, k)).collect::<Result<Vec<_>>>()?;
    kernel_ideal(&pres, &maps, cutoff)
}

fn kernel_ideal(pres: &Arc<AlgebraPresentation>, maps: &[AlgebraMap], cutoff: u32) -> Result<GradedIdeal> {
    let mut ideal = GradedIdeal::empty(pres, cutoff);
    for q in 0..=cutoff {
        let blocks = maps.iter().map(|m| m.degree_matrix(q)).collect::<Result<Vec<_>>>()?;
        let ncols = ideal.bases[q as usize].len();
        let rows: Vec<Vec<u32>> = blocks.iter().flat_map(|b| (0..b.rows()).map(|i| b.row(i).to_vec())).collect();
        let stacked = FpMatrix::from_rows(pres.field(), ncols, &rows)?;
        for v in stacked.kernel_basis() {
            let e = AlgebraElement::from_vector(pres, q, &ideal.bases[q as usize], &v);
            ideal.insert(&e, Provenance::RestrictionKernel)?;
        }
    }
    Ok(ideal)
}

/// Ordered Mùi generators with their degrees.
#[derive(Clone, Debug)]
pub struct MuiGeneratorSet {
    pub elements: Vec<AlgebraElement>,
}

impl MuiGeneratorSet {
    pub fn degrees(&self) -> Vec<u32> {
        self.elements.iter().map(AlgebraElement::degree).collect()
    }
}

/// γ1..γ4 in rank 2 for odd p; the product of linear forms at p = 2.
pub fn mui_generators(g: &GroupSpec) -> Result<MuiGeneratorSet> {
    let pres = cohomology_ring(g);
    let p = g.p();
    let elements = match (p, g.rank()) {
        (2, 2..=3) => vec![product_of_linear_forms(&pres, g.rank())?],
        (_, 2) => [
            "x1*x2".to_string(),
            "x1*u2 - x2*u1".to_string(),
            format!("x1*u2^{p} - x2*u1^{p}"),
            format!("u1*u2^{p} - u2*u1^{p}"),
        ]
        .iter()
        .map(|s| AlgebraElement::parse(&pres, s, None))
        .collect::<Result<Vec<_>>>()?,
        (3, 3) => {
            return Err(Error::Unsupported(format!(
                "rank-3 generators at p = 3 are known by degree only: {RANK3_P3_MUI_DEGREES:?}"
            )))
        }
        (p, n) => return Err(Error::Unsupported(format!("Mùi generators for p = {p}, rank {n}"))),
    };
    Ok(MuiGeneratorSet { elements })
}

/// Generator degrees, including the tabulated rank-3, p = 3 case.
pub fn mui_degrees(g: &GroupSpec) -> Result<Vec<u32>> {
    if (g.p(), g.rank()) == (3, 3) {
        return Ok(RANK3_P3_MUI_DEGREES.to_vec());
    }
    Ok(mui_generators(g)?.degrees())
}

/// Whether dim Ess^q matches a free module over the polynomial subalgebra
/// R on generators of the given degrees, for every q through `cutoff`.
pub fn verify_free_module(ideal: &GradedIdeal, degrees: &[u32], cutoff: u32) -> bool {
    let pres = ideal.presentation();
    (0..=cutoff.min(ideal.cutoff())).all(|q| {
        let expected: usize = degrees.iter().filter(|&&d| d <= q).map(|&d| pres.polynomial_basis(q - d).len()).sum();
        ideal.dim(q) == expected
    })
}

/// Outcome of the exhaustive scan over quadratic classes at p = 2.
#[derive(Clone, Debug)]
pub struct QuadraticSearch {
    /// All classes restricting nontrivially to every subgroup of order 2.
    pub witnesses: Vec<AlgebraElement>,
    pub candidates: u64,
    pub subgroups: usize,
    pub checks: u64,
}

impl QuadraticSearch {
    pub fn witness(&self) -> Option<&AlgebraElement> {
        self.witnesses.first()
    }
}

/// Scan every α = Σ a_i x_i² + Σ b_ij x_i x_j in H²((Z/2)^n).
pub fn search_nonrestricting_quadratic(n: usize) -> Result<QuadraticSearch> {
    let g = GroupSpec::new(2, n)?;
    if n > 5 {
        return Err(Error::Unsupported(format!("quadratic search in rank {n}")));
    }
    let pres = ring_with_indices(g.field(), &(1..=n).collect::<Vec<_>>());
    let basis = DegreeBasis::new(pres.degree_basis(2));
    let subgroups = cyclic_subgroups(&g);
    let maps = subgroups
        .iter()
        .map(|k| restriction_along(&pres, &cohomology_ring(&k.as_group(&g)), &k.inclusion(&g)))
        .collect::<Result<Vec<_>>>()?;
    let mats = maps.iter().map(|m| m.degree_matrix(2)).collect::<Result<Vec<_>>>()?;
    let candidates = 1u64 << basis.len();
    let mut witnesses = Vec::new();
    let mut checks = 0u64;
    for code in 0..candidates {
        let v: Vec<u32> = (0..basis.len()).map(|i| (code >> (basis.len() - 1 - i) & 1) as u32).collect();
        let mut all_nonzero = true;
        for m in &mats {
            checks += 1;
            if m.apply(&v)?.iter().all(|&c| c == 0) {
                all_nonzero = false;
            }
        }
        if all_nonzero {
            witnesses.push(AlgebraElement::from_vector(&pres, 2, &basis, &v));
        }
    }
    Ok(QuadraticSearch { witnesses, candidates, subgroups: subgroups.len(), checks })
}
