//! Elementary abelian p-groups, their mod-p cohomology rings, restriction
//! to subgroups, and dimension tables for cohomology of Z/p.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraMap, AlgebraPresentation, Generator, GeneratorKind};
use crate::error::{Error, Result};
use crate::linalg::Fp;

/// The p-torus (Z/p)^n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    field: Fp,
    n: usize,
}

impl GroupSpec {
    pub fn new(p: u32, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Group("rank must be at least 1; use GroupSpec::trivial".into()));
        }
        Ok(GroupSpec { field: Fp::new(p)?, n })
    }

    /// The trivial group, cohomology F_p in degree 0.
    pub fn trivial(p: u32) -> Result<Self> {
        Ok(GroupSpec { field: Fp::new(p)?, n: 0 })
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// Number of subgroups of order p, (p^n - 1)/(p - 1).
    pub fn cyclic_subgroup_count(&self) -> u64 {
        let p = self.p() as u64;
        (0..self.n as u32).map(|i| p.pow(i)).sum()
    }
}

/// A subgroup of order p (spanned by a vector) or of index p (the kernel of
/// a functional), normalized so the first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubgroupSpec {
    Cyclic { vector: Vec<u32> },
    Hyperplane { functional: Vec<u32> },
}

fn normalize(g: &GroupSpec, v: &[i64]) -> Result<Vec<u32>> {
    if v.len() != g.rank() {
        return Err(Error::Group(format!("vector of length {} in rank {}", v.len(), g.rank())));
    }
    let f = g.field();
    let v: Vec<u32> = v.iter().map(|&c| f.reduce(c)).collect();
    let lead = v.iter().copied().find(|&c| c != 0).ok_or_else(|| Error::Group("zero vector".into()))?;
    let s = f.inv(lead);
    Ok(v.iter().map(|&c| f.mul(c, s)).collect())
}

impl SubgroupSpec {
    pub fn cyclic(g: &GroupSpec, v: &[i64]) -> Result<Self> {
        Ok(SubgroupSpec::Cyclic { vector: normalize(g, v)? })
    }

    pub fn hyperplane(g: &GroupSpec, f: &[i64]) -> Result<Self> {
        Ok(SubgroupSpec::Hyperplane { functional: normalize(g, f)? })
    }

    pub fn is_cyclic(&self) -> bool {
        matches!(self, SubgroupSpec::Cyclic { .. })
    }

    fn coords(&self) -> &[u32] {
        match self {
            SubgroupSpec::Cyclic { vector } => vector,
            SubgroupSpec::Hyperplane { functional } => functional,
        }
    }

    /// Rank of the subgroup as a p-torus.
    pub fn rank(&self) -> usize {
        match self {
            SubgroupSpec::Cyclic { .. } => 1,
            SubgroupSpec::Hyperplane { functional } => functional.len() - 1,
        }
    }

    /// The group this subgroup is abstractly isomorphic to.
    pub fn as_group(&self, g: &GroupSpec) -> GroupSpec {
        GroupSpec { field: g.field(), n: self.rank() }
    }

    /// Index eliminated by a hyperplane: the last nonzero coordinate.
    fn eliminated(&self) -> Option<usize> {
        match self {
            SubgroupSpec::Cyclic { .. } => None,
            SubgroupSpec::Hyperplane { functional } => functional.iter().rposition(|&c| c != 0),
        }
    }

    /// Inclusion K -> G as an n x rank(K) matrix whose columns are the
    /// images of the standard basis of K.
    pub fn inclusion(&self, g: &GroupSpec) -> Vec<Vec<u32>> {
        let f = g.field();
        match self {
            SubgroupSpec::Cyclic { vector } => vector.iter().map(|&c| vec![c]).collect(),
            SubgroupSpec::Hyperplane { functional } => {
                let j = self.eliminated().expect("normalized functional is nonzero");
                let scale = f.neg(f.inv(functional[j]));
                let survivors: Vec<usize> = (0..functional.len()).filter(|&i| i != j).collect();
                let mut a = vec![vec![0u32; survivors.len()]; functional.len()];
                for (col, &i) in survivors.iter().enumerate() {
                    a[i][col] = 1;
                    a[j][col] = f.mul(scale, functional[i]);
                }
                a
            }
        }
    }

    fn target_ring(&self, g: &GroupSpec) -> Arc<AlgebraPresentation> {
        match self.eliminated() {
            None => cohomology_ring(&self.as_group(g)),
            Some(j) => {
                let idx: Vec<usize> = (0..g.rank()).filter(|&i| i != j).map(|i| i + 1).collect();
                ring_with_indices(g.field(), &idx)
            }
        }
    }
}

impl std::fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c: Vec<String> = self.coords().iter().map(|c| c.to_string()).collect();
        match self {
            SubgroupSpec::Cyclic { .. } => write!(f, "<({})>", c.join(",")),
            SubgroupSpec::Hyperplane { .. } => write!(f, "ker[{}]", c.join(",")),
        }
    }
}

fn ring_from_names(field: Fp, names: &[String]) -> Arc<AlgebraPresentation> {
    let mut gens = Vec::new();
    if field.p() == 2 {
        for s in names {
            gens.push(Generator { name: format!("x{s}"), degree: 1, kind: GeneratorKind::Polynomial });
        }
    } else {
        for s in names {
            gens.push(Generator { name: format!("x{s}"), degree: 1, kind: GeneratorKind::Exterior });
        }
        for s in names {
            gens.push(Generator { name: format!("u{s}"), degree: 2, kind: GeneratorKind::Polynomial });
        }
    }
    AlgebraPresentation::new(field, gens).expect("standard generators are valid")
}

pub(crate) fn ring_with_indices(field: Fp, idx: &[usize]) -> Arc<AlgebraPresentation> {
    let names: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
    ring_from_names(field, &names)
}

/// H*((Z/p)^n; F_p). Generators are x1..xn (degree 1) and, for odd p,
/// u1..un (degree 2); in rank 1 they are simply x and u.
pub fn cohomology_ring(g: &GroupSpec) -> Arc<AlgebraPresentation> {
    match g.rank() {
        0 => AlgebraPresentation::ground(g.field()),
        1 => ring_from_names(g.field(), &[String::new()]),
        n => ring_with_indices(g.field(), &(1..=n).collect::<Vec<_>>()),
    }
}

/// Restriction along a homomorphism of p-tori given by an n x m matrix:
/// a degree-one class of the source pulls back to the matching linear form.
pub fn restriction_along(
    source: &Arc<AlgebraPresentation>,
    target: &Arc<AlgebraPresentation>,
    matrix: &[Vec<u32>],
) -> Result<AlgebraMap> {
    let f = source.field();
    let step = if f.p() == 2 { 1 } else { 2 };
    let n = source.ngens() / step;
    let m = target.ngens() / step;
    if matrix.len() != n || matrix.iter().any(|r| r.len() != m) {
        return Err(Error::Dimension(format!("restriction matrix must be {n} x {m}")));
    }
    let mut images = Vec::with_capacity(source.ngens());
    for offset in 0..step {
        for row in matrix {
            let degree = 1 + offset as u32;
            let mut e = AlgebraElement::zero(target, degree);
            for (j, &c) in row.iter().enumerate() {
                let gen = AlgebraElement::from_monomial(target, target.generator_monomial(offset * m + j), c);
                e = e.add(&gen)?;
            }
            images.push(e);
        }
    }
    AlgebraMap::new(source, target, images)
}

/// Res^G_K on cohomology rings.
pub fn restriction_map(g: &GroupSpec, k: &SubgroupSpec) -> Result<AlgebraMap> {
    if k.coords().len() != g.rank() {
        return Err(Error::Group(format!("subgroup {k} does not live in rank {}", g.rank())));
    }
    if k.coords().iter().all(|&c| c == 0) {
        return Err(Error::Group("zero vector".into()));
    }
    restriction_along(&cohomology_ring(g), &k.target_ring(g), &k.inclusion(g))
}

/// All normalized nonzero vectors: by position of the leading 1, then lex.
fn normalized_vectors(g: &GroupSpec) -> Vec<Vec<u32>> {
    let (p, n) = (g.p(), g.rank());
    let mut out = Vec::new();
    for lead in 0..n {
        let free = n - lead - 1;
        let total = (p as u64).pow(free as u32);
        for code in 0..total {
            let mut v = vec![0u32; n];
            v[lead] = 1;
            let mut c = code;
            for i in (lead + 1..n).rev() {
                v[i] = (c % p as u64) as u32;
                c /= p as u64;
            }
            out.push(v);
        }
    }
    out
}

pub fn cyclic_subgroups(g: &GroupSpec) -> Vec<SubgroupSpec> {
    normalized_vectors(g).into_iter().map(|vector| SubgroupSpec::Cyclic { vector }).collect()
}

pub fn hyperplanes(g: &GroupSpec) -> Vec<SubgroupSpec> {
    normalized_vectors(g).into_iter().map(|functional| SubgroupSpec::Hyperplane { functional }).collect()
}

/// Z/p-modules whose cohomology enters the Borel spectral sequence
/// bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "type")]
pub enum CoefficientModuleType {
    /// Z with trivial action.
    TrivialZ,
    /// Z[ζ_p].
    Cyclotomic,
    /// Z[Z/p].
    FreeGroupRing,
    /// A trivial p-torsion module with the given F_p-dimension of V ⊗ F_p.
    TrivialTorsion { dim: usize },
    /// F_p^dim with trivial action.
    TrivialFp { dim: usize },
    /// `multiplicity` copies of F_p[G/K].
    PermutationFp { subgroup: SubgroupSpec, multiplicity: usize },
}

/// dim over F_p of H^q(Z/p; module), for q >= 1.
pub fn cp_integral_dims(module: &CoefficientModuleType, q: u32) -> Result<usize> {
    if q == 0 {
        return Err(Error::Unsupported("degree 0 is not part of the positive-degree table".into()));
    }
    let even = q.is_multiple_of(2);
    Ok(match module {
        CoefficientModuleType::TrivialZ => usize::from(even),
        CoefficientModuleType::Cyclotomic => usize::from(!even),
        CoefficientModuleType::FreeGroupRing => 0,
        CoefficientModuleType::TrivialTorsion { dim } => *dim,
        CoefficientModuleType::TrivialFp { dim } => *dim,
        CoefficientModuleType::PermutationFp { .. } => {
            return Err(Error::Unsupported("permutation modules go through shapiro_dim".into()))
        }
    })
}

/// dim H^q(G; F_p[G/K]^m) = m · dim H^q(K; F_p) = m for K of order p.
pub fn shapiro_dim(g: &GroupSpec, module: &CoefficientModuleType, _q: u32) -> Result<usize> {
    match module {
        CoefficientModuleType::PermutationFp { subgroup, multiplicity } => {
            if !subgroup.is_cyclic() {
                return Err(Error::Group(format!("{subgroup} does not have order p")));
            }
            if subgroup.coords().len() != g.rank() {
                return Err(Error::Group(format!("subgroup {subgroup} does not live in rank {}", g.rank())));
            }
            Ok(*multiplicity)
        }
        other => Err(Error::Unsupported(format!("shapiro_dim needs a permutation module, got {other:?}"))),
    }
}

/// H^2(M; Z) as a Z[Z/p]-module: Z^r0 ⊕ Z[ζ]^r1 ⊕ Z[Z/p]^r2, plus the
/// torsion contribution t.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct H2Decomposition {
    pub r0: usize,
    pub r1: usize,
    pub r2: usize,
    pub t: usize,
}

impl H2Decomposition {
    pub fn summands(&self) -> Vec<(CoefficientModuleType, usize)> {
        vec![
            (CoefficientModuleType::TrivialZ, self.r0),
            (CoefficientModuleType::Cyclotomic, self.r1),
            (CoefficientModuleType::FreeGroupRing, self.r2),
            (CoefficientModuleType::TrivialTorsion { dim: self.t }, 1),
        ]
    }

    /// dim H^q(Z/p; H^2(M)) for q >= 1.
    pub fn dim(&self, q: u32) -> Result<usize> {
        self.summands().iter().try_fold(0, |acc, (m, k)| Ok(acc + k * cp_integral_dims(m, q)?))
    }
}
