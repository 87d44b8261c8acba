use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::H2Decomposition;
use crate::linalg::is_prime;

/// Invariant data of a (Z/p)^n action on a closed oriented 4-manifold M.
///
/// `b1`, `b2` are the integral Betti numbers, `t` the F_p-dimension of the
/// p-torsion of H_1(M), and `r0`, `r1`, `r2` the multiplicities of Z,
/// Z[ζ_p] and Z[Z/p] in H^2(M)/Tors as a module over a cyclic subgroup.
/// Flags left out are unknown.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldActionData {
    pub p: u32,
    pub group_rank: usize,
    pub b1: usize,
    pub b2: usize,
    #[serde(default)]
    pub t: usize,
    #[serde(default)]
    pub r0: usize,
    #[serde(default)]
    pub r1: usize,
    #[serde(default)]
    pub r2: usize,
    pub chi: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation_preserving: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homologically_trivial: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pseudofree: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_set_nonempty: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1_fix_to_m_surjective: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1_torsion_free: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_has_trivial_action: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1_zero: Option<bool>,
}

impl ManifoldActionData {
    /// Data with every flag unknown; `chi` is filled in from the Betti
    /// numbers.
    pub fn new(p: u32, group_rank: usize, b1: usize, b2: usize) -> Self {
        ManifoldActionData {
            p,
            group_rank,
            b1,
            b2,
            t: 0,
            r0: 0,
            r1: 0,
            r2: 0,
            chi: 2 - 2 * b1 as i64 + b2 as i64,
            orientation_preserving: None,
            homologically_trivial: None,
            pseudofree: None,
            fixed_set_nonempty: None,
            h1_fix_to_m_surjective: None,
            h1_torsion_free: None,
            kernel_has_trivial_action: None,
            h1_zero: None,
        }
    }

    /// Check the arithmetic invariants and flag combinations, returning a
    /// copy with the flags that follow from the rest filled in.
    pub fn validated(&self) -> Result<Self> {
        let d = self;
        if !is_prime(d.p) {
            return Err(Error::NotPrime(d.p));
        }
        if d.group_rank == 0 {
            return Err(Error::Data("group rank must be at least 1".into()));
        }
        let chi = 2 - 2 * d.b1 as i64 + d.b2 as i64;
        if d.chi != chi {
            return Err(Error::Data(format!("chi = {} but 2 - 2·b1 + b2 = {chi}", d.chi)));
        }
        let rank_sum = d.r0 + (d.p as usize - 1) * d.r1 + d.p as usize * d.r2;
        if rank_sum != d.b2 {
            return Err(Error::Data(format!("r0 + (p-1)·r1 + p·r2 = {rank_sum} but b2 = {}", d.b2)));
        }
        if d.homologically_trivial == Some(true) && (d.r1 > 0 || d.r2 > 0) {
            return Err(Error::Data("a homologically trivial action has r1 = r2 = 0".into()));
        }
        if d.h1_zero == Some(true) && (d.b1 > 0 || d.t > 0) {
            return Err(Error::Data(format!("h1_zero with b1 = {} and t = {}", d.b1, d.t)));
        }
        if d.h1_torsion_free == Some(true) && d.t > 0 {
            return Err(Error::Data(format!("h1_torsion_free with t = {}", d.t)));
        }
        if d.h1_torsion_free == Some(true) && d.b1 == 0 && d.h1_zero == Some(false) {
            return Err(Error::Data("torsion-free H_1 of rank 0 is zero, but h1_zero is false".into()));
        }
        if d.p != 2 && d.orientation_preserving == Some(false) {
            return Err(Error::Data("a group of odd order preserves orientation".into()));
        }
        if d.h1_zero == Some(true) && d.kernel_has_trivial_action == Some(true) {
            return Err(Error::Data("kernel_has_trivial_action needs a nonzero H^1(M)".into()));
        }
        if d.h1_fix_to_m_surjective == Some(true) && d.kernel_has_trivial_action == Some(true) {
            return Err(Error::Data(
                "H_1(F) -> H_1(M) onto leaves no kernel in H^1(M) -> H^1(F), yet kernel_has_trivial_action is set"
                    .into(),
            ));
        }
        if d.h1_fix_to_m_surjective == Some(true) && d.fixed_set_nonempty == Some(false) && (d.b1 > 0 || d.t > 0) {
            return Err(Error::Data("an empty fixed set cannot carry H_1(M) onto a nonzero group".into()));
        }

        let mut out = d.clone();
        if d.b1 > 0 || d.t > 0 {
            out.h1_zero = Some(false);
        }
        if d.t > 0 {
            out.h1_torsion_free = Some(false);
        }
        if d.h1_torsion_free == Some(true) && d.b1 == 0 {
            out.h1_zero = Some(true);
        }
        if out.h1_zero == Some(true) {
            out.h1_torsion_free = Some(true);
            if d.fixed_set_nonempty == Some(true) {
                out.h1_fix_to_m_surjective = Some(true);
            }
        }
        if d.p != 2 {
            out.orientation_preserving = Some(true);
        }
        Ok(out)
    }

    pub fn h2_decomposition(&self) -> H2Decomposition {
        H2Decomposition { r0: self.r0, r1: self.r1, r2: self.r2, t: self.t }
    }

    /// Σ_r dim H^r(M; F_p) = 2 + 2(b1 + t) + (b2 + 2t).
    pub fn mod_p_total(&self) -> usize {
        2 + 2 * self.b1 + self.b2 + 4 * self.t
    }
}

/// A surface component of the fixed set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Surface {
    pub genus: usize,
    #[serde(default = "yes")]
    pub orientable: bool,
}

fn yes() -> bool {
    true
}

/// The fixed set F = M^G: isolated points and closed surfaces.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedSetData {
    #[serde(default)]
    pub isolated_points: usize,
    #[serde(default)]
    pub surfaces: Vec<Surface>,
}

/// F_p-Betti numbers (b0, b1, b2) of the fixed set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedSetBetti {
    pub b0: usize,
    pub b1: usize,
    pub b2: usize,
}

impl FixedSetBetti {
    pub fn total(&self) -> usize {
        self.b0 + self.b1 + self.b2
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.b0 as i64 - self.b1 as i64 + self.b2 as i64
    }
}

impl FixedSetData {
    pub fn points(n: usize) -> Self {
        FixedSetData { isolated_points: n, surfaces: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.isolated_points == 0 && self.surfaces.is_empty()
    }

    pub fn is_points_only(&self) -> bool {
        self.surfaces.is_empty()
    }

    /// Betti numbers over F_p together with warnings. A non-orientable
    /// surface of genus g (a sum of g projective planes) has F_2-Betti
    /// numbers (1, g, 1) and F_p-Betti numbers (1, g - 1, 0) for p odd,
    /// where it cannot occur as a fixed component.
    pub fn betti(&self, p: u32) -> Result<(FixedSetBetti, Vec<String>)> {
        let mut b = FixedSetBetti { b0: self.isolated_points, b1: 0, b2: 0 };
        let mut warnings = Vec::new();
        for s in &self.surfaces {
            b.b0 += 1;
            if s.orientable {
                b.b1 += 2 * s.genus;
                b.b2 += 1;
                continue;
            }
            if s.genus == 0 {
                return Err(Error::Data("a non-orientable surface has genus at least 1".into()));
            }
            if p == 2 {
                b.b1 += s.genus;
                b.b2 += 1;
            } else {
                b.b1 += s.genus - 1;
                warnings.push(format!(
                    "non-orientable fixed surface of genus {} for p = {p}: fixed surfaces of odd-order actions are orientable",
                    s.genus
                ));
            }
        }
        Ok((b, warnings))
    }
}
