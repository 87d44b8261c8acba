use serde::{Deserialize, Serialize};

use super::data::ManifoldActionData;
use super::verdict::{Outcome, RuleTag, Verdict};
use crate::error::{Error, Result};
use crate::essential::{mui_degrees, search_nonrestricting_quadratic, RANK3_P3_MUI_DEGREES};
use crate::group::{cyclic_subgroups, shapiro_dim, CoefficientModuleType, GroupSpec};
use crate::spectral::{SSPage, LAST_PAGE};

/// Source columns of the differentials into the bottom row are at most
/// this; higher columns are R-multiples of lower ones.
pub const MAX_SOURCE_COLUMN: u32 = 3;

fn flag(name: &str, value: Option<bool>) -> Result<bool> {
    value.ok_or_else(|| Error::MissingHypothesis(format!("flag {name} is not set")))
}

fn is(value: Option<bool>) -> bool {
    value == Some(true)
}

/// Collapse or non-collapse of the Borel spectral sequence from the
/// named results, first rule whose hypotheses all hold.
pub fn collapse_verdict(d: &ManifoldActionData) -> Result<Verdict> {
    let d = d.validated()?;
    let base = |outcome, rule| Verdict::new(outcome, rule).with("p", d.p).with("rank", d.group_rank);
    let odd = d.p != 2;
    let cyclic_fixed = d.group_rank == 1 && is(d.orientation_preserving) && is(d.fixed_set_nonempty);
    if cyclic_fixed && is(d.h1_fix_to_m_surjective) {
        return Ok(base(Outcome::Collapses, RuleTag::FixedSetSurjectivity).with("h1_fix_to_m_surjective", true));
    }
    if cyclic_fixed && is(d.kernel_has_trivial_action) {
        return Ok(base(Outcome::DoesNotCollapse, RuleTag::KernelObstruction)
            .with("kernel_has_trivial_action", true)
            .with("b1", d.b1));
    }
    let torsion_free_fixed = odd && is(d.homologically_trivial) && is(d.fixed_set_nonempty) && is(d.h1_torsion_free);
    if d.group_rank == 1 && torsion_free_fixed {
        if let Some(onto) = d.h1_fix_to_m_surjective {
            let outcome = if onto { Outcome::Collapses } else { Outcome::DoesNotCollapse };
            return Ok(base(outcome, RuleTag::CyclicTorsionFreeCriterion).with("h1_fix_to_m_surjective", onto));
        }
    }
    if d.group_rank == 2 && torsion_free_fixed {
        if let Some(zero) = d.h1_zero {
            let outcome = if zero { Outcome::Collapses } else { Outcome::DoesNotCollapse };
            return Ok(base(outcome, RuleTag::RankTwoTorsionFreeCriterion).with("h1_zero", zero).with("b1", d.b1));
        }
    }
    Ok(base(Outcome::Inconclusive, RuleTag::NoRuleApplies))
}

/// Compare Σ dim H^r(F; F_p) with Σ dim H^r(M; F_p).
pub fn totals_test(m_totals: usize, f_totals: usize) -> Result<Verdict> {
    if f_totals > m_totals {
        return Err(Error::Data(format!(
            "the fixed set has total F_p-Betti number {f_totals}, more than the manifold's {m_totals}"
        )));
    }
    let (outcome, rel) =
        if f_totals == m_totals { (Outcome::Collapses, "=") } else { (Outcome::DoesNotCollapse, "≠") };
    Ok(Verdict::new(outcome, RuleTag::BettiTotals)
        .with("manifold_totals", m_totals)
        .with("fixed_set_totals", f_totals)
        .with("summary", format!("totals {f_totals} {rel} {m_totals}")))
}

/// Betti numbers the fixed set must have.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedSetConstraints {
    pub b1: usize,
    pub b0_plus_b2: usize,
    pub chi: i64,
}

/// (b_1(F), b_0(F) + b_2(F), χ(F)) = (2 b_1, 2 + b_2, 2 - 2 b_1 + r_0 - r_1)
/// for p odd, homologically trivial, with H_1(F) onto H_1(M).
pub fn fixed_set_constraints(d: &ManifoldActionData) -> Result<FixedSetConstraints> {
    let d = d.validated()?;
    if d.p == 2 {
        return Err(Error::MissingHypothesis("the fixed-set constraints need p odd".into()));
    }
    if !flag("homologically_trivial", d.homologically_trivial)? {
        return Err(Error::MissingHypothesis("the action is not homologically trivial".into()));
    }
    if !flag("h1_fix_to_m_surjective", d.h1_fix_to_m_surjective)? {
        return Err(Error::MissingHypothesis("H_1(F) does not map onto H_1(M)".into()));
    }
    if d.chi == 0 {
        return Err(Error::MissingHypothesis("the fixed-set constraints need χ(M) ≠ 0".into()));
    }
    Ok(FixedSetConstraints { b1: 2 * d.b1, b0_plus_b2: 2 + d.b2, chi: 2 - 2 * d.b1 as i64 + d.r0 as i64 - d.r1 as i64 })
}

/// dim H^5_G(M), dim H^6_G(M) (integral, over F_p) and dim H^5_G(M; F_p)
/// for a Z/p action, given b = dim of the d_2 image from the H^3 row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimFormulas {
    pub h5: usize,
    pub h6: usize,
    pub h5_mod_p: usize,
}

fn require_cyclic(d: &ManifoldActionData) -> Result<()> {
    if d.group_rank != 1 {
        return Err(Error::Unsupported(format!("needs a cyclic group, got rank {}", d.group_rank)));
    }
    Ok(())
}

pub fn lemma_dim_formulas(d: &ManifoldActionData, b: usize) -> Result<DimFormulas> {
    let d = d.validated()?;
    require_cyclic(&d)?;
    if b > d.t {
        return Err(Error::Data(format!("b = {b} exceeds t = {}", d.t)));
    }
    let h2 = d.h2_decomposition();
    let (h3, h4) = (h2.dim(3)?, h2.dim(4)?);
    Ok(DimFormulas {
        h5: 2 * d.b1 + (d.t - b) + h3,
        h6: 2 + (d.t - b) + h4,
        h5_mod_p: 2 + 2 * d.b1 + 2 * d.t + h3 + h4,
    })
}

/// The b with h5(b) + h6(b) equal to an observed dim H^5_G(M; F_p).
pub fn deduce_b_from_observed(d: &ManifoldActionData, h5_mod_p: usize) -> Result<usize> {
    let at_zero = lemma_dim_formulas(d, 0)?;
    // h5(b) + h6(b) = h5(0) + h6(0) - 2b
    let top = at_zero.h5 + at_zero.h6;
    if h5_mod_p > top || !(top - h5_mod_p).is_multiple_of(2) || (top - h5_mod_p) / 2 > d.t {
        return Err(Error::Data(format!("no b in 0..={} gives h5 + h6 = {h5_mod_p} (b = 0 gives {top})", d.t)));
    }
    Ok((top - h5_mod_p) / 2)
}

/// b for the dimension predicted by the formulas, which is always 0.
pub fn deduce_b_zero(d: &ManifoldActionData) -> Result<usize> {
    deduce_b_from_observed(d, lemma_dim_formulas(d, 0)?.h5_mod_p)
}

/// dim H^q_G(M) for q > 4 of a pseudofree (Z/p)^2 action, or the
/// obstruction when χ is not a non-negative multiple of p.
#[derive(Clone, Debug, PartialEq)]
pub enum SingularSetBound {
    Bound(usize),
    RuledOut(Verdict),
}

impl SingularSetBound {
    pub fn verdict(&self, d: &ManifoldActionData) -> Verdict {
        match self {
            SingularSetBound::Bound(n) => Verdict::new(Outcome::Consistent, RuleTag::SingularSetCount)
                .with("chi", d.chi)
                .with("p", d.p)
                .with("bound", *n),
            SingularSetBound::RuledOut(v) => v.clone(),
        }
    }
}

pub fn singular_set_bound(d: &ManifoldActionData) -> Result<SingularSetBound> {
    let d = d.validated()?;
    if d.group_rank != 2 {
        return Err(Error::Unsupported(format!("the singular-set count is for rank 2, got {}", d.group_rank)));
    }
    if !flag("pseudofree", d.pseudofree)? || !flag("homologically_trivial", d.homologically_trivial)? {
        return Err(Error::MissingHypothesis(
            "the singular-set count needs a pseudofree, homologically trivial action".into(),
        ));
    }
    let p = d.p as i64;
    if d.chi < 0 || d.chi % p != 0 {
        return Ok(SingularSetBound::RuledOut(
            Verdict::new(Outcome::RuledOut, RuleTag::SingularSetCount)
                .with("chi", d.chi)
                .with("p", d.p)
                .with("summary", format!("χ = {} is not a non-negative multiple of {p}", d.chi)),
        ));
    }
    let g = GroupSpec::new(d.p, 2)?;
    let per = (d.chi / p) as usize;
    let mut total = 0;
    for k in cyclic_subgroups(&g) {
        total += shapiro_dim(&g, &CoefficientModuleType::PermutationFp { subgroup: k, multiplicity: per }, 5)?;
    }
    Ok(SingularSetBound::Bound(total))
}

/// Largest degree in the bottom row a differential d_r, r ≤ 5, can reach
/// from a column at most [`MAX_SOURCE_COLUMN`].
pub fn max_reachable_degree() -> u32 {
    MAX_SOURCE_COLUMN + LAST_PAGE
}

/// Whether a pseudofree, homologically trivial (Z/p)^n action with χ ≠ 0
/// is excluded by the rank bound.
pub fn pseudofree_rank_verdict(p: u32, n: usize, d: &ManifoldActionData) -> Result<Verdict> {
    let d = d.validated()?;
    if d.p != p {
        return Err(Error::ModulusMismatch(d.p, p));
    }
    if n == 0 {
        return Err(Error::Group("rank must be at least 1".into()));
    }
    let pseudofree = flag("pseudofree", d.pseudofree)?;
    let trivial = flag("homologically_trivial", d.homologically_trivial)?;
    if !pseudofree || !trivial || d.chi == 0 {
        return Ok(Verdict::new(Outcome::Inconclusive, RuleTag::HypothesesNotMet)
            .with("pseudofree", pseudofree)
            .with("homologically_trivial", trivial)
            .with("chi", d.chi));
    }
    let head = |outcome, rule| Verdict::new(outcome, rule).with("p", p).with("rank", n);
    if n == 1 {
        return Ok(head(Outcome::Consistent, RuleTag::CyclicRank));
    }
    let reach = max_reachable_degree();
    if p == 2 {
        let search = search_nonrestricting_quadratic(n.min(3))?;
        let v = |outcome, rule| {
            head(outcome, rule)
                .with("searched_rank", n.min(3))
                .with("candidates", search.candidates)
                .with("subgroups", search.subgroups)
                .with("checks", search.checks)
        };
        return Ok(match search.witness() {
            Some(w) if n == 2 => v(Outcome::Consistent, RuleTag::QuadraticWitness).with("witness", w.render()),
            None => v(Outcome::RuledOut, RuleTag::NonrestrictingQuadratic).with("witness", "none"),
            Some(w) => {
                return Err(Error::Inconsistent(format!(
                    "rank-{} search found {} although none should exist",
                    n.min(3),
                    w.render()
                )))
            }
        });
    }
    let (rank, degrees, rule) = if p == 3 && n >= 3 {
        (3, RANK3_P3_MUI_DEGREES.to_vec(), RuleTag::RankThreeMuiDegrees)
    } else {
        (2, mui_degrees(&GroupSpec::new(p, 2)?)?, RuleTag::MuiDegreeUnreachable)
    };
    let unreachable: Vec<u32> = degrees.iter().copied().filter(|&q| q > reach).collect();
    let v = |outcome, rule| {
        head(outcome, rule)
            .with("subgroup_rank", rank)
            .with("mui_degrees", degrees.clone())
            .with("max_source_column", MAX_SOURCE_COLUMN)
            .with("max_page", LAST_PAGE)
            .with("max_reachable_degree", reach)
            .with("unreachable_degrees", unreachable.clone())
    };
    if unreachable.is_empty() {
        return Ok(v(Outcome::Consistent, RuleTag::MuiDegreesReachable));
    }
    let first = unreachable[0];
    Ok(v(Outcome::RuledOut, rule).with("min_source_column_for_first_unreachable", first - LAST_PAGE))
}

/// The E_3 checks for a pseudofree Z/p action: b_2 ≥ 2 b_1, the count
/// Σ_k dim E_3^{k,5-k} = 2 + b_2 - 2 b_1 + 4R with R = dim ker d_2^{2,3},
/// and R = 0 with the q = 5 total equal to χ(M).
pub fn prop_cyclic_checks(d: &ManifoldActionData, page3: &SSPage) -> Result<Verdict> {
    let d = d.validated()?;
    require_cyclic(&d)?;
    if !flag("pseudofree", d.pseudofree)? || !flag("homologically_trivial", d.homologically_trivial)? {
        return Err(Error::MissingHypothesis("needs a pseudofree, homologically trivial action".into()));
    }
    if d.chi == 0 {
        return Err(Error::MissingHypothesis("needs χ(M) ≠ 0".into()));
    }
    if page3.page() != 3 {
        return Err(Error::Differential(format!("expected E_3, got E_{}", page3.page())));
    }
    let ctx = page3.context();
    if ctx.group().rank() != 1 || ctx.group().p() != d.p {
        return Err(Error::Data("the page is not for the group of the data".into()));
    }
    let fiber = ctx.fiber();
    let (b1, b2) = (fiber.dim(1), fiber.dim(2));
    if (b1, b2) != (d.b1 + d.t, d.b2 + 2 * d.t) {
        return Err(Error::Data(format!(
            "fiber has F_p-Betti numbers b1 = {b1}, b2 = {b2}, the data gives {}, {}",
            d.b1 + d.t,
            d.b2 + 2 * d.t
        )));
    }
    let head = |outcome| Verdict::new(outcome, RuleTag::CyclicPseudofree).with("b1", b1).with("b2", b2);
    if b2 < 2 * b1 {
        return Ok(head(Outcome::RuledOut).with("summary", format!("b2 = {b2} < 2·b1 = {}", 2 * b1)));
    }
    let record = page3
        .history()
        .iter()
        .find(|r| r.page == 2)
        .and_then(|r| r.cells.iter().find(|c| (c.k, c.l) == (2, 3)))
        .ok_or_else(|| Error::Differential("no d_2 record at (2, 3)".into()))?;
    let nullity = record.dim - record.rank;
    let sum: usize = (1..=5u32).map(|k| page3.dim(k, 5 - k)).sum::<Result<usize>>()?;
    let expected = 2 + b2 + 4 * nullity - 2 * b1;
    if sum != expected {
        return Err(Error::Inconsistent(format!(
            "Σ dim E_3^{{k,5-k}} = {sum} but 2 + b2 - 2·b1 + 4R = {expected} with R = {nullity}"
        )));
    }
    let total5 = page3.totals(5)?;
    let ok = nullity == 0 && total5 as i64 == d.chi;
    Ok(head(if ok { Outcome::Consistent } else { Outcome::RuledOut })
        .with("kernel_d2_2_3", nullity)
        .with("e3_sum_q5", sum)
        .with("totals_q5", total5)
        .with("chi", d.chi))
}
