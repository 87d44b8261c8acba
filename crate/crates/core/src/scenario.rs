//! Scenario files: manifold data, a fixed set, an optional fiber ring and
//! differentials, and the checks to run on them.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analyzer::{
    collapse_verdict, deduce_b_zero, fixed_set_constraints, lemma_dim_formulas, prop_cyclic_checks,
    pseudofree_rank_verdict, singular_set_bound, totals_test, FixedSetData, ManifoldActionData, Outcome, RuleTag,
    SingularSetBound, Verdict,
};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::spectral::{
    build_e2, run_schedule_pages, sikora_constraint_check, BottomRowPolicy, DifferentialSpec, DifferentialSpecData,
    FiberAlgebra, FiberClass, PageDump, ProductRule, SSPage,
};

pub const SCHEMA_VERSION: u32 = 1;

/// The cohomology ring of M, either a named preset or a table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub classes: Vec<FiberClass>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub products: Vec<ProductRule>,
}

impl FiberSpec {
    pub fn build(&self, p: u32) -> Result<FiberAlgebra> {
        match &self.preset {
            Some(name) if self.classes.is_empty() && self.products.is_empty() => FiberAlgebra::preset(name, p),
            Some(_) => Err(Error::Scenario("give either a fiber preset or classes and products, not both".into())),
            None => FiberAlgebra::new(p, &self.classes, &self.products),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    CollapseRules,
    BettiTotals,
    FixedSetConstraints,
    DimensionFormulas,
    SingularSetBound,
    RankBound,
    CyclicPseudofree,
    DualitySymmetry,
    SpectralSequence,
}

impl Check {
    pub fn needs_spectral_sequence(self) -> bool {
        matches!(self, Check::CyclicPseudofree | Check::DualitySymmetry | Check::SpectralSequence)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub manifold: ManifoldActionData,
    pub fixed_set: FixedSetData,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber: Option<FiberSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub differentials: Vec<DifferentialSpecData>,
    #[serde(default)]
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<u32>,
}

/// One verdict in a report, tagged by the check that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub check: Check,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub verdicts: Vec<ReportEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub page_dumps: Option<Vec<PageDump>>,
}

impl Report {
    /// 2 if any verdict is an obstruction, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.verdicts.iter().any(|e| e.verdict.outcome.is_obstruction()) {
            2
        } else {
            0
        }
    }
}

impl Scenario {
    /// Parse and validate; serde errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| Error::Scenario(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Scenario(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Scenario(msg) => Error::Scenario(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenarios serialize")
    }

    /// Manifold data with flags derived from the rest and from the fixed
    /// set.
    pub fn data(&self) -> Result<ManifoldActionData> {
        let mut d = self.manifold.validated()?;
        let nonempty = !self.fixed_set.is_empty();
        match d.fixed_set_nonempty {
            Some(flag) if flag != nonempty => {
                return Err(Error::Scenario(format!(
                    "fixed_set_nonempty is {flag} but the fixed set is {}",
                    if nonempty { "nonempty" } else { "empty" }
                )))
            }
            _ => d.fixed_set_nonempty = Some(nonempty),
        }
        d.validated()
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Scenario(format!(
                "schema {} is not supported (expected {SCHEMA_VERSION})",
                self.schema
            )));
        }
        if self.name.trim().is_empty() {
            return Err(Error::Scenario("scenario name is empty".into()));
        }
        let d = self.data()?;
        if d.pseudofree == Some(true) && !self.fixed_set.is_points_only() {
            return Err(Error::Scenario("a pseudofree action has isolated fixed points only".into()));
        }
        self.fixed_set.betti(d.p)?;
        let spectral = self.checks.iter().any(|c| c.needs_spectral_sequence());
        if (spectral || !self.differentials.is_empty()) && self.fiber.is_none() {
            return Err(Error::Scenario("spectral sequence checks and differentials need a fiber".into()));
        }
        if let Some(spec) = &self.fiber {
            let fiber = spec.build(d.p)?;
            let expected = (d.b1 + d.t, d.b2 + 2 * d.t);
            if (fiber.dim(1), fiber.dim(2)) != expected {
                return Err(Error::Scenario(format!(
                    "fiber has b1 = {}, b2 = {} over F_p, the manifold data gives {}, {}",
                    fiber.dim(1),
                    fiber.dim(2),
                    expected.0,
                    expected.1
                )));
            }
        }
        let mut pages: Vec<u32> = self.differentials.iter().map(|s| s.page).collect();
        pages.sort_unstable();
        if let Some(w) = pages.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Scenario(format!("two differential specs for page {}", w[0])));
        }
        if let Some(r) = pages.iter().find(|r| !(2..=5).contains(*r)) {
            return Err(Error::Scenario(format!("differential page {r} is outside 2..=5")));
        }
        Ok(())
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff.unwrap_or((2 * self.manifold.p + 2).max(8))
    }

    /// What differentials may hit in the bottom row.
    pub fn policy(&self) -> BottomRowPolicy {
        let d = &self.manifold;
        if !self.fixed_set.is_empty() {
            BottomRowPolicy::Forbidden
        } else if d.pseudofree == Some(true) && d.group_rank >= 2 {
            BottomRowPolicy::Essential
        } else {
            BottomRowPolicy::Unconstrained
        }
    }

    /// E_2 through E_6 with their differentials.
    pub fn pages(&self) -> Result<Vec<SSPage>> {
        let d = self.data()?;
        if d.homologically_trivial != Some(true) {
            return Err(Error::MissingHypothesis("the spectral sequence needs a homologically trivial action".into()));
        }
        let spec = self.fiber.as_ref().ok_or_else(|| Error::Scenario("no fiber given".into()))?;
        let g = GroupSpec::new(d.p, d.group_rank)?;
        let e2 = build_e2(&g, spec.build(d.p)?, self.cutoff(), self.policy())?;
        let specs = self
            .differentials
            .iter()
            .map(|s| DifferentialSpec::from_data(e2.context(), s))
            .collect::<Result<Vec<_>>>()?;
        run_schedule_pages(e2, &specs)
    }

    pub fn run(&self, dump_pages: bool) -> Result<Report> {
        self.validate()?;
        let d = self.data()?;
        let (fixed, mut warnings) = self.fixed_set.betti(d.p)?;
        let wants_pages = dump_pages || self.checks.iter().any(|c| c.needs_spectral_sequence());
        let pages = if wants_pages && self.fiber.is_some() { Some(self.pages()) } else { None };

        let mut verdicts = Vec::new();
        for &check in &self.checks {
            let result = match check {
                Check::CollapseRules => collapse_verdict(&d),
                Check::BettiTotals => totals_test(d.mod_p_total(), fixed.total()),
                Check::FixedSetConstraints => fixed_set_constraints(&d).map(|c| {
                    let matches = c.b1 == fixed.b1
                        && c.b0_plus_b2 == fixed.b0 + fixed.b2
                        && c.chi == fixed.euler_characteristic();
                    Verdict::new(
                        if matches { Outcome::Consistent } else { Outcome::RuledOut },
                        RuleTag::FixedSetBettiConstraints,
                    )
                    .with("required", serde_json::json!([c.b1, c.b0_plus_b2, c.chi]))
                    .with("declared", serde_json::json!([fixed.b1, fixed.b0 + fixed.b2, fixed.euler_characteristic()]))
                }),
                Check::DimensionFormulas => lemma_dim_formulas(&d, 0).and_then(|f| {
                    Ok(Verdict::new(Outcome::Consistent, RuleTag::DimensionFormulas)
                        .with("h5", f.h5)
                        .with("h6", f.h6)
                        .with("h5_mod_p", f.h5_mod_p)
                        .with("b", deduce_b_zero(&d)?))
                }),
                Check::SingularSetBound => singular_set_bound(&d).map(|b| b.verdict(&d)),
                Check::RankBound => pseudofree_rank_verdict(d.p, d.group_rank, &d),
                Check::CyclicPseudofree => page_result(&pages).and_then(|p| prop_cyclic_checks(&d, &p[1])),
                Check::DualitySymmetry => page_result(&pages).and_then(|p| {
                    let e3 = &p[1];
                    let ok = sikora_constraint_check(e3)?;
                    Ok(Verdict::new(if ok { Outcome::Consistent } else { Outcome::RuledOut }, RuleTag::DualitySymmetry)
                        .with("e3_2_1", e3.dim(2, 1)?)
                        .with("e3_2_3", e3.dim(2, 3)?))
                }),
                Check::SpectralSequence => page_result(&pages).and_then(|p| self.totals_verdict(&d, &fixed, p)),
            };
            let verdict = match result {
                Ok(v) => v,
                Err(Error::MissingHypothesis(reason)) => {
                    Verdict::new(Outcome::Inconclusive, RuleTag::HypothesesNotMet).with("reason", reason)
                }
                Err(e) => return Err(e),
            };
            verdicts.push(ReportEntry { check, verdict });
        }
        warnings.extend(disagreements(&verdicts));
        let page_dumps = match (dump_pages, pages) {
            (true, Some(Ok(p))) => Some(p.iter().flat_map(SSPage::dumps).collect()),
            (true, Some(Err(e))) => return Err(e),
            _ => None,
        };
        Ok(Report { scenario: self.name.clone(), verdicts, warnings, page_dumps })
    }

    /// E_∞ totals for q = 5..=cutoff against the count expected from the
    /// fixed or singular set.
    fn totals_verdict(
        &self,
        d: &ManifoldActionData,
        fixed: &crate::analyzer::FixedSetBetti,
        pages: &[SSPage],
    ) -> Result<Verdict> {
        let last = pages.last().expect("a run has pages");
        let (target, source) = if d.group_rank == 1 {
            (fixed.total(), "fixed set")
        } else if d.pseudofree == Some(true) {
            match singular_set_bound(d)? {
                SingularSetBound::Bound(n) => (n, "singular set"),
                SingularSetBound::RuledOut(v) => return Ok(v),
            }
        } else {
            return Err(Error::MissingHypothesis(
                "the expected total is known for cyclic or pseudofree actions only".into(),
            ));
        };
        let top = self.cutoff().min(last.valid_through());
        let totals = (5..=top).map(|q| last.totals(q)).collect::<Result<Vec<_>>>()?;
        let ok = totals.iter().all(|&t| t == target);
        let ranks: Vec<_> = pages
            .iter()
            .filter_map(SSPage::differential)
            .map(|dr| {
                let rank: usize = dr.maps.iter().filter(|((k, l), _)| k + l <= top).map(|(_, m)| m.matrix.rank()).sum();
                serde_json::json!({ "page": dr.page, "rank_through_cutoff": rank })
            })
            .collect();
        Ok(Verdict::new(if ok { Outcome::Consistent } else { Outcome::RuledOut }, RuleTag::SpectralSequenceTotals)
            .with("expected", target)
            .with("expected_from", source)
            .with("first_degree", 5)
            .with("totals", totals)
            .with("differential_ranks", ranks))
    }
}

fn page_result(pages: &Option<Result<Vec<SSPage>>>) -> Result<&[SSPage]> {
    match pages {
        Some(Ok(p)) => Ok(p),
        Some(Err(e)) => Err(e.clone()),
        None => Err(Error::Scenario("no fiber given".into())),
    }
}

/// Warnings for a collapse verdict contradicted by another check.
fn disagreements(entries: &[ReportEntry]) -> Vec<String> {
    let decisive = |o: Outcome| matches!(o, Outcome::Collapses | Outcome::DoesNotCollapse);
    let mut out = Vec::new();
    for (i, a) in entries.iter().enumerate() {
        for b in &entries[i + 1..] {
            let (oa, ob) = (a.verdict.outcome, b.verdict.outcome);
            if decisive(oa) && decisive(ob) && oa != ob {
                out.push(format!("{:?} says {oa} but {:?} says {ob}", a.verdict.rule, b.verdict.rule));
            }
        }
    }
    out
}
