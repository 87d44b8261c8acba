use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Collapses,
    DoesNotCollapse,
    RuledOut,
    Consistent,
    Inconclusive,
}

impl Outcome {
    /// RuledOut and DoesNotCollapse are the negative outcomes.
    pub fn is_obstruction(self) -> bool {
        matches!(self, Outcome::RuledOut | Outcome::DoesNotCollapse)
    }
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Outcome::Collapses => "collapses",
            Outcome::DoesNotCollapse => "does not collapse",
            Outcome::RuledOut => "ruled out",
            Outcome::Consistent => "consistent",
            Outcome::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

/// The result a verdict rests on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleTag {
    /// Z/p, orientation preserving, F ≠ ∅, H_1(F) onto H_1(M): collapse.
    FixedSetSurjectivity,
    /// Z/p with a nonzero kernel of H^1(M) → H^1(F) carrying the trivial
    /// action: no collapse.
    KernelObstruction,
    /// Z/p, p odd, torsion-free H_1: collapse exactly when H_1(F) maps onto
    /// H_1(M).
    CyclicTorsionFreeCriterion,
    /// (Z/p)^2, p odd, torsion-free H_1: collapse exactly when H_1(M) = 0.
    RankTwoTorsionFreeCriterion,
    /// No collapse rule has all of its hypotheses.
    NoRuleApplies,
    /// Total F_p-Betti numbers of F against those of M.
    BettiTotals,
    /// b_1(F), b_0(F) + b_2(F) and χ(F) forced by the Betti numbers of M.
    FixedSetBettiConstraints,
    /// The H^5, H^6 dimension count showing the d_2 image b vanishes.
    DimensionFormulas,
    /// dim H^q_G(M) = (χ/p)(p + 1) for large q, requiring p | χ.
    SingularSetCount,
    /// Rank one: no rank obstruction.
    CyclicRank,
    /// Every Mùi generator lies within reach of d_2..d_5.
    MuiDegreesReachable,
    /// γ_3, γ_4 sit in degrees 2p+1, 2p+2 beyond reach for p ≥ 5.
    MuiDegreeUnreachable,
    /// The rank-3 Mùi generators at p = 3 beyond reach.
    RankThreeMuiDegrees,
    /// A quadratic class nonzero on every order-2 subgroup exists.
    QuadraticWitness,
    /// No quadratic class is nonzero on every order-2 subgroup.
    NonrestrictingQuadratic,
    /// The hypotheses of a rule are not met.
    HypothesesNotMet,
    /// Pseudofree Z/p: b_2 ≥ 2 b_1 and the E_3 count at q = 5.
    CyclicPseudofree,
    /// dim E_3^{2,1} = dim E_3^{2,3}.
    DualitySymmetry,
    /// Totals of a computed E_∞ page against the expected count.
    SpectralSequenceTotals,
}

/// An outcome with the rule that produced it and the numbers behind it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub rule: RuleTag,
    pub evidence: BTreeMap<String, Value>,
}

impl Verdict {
    pub fn new(outcome: Outcome, rule: RuleTag) -> Self {
        Verdict { outcome, rule, evidence: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.evidence.insert(key.to_string(), value.into());
        self
    }
}
