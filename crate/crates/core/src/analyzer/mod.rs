//! Theorem-level checks on invariant data of a p-torus action on a closed
//! oriented 4-manifold.

mod data;
mod rules;
mod verdict;

pub use data::{FixedSetBetti, FixedSetData, ManifoldActionData, Surface};
pub use rules::{
    collapse_verdict, deduce_b_from_observed, deduce_b_zero, fixed_set_constraints, lemma_dim_formulas,
    max_reachable_degree, prop_cyclic_checks, pseudofree_rank_verdict, singular_set_bound, totals_test, DimFormulas,
    FixedSetConstraints, SingularSetBound, MAX_SOURCE_COLUMN,
};
pub use verdict::{Outcome, RuleTag, Verdict};
