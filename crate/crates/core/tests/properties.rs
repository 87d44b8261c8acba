use std::path::PathBuf;

use proptest::prelude::*;

use borel_core::analyzer::{
    collapse_verdict, deduce_b_from_observed, fixed_set_constraints, lemma_dim_formulas, pseudofree_rank_verdict,
    singular_set_bound, totals_test, FixedSetData, ManifoldActionData, Outcome, RuleTag, SingularSetBound, Surface,
};
use borel_core::scenario::Scenario;

fn odd_prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![3u32, 5, 7, 11, 13])
}

/// Homologically trivial data for a Z/p action.
fn trivial_action(p: u32, b1: usize, b2: usize, t: usize) -> ManifoldActionData {
    let mut d = ManifoldActionData::new(p, 1, b1, b2);
    d.r0 = b2;
    d.t = t;
    d.homologically_trivial = Some(true);
    d
}

proptest! {
    #[test]
    fn totals_verdict_matches_equality(m in 0usize..40, f in 0usize..40) {
        match totals_test(m, f) {
            Ok(v) => {
                prop_assert!(f <= m);
                let want = if f == m { Outcome::Collapses } else { Outcome::DoesNotCollapse };
                prop_assert_eq!(v.outcome, want);
            }
            Err(_) => prop_assert!(f > m),
        }
    }

    #[test]
    fn fixed_set_constraints_are_self_consistent(p in odd_prime(), b1 in 0usize..6, b2 in 0usize..12) {
        let mut d = trivial_action(p, b1, b2, 0);
        d.h1_fix_to_m_surjective = Some(true);
        d.fixed_set_nonempty = Some(true);
        match fixed_set_constraints(&d) {
            Ok(c) => prop_assert_eq!(c.b0_plus_b2 as i64 - c.b1 as i64, c.chi),
            Err(_) => prop_assert_eq!(d.chi, 0),
        }
    }

    #[test]
    fn b_is_recovered_from_its_dimension(p in odd_prime(), b1 in 0usize..5, b2 in 0usize..8, t in 0usize..5, b in 0usize..5) {
        prop_assume!(b <= t);
        let d = trivial_action(p, b1, b2, t);
        let f = lemma_dim_formulas(&d, b).unwrap();
        prop_assert_eq!(deduce_b_from_observed(&d, f.h5 + f.h6).unwrap(), b);
        prop_assert_eq!(lemma_dim_formulas(&d, 0).unwrap().h5_mod_p, f.h5 + f.h6 + 2 * b);
        prop_assert!(lemma_dim_formulas(&d, t + 1).is_err());
    }

    #[test]
    fn singular_set_bound_counts_cyclic_subgroups(p in odd_prime(), b1 in 0usize..4, b2 in 0usize..30) {
        let mut d = ManifoldActionData::new(p, 2, b1, b2);
        d.r0 = b2;
        d.homologically_trivial = Some(true);
        d.pseudofree = Some(true);
        let p = p as i64;
        match singular_set_bound(&d).unwrap() {
            SingularSetBound::Bound(n) => {
                prop_assert!(d.chi >= 0 && d.chi % p == 0);
                prop_assert_eq!(n as i64, (p + 1) * d.chi / p);
            }
            SingularSetBound::RuledOut(v) => {
                prop_assert!(d.chi < 0 || d.chi % p != 0);
                prop_assert_eq!(v.outcome, Outcome::RuledOut);
            }
        }
    }

    #[test]
    fn cyclic_pseudofree_actions_pass_the_rank_bound(p in prop::sample::select(vec![2u32, 3, 5, 7]), b2 in 1usize..10) {
        let mut d = ManifoldActionData::new(p, 1, 0, b2);
        d.r0 = b2;
        d.homologically_trivial = Some(true);
        d.pseudofree = Some(true);
        let v = pseudofree_rank_verdict(p, 1, &d).unwrap();
        prop_assert_eq!((v.outcome, v.rule), (Outcome::Consistent, RuleTag::CyclicRank));
    }

    #[test]
    fn collapse_verdict_never_contradicts_surjectivity(p in odd_prime(), b1 in 0usize..4, b2 in 0usize..8, onto: bool) {
        let mut d = trivial_action(p, b1, b2, 0);
        d.fixed_set_nonempty = Some(true);
        d.h1_torsion_free = Some(true);
        d.h1_fix_to_m_surjective = Some(onto || b1 == 0);
        let v = collapse_verdict(&d).unwrap();
        let want = if onto || b1 == 0 { Outcome::Collapses } else { Outcome::DoesNotCollapse };
        prop_assert_eq!(v.outcome, want);
    }

    #[test]
    fn fixed_set_euler_characteristic_is_additive(points in 0usize..6, genera in prop::collection::vec(0usize..4, 0..4)) {
        let f = FixedSetData {
            isolated_points: points,
            surfaces: genera.iter().map(|&g| Surface { genus: g, orientable: true }).collect(),
        };
        let (b, w) = f.betti(3).unwrap();
        prop_assert!(w.is_empty());
        let chi: i64 = points as i64 + genera.iter().map(|&g| 2 - 2 * g as i64).sum::<i64>();
        prop_assert_eq!(b.euler_characteristic(), chi);
    }
}

#[test]
fn bundled_scenarios_round_trip() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_none_or(|x| x != "json") {
            continue;
        }
        let s = Scenario::load(&path).unwrap();
        let again = Scenario::from_json(&s.to_json()).unwrap();
        assert_eq!(s, again, "{}", path.display());
        assert_eq!(s.to_json(), again.to_json());
        count += 1;
    }
    assert!(count >= 10);
}
