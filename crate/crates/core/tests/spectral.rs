use borel_core::group::GroupSpec;
use borel_core::spectral::{
    build_e2, leibniz_extend, run_schedule, run_schedule_pages, sikora_constraint_check, turn_page, BottomRowPolicy,
    DifferentialSpec, DifferentialSpecData, EntrySpec, FiberAlgebra, FiberClass, ProductRule, SSPage, TermSpec,
};

fn t(base: &str, fiber: &str) -> TermSpec {
    TermSpec::new(base, fiber)
}

fn spec(page: &SSPage, r: u32, entries: Vec<(Vec<TermSpec>, Vec<TermSpec>)>) -> DifferentialSpec {
    let data = DifferentialSpecData {
        page: r,
        entries: entries.into_iter().map(|(source, target)| EntrySpec { source, target }).collect(),
    };
    DifferentialSpec::from_data(page.context(), &data).unwrap()
}

fn cp2_z3z3() -> SSPage {
    let g = GroupSpec::new(3, 2).unwrap();
    build_e2(&g, FiberAlgebra::preset("cp2", 3).unwrap(), 12, BottomRowPolicy::Essential).unwrap()
}

fn d3_cp2(e2: &SSPage) -> DifferentialSpec {
    spec(e2, 3, vec![(vec![t("1", "z")], vec![t("x1*u2 - x2*u1", "1")])])
}

fn d5_cp2(e5: &SSPage) -> DifferentialSpec {
    spec(
        e5,
        5,
        vec![
            (vec![t("x1*x2", "w")], vec![t("x1*u2^3 - x2*u1^3", "1")]),
            (vec![t("x1*u2 - x2*u1", "w")], vec![t("u1*u2^3 - u2*u1^3", "1")]),
        ],
    )
}

#[test]
fn e2_dimensions() {
    let e2 = cp2_z3z3();
    assert_eq!(e2.dim(2, 2).unwrap(), 3);
    assert_eq!(e2.dim(0, 0).unwrap(), 1);
    assert_eq!(e2.dim(4, 5).unwrap(), 0);
    // dim E2^{k,l} = (k+1) b_l for rank 2
    for k in 0..=12 {
        assert_eq!(e2.dim(k, 2).unwrap(), k as usize + 1);
        assert_eq!(e2.dim(k, 1).unwrap(), 0);
    }
}

#[test]
fn leibniz_gives_d3_of_w() {
    let e2 = cp2_z3z3();
    let e3 = turn_page(&leibniz_extend(&e2, &DifferentialSpec::zero(2)).unwrap()).unwrap();
    let with_d3 = leibniz_extend(&e3, &d3_cp2(&e3)).unwrap();
    let ctx = e3.context();
    let w = ctx.parse(&[t("1", "w")]).unwrap();
    let expected = ctx.parse(&[t("-x1*u2 + x2*u1", "z")]).unwrap();
    let got = with_d3.differential_value(&w).unwrap();
    assert!(with_d3.equal_mod_boundaries(&got, &expected).unwrap(), "{}", ctx.render(&got));
    // γ1 w and γ2 w are cycles
    let g1w = ctx.parse(&[t("x1*x2", "w")]).unwrap();
    assert!(with_d3.differential_value(&g1w).unwrap().is_zero());
    let g2w = ctx.parse(&[t("x1*u2 - x2*u1", "w")]).unwrap();
    assert!(with_d3.differential_value(&g2w).unwrap().is_zero());
    assert_eq!(with_d3.rank(3, 2), 3);

    let e4 = turn_page(&with_d3).unwrap();
    assert_eq!(e4.dim(4, 2).unwrap(), 0);
    assert_eq!(e4.dim(5, 2).unwrap(), 0);
    assert_eq!(e4.dim(6, 0).unwrap(), 4);
    assert_eq!(e4.dim(7, 0).unwrap(), 5);
    assert_eq!(e4.dim(2, 4).unwrap(), 1);
    assert_eq!(e4.dim(3, 4).unwrap(), 1);
}

#[test]
fn full_run_matches_singular_set_count() {
    let e2 = cp2_z3z3();
    let pages = run_schedule_pages(e2.clone(), &[d3_cp2(&e2)]).unwrap();
    let e5 = &pages[3];
    assert_eq!(e5.page(), 5);
    let d5 = d5_cp2(e5);
    let e2b = cp2_z3z3();
    let e_inf = run_schedule(
        e2b.context().group(),
        FiberAlgebra::preset("cp2", 3).unwrap(),
        &[d3_cp2(&e2b), d5],
        12,
        BottomRowPolicy::Essential,
    )
    .unwrap();
    assert_eq!(e_inf.page(), 6);
    assert_eq!(e_inf.valid_through(), 12 + 14 - 3 - 5);
    for q in 5..=12 {
        assert_eq!(e_inf.totals(q).unwrap(), 4, "q={q}");
    }
    assert!(e_inf.totals(e_inf.valid_through() + 1).is_err());
}

#[test]
fn bottom_row_policies() {
    // a differential onto a non-essential class is rejected
    let e2 = cp2_z3z3();
    let e3 = turn_page(&leibniz_extend(&e2, &DifferentialSpec::zero(2)).unwrap()).unwrap();
    let bad = spec(&e3, 3, vec![(vec![t("1", "z")], vec![t("u1*x2", "1")])]);
    assert!(leibniz_extend(&e3, &bad).is_err());

    // with a fixed point nothing may hit the bottom row
    let g = GroupSpec::new(3, 1).unwrap();
    let e2 = build_e2(&g, FiberAlgebra::preset("cp2", 3).unwrap(), 10, BottomRowPolicy::Forbidden).unwrap();
    let e3 = turn_page(&leibniz_extend(&e2, &DifferentialSpec::zero(2)).unwrap()).unwrap();
    let bad = spec(&e3, 3, vec![(vec![t("1", "z")], vec![t("x*u", "1")])]);
    assert!(leibniz_extend(&e3, &bad).is_err());
}

#[test]
fn spec_validation() {
    let e2 = cp2_z3z3();
    let ctx = e2.context();
    // wrong target bidegree
    let data = DifferentialSpecData {
        page: 3,
        entries: vec![EntrySpec { source: vec![t("1", "z")], target: vec![t("x1", "1")] }],
    };
    assert!(DifferentialSpec::from_data(ctx, &data).is_err());
    // page out of range
    let data = DifferentialSpecData { page: 6, entries: vec![] };
    assert!(DifferentialSpec::from_data(ctx, &data).is_err());
    // source column above 3
    let s = spec(&e2, 2, vec![(vec![t("u1^2", "w")], vec![])]);
    assert!(leibniz_extend(&e2, &s).is_err());
    // spec page must match
    assert!(leibniz_extend(&e2, &DifferentialSpec::zero(3)).is_err());
}

#[test]
fn zero_differential_keeps_the_page() {
    let e2 = cp2_z3z3();
    let e3 = turn_page(&leibniz_extend(&e2, &DifferentialSpec::zero(2)).unwrap()).unwrap();
    for k in 0..=e2.valid_through() {
        for l in 0..=4 {
            assert_eq!(e2.dim(k, l).unwrap(), e3.dim(k, l).unwrap());
        }
    }
    assert_eq!(e3.valid_through(), e2.valid_through());
}

#[test]
fn trivial_group_totals_are_betti_numbers() {
    let g = GroupSpec::trivial(5).unwrap();
    let c = |n: &str, d| FiberClass { name: n.into(), degree: d };
    let r = |a: &str, b: &str, res: &str| ProductRule { left: a.into(), right: b.into(), result: res.into() };
    // S1 x S3 # CP2: b = (1, 1, 1, 1, 1)
    let fiber = FiberAlgebra::new(
        5,
        &[c("alpha", 1), c("z", 2), c("beta", 3), c("w", 4)],
        &[r("alpha", "beta", "w"), r("z", "z", "w")],
    )
    .unwrap();
    let e = run_schedule(&g, fiber, &[], 6, BottomRowPolicy::Unconstrained).unwrap();
    let totals: Vec<usize> = (0..=6).map(|q| e.totals(q).unwrap()).collect();
    assert_eq!(totals, vec![1, 1, 1, 1, 1, 0, 0]);
}

#[test]
fn collapse_totals_cyclic() {
    // all differentials zero for Z/p: totals in degrees > 4 equal Σ b_l
    for p in [2, 3, 5] {
        let g = GroupSpec::new(p, 1).unwrap();
        let e = run_schedule(&g, FiberAlgebra::preset("s2xs2", p).unwrap(), &[], 2 * p + 6, BottomRowPolicy::Forbidden)
            .unwrap();
        for q in 5..=2 * p + 6 {
            assert_eq!(e.totals(q).unwrap(), 4, "p={p} q={q}");
        }
    }
}

#[test]
fn sikora_check() {
    // zero d2 with b1 = b3: symmetric
    let g = GroupSpec::new(3, 1).unwrap();
    let e2 = build_e2(&g, FiberAlgebra::preset("s1xs3", 3).unwrap(), 8, BottomRowPolicy::Unconstrained).unwrap();
    let e3 = turn_page(&leibniz_extend(&e2, &DifferentialSpec::zero(2)).unwrap()).unwrap();
    assert!(sikora_constraint_check(&e3).unwrap());
    assert!(sikora_constraint_check(&e2).is_err());

    // d2(beta) = u ⊗ a is injective out of E^{2,3} while nothing reaches
    // or leaves E^{2,1}: the two sides differ
    let c = |n: &str, d| FiberClass { name: n.into(), degree: d };
    let r = |a: &str, b: &str, res: &str| ProductRule { left: a.into(), right: b.into(), result: res.into() };
    let fiber = FiberAlgebra::new(
        3,
        &[c("alpha", 1), c("a", 2), c("b", 2), c("beta", 3), c("w", 4)],
        &[r("alpha", "beta", "w"), r("a", "b", "w")],
    )
    .unwrap();
    let e2 = build_e2(&g, fiber, 8, BottomRowPolicy::Unconstrained).unwrap();
    let s = spec(&e2, 2, vec![(vec![t("1", "beta")], vec![t("u", "a")])]);
    let e3 = turn_page(&leibniz_extend(&e2, &s).unwrap()).unwrap();
    assert_eq!(e3.dim(2, 1).unwrap(), 1);
    assert_eq!(e3.dim(2, 3).unwrap(), 0);
    assert!(!sikora_constraint_check(&e3).unwrap());
}

#[test]
fn decay_is_monotone() {
    let e2 = cp2_z3z3();
    let pages = run_schedule_pages(e2.clone(), &[d3_cp2(&e2)]).unwrap();
    for pair in pages.windows(2) {
        let top = pair[1].valid_through();
        for k in 0..=top {
            for l in 0..=4 {
                assert!(pair[1].dim(k, l).unwrap() <= pair[0].dim(k, l).unwrap());
            }
        }
    }
}
