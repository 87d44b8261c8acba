//! Acceptance criteria, one PASS or FAIL line each. Exits non-zero if any
//! criterion fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use borel_core::algebra::{AlgebraElement, AlgebraPresentation, DegreeBasis, SteenrodAction, SteenrodOp};
use borel_core::analyzer::{
    deduce_b_zero, lemma_dim_formulas, pseudofree_rank_verdict, singular_set_bound, ManifoldActionData, Outcome,
    RuleTag, SingularSetBound,
};
use borel_core::essential::{
    ess_by_restriction_kernels, mui_degrees, search_nonrestricting_quadratic, steenrod_closure, verify_free_module,
};
use borel_core::group::{cohomology_ring, restriction_along, GroupSpec, H2Decomposition};
use borel_core::scenario::{Check, Report, Scenario};
use borel_core::spectral::{
    build_e2, leibniz_extend, run_schedule_pages, turn_page, BottomRowPolicy, DifferentialSpec, FiberAlgebra, SSPage,
    TermSpec,
};

type Outcome_ = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome_);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn scenario_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn bundled() -> Result<Vec<(String, Scenario)>, String> {
    let mut files: Vec<_> = std::fs::read_dir(scenario_dir())
        .map_err(err)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            Scenario::load(&p).map(|s| (name, s)).map_err(err)
        })
        .collect()
}

fn load(stem: &str) -> Result<Scenario, String> {
    Scenario::load(&scenario_dir().join(format!("{stem}.json"))).map_err(err)
}

fn t(base: &str, fiber: &str) -> TermSpec {
    TermSpec::new(base, fiber)
}

fn cp2_pseudofree_rank_two() -> Outcome_ {
    let g = GroupSpec::new(3, 2).map_err(err)?;
    let e2 = build_e2(&g, FiberAlgebra::preset("cp2", 3).map_err(err)?, 8, BottomRowPolicy::Essential).map_err(err)?;
    let ctx = e2.context().clone();
    let e3 = turn_page(&leibniz_extend(&e2, &DifferentialSpec::zero(2)).map_err(err)?).map_err(err)?;
    let d3 = DifferentialSpec::from_data(
        &ctx,
        &borel_core::spectral::DifferentialSpecData {
            page: 3,
            entries: vec![borel_core::spectral::EntrySpec {
                source: vec![t("1", "z")],
                target: vec![t("x1*u2 - x2*u1", "1")],
            }],
        },
    )
    .map_err(err)?;
    let with_d3 = leibniz_extend(&e3, &d3).map_err(err)?;
    let w = ctx.parse(&[t("1", "w")]).map_err(err)?;
    let expected = ctx.parse(&[t("-x1*u2 + x2*u1", "z")]).map_err(err)?;
    let got = with_d3.differential_value(&w).map_err(err)?;
    ensure!(with_d3.equal_mod_boundaries(&got, &expected).map_err(err)?, "d3(w) = {}", ctx.render(&got));
    ensure!(with_d3.rank(3, 2) == 3, "rank d3 out of (3,2) is {}", with_d3.rank(3, 2));
    let e4 = turn_page(&with_d3).map_err(err)?;
    for ((k, l), want) in [((4, 2), 0), ((6, 0), 4), ((5, 2), 0), ((7, 0), 5)] {
        let got = e4.dim(k, l).map_err(err)?;
        ensure!(got == want, "dim E4^{{{k},{l}}} = {got}, expected {want}");
    }

    let scenario = load("cp2_pseudofree_z3z3")?;
    let pages = scenario.pages().map_err(err)?;
    let last = pages.last().unwrap();
    let bound = match singular_set_bound(&scenario.data().map_err(err)?).map_err(err)? {
        SingularSetBound::Bound(n) => n,
        SingularSetBound::RuledOut(v) => return Err(format!("singular set bound ruled out: {:?}", v.evidence)),
    };
    ensure!(bound == 4, "singular set bound {bound}");
    for q in 5..=8 {
        let got = last.totals(q).map_err(err)?;
        ensure!(got == bound, "E_inf total in degree {q} is {got}, expected {bound}");
    }
    let report = scenario.run(false).map_err(err)?;
    ensure!(report.exit_code() == 0, "scenario report {:?}", report.verdicts);
    Ok(())
}

fn essential_ideal_two_ways() -> Outcome_ {
    for p in [3u32, 5] {
        let g = GroupSpec::new(p, 2).map_err(err)?;
        let cutoff = 2 * p + 4;
        let closure = steenrod_closure(&g, cutoff).map_err(err)?;
        let kernels = ess_by_restriction_kernels(&g, cutoff).map_err(err)?;
        for q in 0..=cutoff {
            ensure!(
                closure.dim(q) == kernels.dim(q),
                "p={p} q={q}: closure {} kernels {}",
                closure.dim(q),
                kernels.dim(q)
            );
        }
        ensure!(closure.agrees_with(&kernels), "p={p}: subspaces differ");
        let degrees = vec![2, 3, 2 * p + 1, 2 * p + 2];
        ensure!(mui_degrees(&g).map_err(err)? == degrees, "p={p}: Mùi degrees");
        ensure!(verify_free_module(&kernels, &degrees, cutoff), "p={p}: not free on {degrees:?}");
    }
    let g = GroupSpec::new(3, 2).map_err(err)?;
    let dims: Vec<usize> = (2..=8).map(|q| steenrod_closure(&g, 8).unwrap().dim(q)).collect();
    ensure!(dims == vec![1, 1, 2, 2, 3, 4, 5], "p=3 dims {dims:?}");
    Ok(())
}

fn quadratic_search() -> Outcome_ {
    let s = search_nonrestricting_quadratic(3).map_err(err)?;
    ensure!(
        (s.candidates, s.subgroups, s.checks) == (64, 7, 448),
        "scanned {} classes against {} subgroups ({} checks)",
        s.candidates,
        s.subgroups,
        s.checks
    );
    ensure!(s.witnesses.is_empty(), "rank 3 witness {}", s.witnesses[0].render());
    let s = search_nonrestricting_quadratic(2).map_err(err)?;
    let found: Vec<String> = s.witnesses.iter().map(|w| w.render()).collect();
    ensure!(found == vec!["x1^2 + x1*x2 + x2^2".to_string()], "rank 2 witnesses {found:?}");
    Ok(())
}

fn pseudofree(p: u32, n: usize) -> ManifoldActionData {
    // CP2 data: χ = 3
    let mut d = ManifoldActionData::new(p, n, 0, 1);
    d.r0 = 1;
    d.homologically_trivial = Some(true);
    d.pseudofree = Some(true);
    d
}

fn rank_bound_table() -> Outcome_ {
    let mut cases = vec![
        (5, 2, Outcome::RuledOut, RuleTag::MuiDegreeUnreachable),
        (7, 2, Outcome::RuledOut, RuleTag::MuiDegreeUnreachable),
        (11, 2, Outcome::RuledOut, RuleTag::MuiDegreeUnreachable),
        (3, 3, Outcome::RuledOut, RuleTag::RankThreeMuiDegrees),
        (2, 3, Outcome::RuledOut, RuleTag::NonrestrictingQuadratic),
        (3, 2, Outcome::Consistent, RuleTag::MuiDegreesReachable),
        (2, 2, Outcome::Consistent, RuleTag::QuadraticWitness),
    ];
    for p in [2, 3, 5, 7, 11] {
        cases.push((p, 1, Outcome::Consistent, RuleTag::CyclicRank));
    }
    for (p, n, outcome, rule) in cases {
        let v = pseudofree_rank_verdict(p, n, &pseudofree(p, n)).map_err(err)?;
        ensure!((v.outcome, v.rule) == (outcome, rule), "p={p} n={n}: got {:?} {:?}", v.outcome, v.rule);
    }
    Ok(())
}

fn verdict(report: &Report, check: Check) -> Result<&borel_core::analyzer::Verdict, String> {
    report
        .verdicts
        .iter()
        .find(|e| e.check == check)
        .map(|e| &e.verdict)
        .ok_or_else(|| format!("{}: no {check:?} verdict", report.scenario))
}

fn example_corpus() -> Outcome_ {
    let totals = [
        ("s1xs3_sum_cp2_z3_fixed_torus_and_point", Outcome::Collapses, "totals 5 = 5"),
        ("s2xs2_pair_cyclic_four_fixed_points", Outcome::DoesNotCollapse, "totals 4 ≠ 8"),
        ("cp2_pair_z3_fixed_sphere", Outcome::DoesNotCollapse, "totals 2 ≠ 6"),
        ("lens_space_times_circle_z3_two_tori", Outcome::Collapses, "totals 8 = 8"),
        ("s1xs3_reflection_z2_two_spheres", Outcome::Collapses, "totals 4 = 4"),
        ("s2xs2_pair_rank2_four_fixed_points", Outcome::DoesNotCollapse, "totals 4 ≠ 8"),
    ];
    for (stem, outcome, summary) in totals {
        let report = load(stem)?.run(false).map_err(err)?;
        let v = verdict(&report, Check::BettiTotals)?;
        ensure!(v.outcome == outcome, "{stem}: {:?}", v.outcome);
        ensure!(v.evidence["summary"] == summary, "{stem}: {}", v.evidence["summary"]);
        ensure!(report.warnings.is_empty(), "{stem}: {:?}", report.warnings);
    }
    let collapse = [
        ("s1xs3_sum_cp2_z3_fixed_torus_and_point", Outcome::Collapses),
        ("cp2_pair_z3_fixed_sphere", Outcome::DoesNotCollapse),
        ("lens_space_times_circle_z3_two_tori", Outcome::Collapses),
        ("s2xs2_pair_rank2_four_fixed_points", Outcome::DoesNotCollapse),
    ];
    for (stem, outcome) in collapse {
        let report = load(stem)?.run(false).map_err(err)?;
        let v = verdict(&report, Check::CollapseRules)?;
        ensure!(v.outcome == outcome, "{stem}: collapse rules gave {:?}", v.outcome);
    }
    let report = load("s1xs3_sum_cp2_z3_fixed_torus_and_point")?.run(false).map_err(err)?;
    let v = verdict(&report, Check::FixedSetConstraints)?;
    ensure!(v.outcome == Outcome::Consistent, "fixed-set constraints {:?}", v.evidence);
    ensure!(v.evidence["required"] == serde_json::json!([2, 3, 1]), "required {}", v.evidence["required"]);
    for (stem, s) in bundled()? {
        let report = s.run(false).map_err(err)?;
        if let Ok(v) = verdict(&report, Check::FixedSetConstraints) {
            ensure!(v.outcome != Outcome::RuledOut, "{stem}: declared fixed set violates the constraints");
        }
    }
    Ok(())
}

fn dimension_grid() -> Outcome_ {
    let p = 5;
    for b1 in 0..=4 {
        for t in 0..=4 {
            for r0 in 0..=4 {
                for r1 in 0..=4 {
                    let mut d = ManifoldActionData::new(p, 1, b1, r0 + (p as usize - 1) * r1);
                    d.t = t;
                    d.r0 = r0;
                    d.r1 = r1;
                    let f = lemma_dim_formulas(&d, 0).map_err(err)?;
                    ensure!(f.h5 + f.h6 == f.h5_mod_p, "{b1} {t} {r0} {r1}: {f:?}");
                    let b = deduce_b_zero(&d).map_err(err)?;
                    ensure!(b == 0, "{b1} {t} {r0} {r1}: b = {b}");
                    let h = H2Decomposition { r0, r1, r2: 0, t };
                    let diff = h.dim(4).map_err(err)? as i64 - h.dim(3).map_err(err)? as i64;
                    ensure!(diff == r0 as i64 - r1 as i64, "{b1} {t} {r0} {r1}: Herbrand difference {diff}");
                }
            }
        }
    }
    Ok(())
}

/// d_r ∘ d_r = 0 on every basis class whose second image is in range.
fn square_zero(page: &SSPage) -> Result<usize, String> {
    let Some(d) = page.differential() else { return Ok(0) };
    let mut checked = 0;
    let r = d.page;
    let ctx = page.context();
    for (&(k, l), m) in &d.maps {
        if k + 2 * r > page.valid_through() || l + 2 < 2 * r {
            continue;
        }
        for img in &m.images {
            let y = borel_core::spectral::SsElement { k: k + r, l: l + 1 - r, coords: img.clone() };
            let dy = page.differential_value(&y).map_err(err)?;
            let zero = ctx.zero(dy.k, dy.l);
            ensure!(page.equal_mod_boundaries(&dy, &zero).map_err(err)?, "d_{r} d_{r} ≠ 0 from ({k}, {l})");
            checked += 1;
        }
    }
    Ok(checked)
}

fn engine_properties() -> Outcome_ {
    let mut runs = 0;
    let mut composites = 0;
    for (stem, s) in bundled()? {
        if s.fiber.is_none() || s.manifold.homologically_trivial != Some(true) {
            continue;
        }
        let pages = s.pages().map_err(|e| format!("{stem}: {e}"))?;
        for pg in &pages {
            composites += square_zero(pg).map_err(|e| format!("{stem}: {e}"))?;
        }
        for pair in pages.windows(2) {
            let top = pair[1].valid_through();
            for k in 0..=top {
                for l in 0..=4 {
                    let (a, b) = (pair[0].dim(k, l).map_err(err)?, pair[1].dim(k, l).map_err(err)?);
                    ensure!(b <= a, "{stem}: E_{}^{{{k},{l}}} grew from {a} to {b}", pair[1].page());
                }
            }
        }
        // all-zero differentials: E_inf = E_2, totals Σ_l b_l dim H^{q-l}(G)
        let fiber = s.fiber.as_ref().unwrap().build(s.manifold.p).map_err(err)?;
        let g = GroupSpec::new(s.manifold.p, s.manifold.group_rank).map_err(err)?;
        let ring = cohomology_ring(&g);
        let betti = fiber.betti();
        let cutoff = s.cutoff();
        let e2 = build_e2(&g, fiber.clone(), cutoff, BottomRowPolicy::Unconstrained).map_err(err)?;
        let last = run_schedule_pages(e2, &[]).map_err(err)?.pop().unwrap();
        for q in 0..=cutoff {
            let closed: usize = (0..=q.min(4)).map(|l| betti[l as usize] * ring.dim(q - l)).sum();
            let got = last.totals(q).map_err(err)?;
            ensure!(got == closed, "{stem}: zero differentials give total {got} in degree {q}, expected {closed}");
            if g.rank() == 1 && q >= 4 {
                ensure!(got == fiber.total_dim(), "{stem}: degree {q} total {got} ≠ {}", fiber.total_dim());
            }
        }
        runs += 1;
    }
    ensure!(runs >= 4, "only {runs} scenarios carry a spectral sequence");
    ensure!(composites > 0, "no composite d_r d_r was in range");
    Ok(())
}

fn random_element(pres: &Arc<AlgebraPresentation>, q: u32, coeffs: &[u32]) -> AlgebraElement {
    let basis = DegreeBasis::new(pres.degree_basis(q));
    AlgebraElement::from_vector(pres, q, &basis, &coeffs[..basis.len()])
}

fn algebra_properties() -> Outcome_ {
    const CASES: u32 = 1000;
    for p in [2u32, 3, 5] {
        let g = GroupSpec::new(p, 2).map_err(err)?;
        let pres = cohomology_ring(&g);
        for q in 0..=30 {
            ensure!(pres.dim(q) == q as usize + 1, "p={p}: dim H^{q} = {}", pres.dim(q));
        }
        let steenrod = SteenrodAction::standard(&pres).map_err(err)?;
        let config = Config { cases: CASES, failure_persistence: None, ..Config::default() };
        let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
        let coeffs = || prop::collection::vec(0..p, 8);
        let strategy = (0u32..=6, 0u32..=6, 0u32..=6, coeffs(), coeffs(), coeffs(), prop::collection::vec(0..p, 4));
        let counter = std::cell::Cell::new(0u32);
        runner
            .run(&strategy, |(i, j, k, ca, cb, cc, m)| {
                counter.set(counter.get() + 1);
                let a = random_element(&pres, i, &ca);
                let b = random_element(&pres, j, &cb);
                let c = random_element(&pres, k, &cc);
                let ab = a.multiply(&b).unwrap();
                let ba = b.multiply(&a).unwrap();
                let sign = if p != 2 && i % 2 == 1 && j % 2 == 1 { ba.neg() } else { ba };
                prop_assert_eq!(&ab, &sign, "commutativity");
                let left = ab.multiply(&c).unwrap();
                let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
                prop_assert_eq!(&left, &right, "associativity");
                let bb =
                    steenrod.apply(SteenrodOp::Bockstein, &steenrod.apply(SteenrodOp::Bockstein, &a).unwrap()).unwrap();
                prop_assert!(bb.is_zero(), "β² ≠ 0 on {}", a.render());
                let matrix = vec![vec![m[0], m[1]], vec![m[2], m[3]]];
                let f = restriction_along(&pres, &pres, &matrix).unwrap();
                let lhs = f.apply(&ab).unwrap();
                let rhs = f.apply(&a).unwrap().multiply(&f.apply(&b).unwrap()).unwrap();
                prop_assert_eq!(lhs, rhs, "multiplicativity");
                Ok(())
            })
            .map_err(|e| format!("p={p}: {e}"))?;
        ensure!(counter.get() >= CASES, "p={p}: only {} cases ran", counter.get());
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("pseudofree CP2 under Z/3 x Z/3: Leibniz d3, E4 dimensions, E_inf totals", cp2_pseudofree_rank_two),
        (
            "essential ideal: Steenrod closure equals restriction kernels, free on Mùi generators",
            essential_ideal_two_ways,
        ),
        ("mod-2 quadratic classes: none in rank 3, x1^2 + x1*x2 + x2^2 in rank 2", quadratic_search),
        ("pseudofree rank verdict table with sub-argument tags", rank_bound_table),
        ("bundled example corpus: Betti totals, collapse rules, fixed-set constraints", example_corpus),
        ("dimension formulas, b = 0 and Herbrand difference on the (b1, t, r0, r1) grid", dimension_grid),
        ("engine: d∘d = 0, page decay, zero-differential totals", engine_properties),
        ("algebra: commutativity, associativity, β² = 0, multiplicativity, rank-2 dims", algebra_properties),
    ];
    let mut failed = 0;
    for (label, check) in criteria {
        let start = std::time::Instant::now();
        match check() {
            Ok(()) => println!("PASS  {label}  ({:.2?})", start.elapsed()),
            Err(e) => {
                failed += 1;
                println!("FAIL  {label}: {e}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
