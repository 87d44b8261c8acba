use std::hint::black_box;
use std::path::PathBuf;

use criterion::{criterion_group, criterion_main, Criterion};

use borel_core::essential::{ess_by_restriction_kernels, search_nonrestricting_quadratic, steenrod_closure};
use borel_core::group::GroupSpec;
use borel_core::scenario::Scenario;

fn scenario(stem: &str) -> Scenario {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../scenarios/{stem}.json"));
    Scenario::load(&path).expect("bundled scenario")
}

fn spectral_sequence(c: &mut Criterion) {
    let cp2 = scenario("cp2_pseudofree_z3z3");
    c.bench_function("pages/cp2_pseudofree_z3z3", |b| b.iter(|| black_box(cp2.pages().unwrap())));
    let lens = scenario("lens_space_times_circle_z3_two_tori");
    c.bench_function("analyze/lens_space_times_circle_z3_two_tori", |b| b.iter(|| black_box(lens.run(false).unwrap())));
}

fn essential_ideal(c: &mut Criterion) {
    for p in [3u32, 5] {
        let g = GroupSpec::new(p, 2).unwrap();
        let cutoff = 2 * p + 4;
        c.bench_function(&format!("ess/closure/p{p}"), |b| b.iter(|| black_box(steenrod_closure(&g, cutoff).unwrap())));
        c.bench_function(&format!("ess/kernels/p{p}"), |b| {
            b.iter(|| black_box(ess_by_restriction_kernels(&g, cutoff).unwrap()))
        });
    }
}

fn quadratic_search(c: &mut Criterion) {
    c.bench_function("search_quadratic/rank3", |b| b.iter(|| black_box(search_nonrestricting_quadratic(3).unwrap())));
}

criterion_group!(benches, spectral_sequence, essential_ideal, quadratic_search);
criterion_main!(benches);
