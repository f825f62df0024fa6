use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use eecrit_core::alpha::{exists_alpha_bruteforce, solve_x0, AlphaGrid};
use eecrit_core::criteria::verdict_with_model;
use eecrit_core::numeric::{int, rat};
use eecrit_core::region::boundary::build_region;
use eecrit_core::region::compare::{evaluate_grid, grid_point};
use eecrit_core::{final_verdict, ExponentPoint, RegionModel, Scenario};

fn verdicts(c: &mut Criterion) {
    let s = Scenario::classical_slice(int(1));
    let model = RegionModel::new(&s).unwrap();
    let pt = ExponentPoint::ratio(2, 5, 1, 7);
    c.bench_function("final_verdict/classical_d1", |b| {
        b.iter(|| final_verdict(&pt, &s).unwrap())
    });
    c.bench_function("verdict_with_model/classical_d1", |b| {
        b.iter(|| verdict_with_model(&model, &pt).unwrap())
    });
    let frac = Scenario::slice(rat(9, 10), int(2)).unwrap();
    let fm = RegionModel::new(&frac).unwrap();
    c.bench_function("membership_grid/fractional_101", |b| {
        b.iter(|| evaluate_grid(&|p: &ExponentPoint| fm.contains(p), 101))
    });
}

fn optimizer(c: &mut Criterion) {
    c.bench_function("solve_x0/fractional", |b| {
        b.iter(|| solve_x0(&int(2), &rat(9, 10)).unwrap())
    });
    let s = Scenario::classical_slice(rat(1, 2));
    let grid = AlphaGrid::extended();
    let pt = grid_point(70, 20, 101);
    c.bench_function("exists_alpha_bruteforce/extended_grid", |b| {
        b.iter(|| exists_alpha_bruteforce(&pt, &s, &grid).unwrap())
    });
}

fn regions(c: &mut Criterion) {
    for (name, s) in [
        ("classical_d0", Scenario::classical_slice(int(0))),
        (
            "fractional_high_d",
            Scenario::slice(rat(13, 20), rat(5, 2)).unwrap(),
        ),
        (
            "general_d1/2",
            Scenario::general(int(1), rat(1, 2)).unwrap(),
        ),
    ] {
        c.bench_function(&format!("build_region/{name}"), |b| {
            b.iter_batched(
                || s.clone(),
                |s| build_region(&s).unwrap(),
                BatchSize::SmallInput,
            )
        });
    }
}

criterion_group!(benches, verdicts, optimizer, regions);
criterion_main!(benches);
