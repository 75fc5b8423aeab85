use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use treegrowth_core::oracles::{
    mfpt_exact_solve, monte_carlo_mfpt, PseudoinverseOracle, WalkConfig,
};
use treegrowth_core::{
    build_seed, closed_form_sum, grow, mfpt_closed, GrowthOp, SeedKind, SeedSummary,
};

fn geodesic_sum(c: &mut Criterion) {
    let edge = build_seed(&SeedKind::SingleEdge).unwrap();
    let summary = SeedSummary::edge();
    let mut g = c.benchmark_group("geodesic_sum");
    for t in [2u32, 4, 6] {
        let op = GrowthOp::StarFractal(1);
        let tree = grow(&edge, op, t).unwrap();
        g.bench_with_input(BenchmarkId::new("closed_form", t), &t, |b, &t| {
            b.iter(|| closed_form_sum(black_box(&summary), op, t).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("bfs", t), &tree, |b, tree| {
            b.iter(|| tree.geodesic_sum())
        });
    }
    g.finish();
}

fn mfpt(c: &mut Criterion) {
    let edge = build_seed(&SeedKind::SingleEdge).unwrap();
    let op = GrowthOp::StarFractal(1);
    let tree = grow(&edge, op, 3).unwrap();
    let summary = SeedSummary::edge();
    let mut g = c.benchmark_group("mfpt_tgraph3");
    g.sample_size(20);
    g.bench_function("closed_form", |b| {
        b.iter(|| mfpt_closed(black_box(&summary), op, 3).unwrap())
    });
    g.bench_function("exact_solve", |b| {
        b.iter(|| mfpt_exact_solve(black_box(&tree)).unwrap())
    });
    g.bench_function("pseudoinverse", |b| {
        b.iter(|| {
            let o = PseudoinverseOracle::new(black_box(&tree)).unwrap();
            o.fpt(0, tree.n() - 1)
        })
    });
    let cfg = WalkConfig {
        trials: 100,
        max_steps: 1_000_000,
        rng_seed: 1,
    };
    g.bench_function("monte_carlo_100x50", |b| {
        b.iter(|| monte_carlo_mfpt(black_box(&tree), &cfg, 50).unwrap())
    });
    g.finish();
}

criterion_group!(benches, geodesic_sum, mfpt);
criterion_main!(benches);
