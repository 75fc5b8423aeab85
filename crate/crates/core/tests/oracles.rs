use num_bigint::BigInt;
use num_rational::BigRational;

use treegrowth_core::exact::ratio_to_f64;
use treegrowth_core::oracles::{
    commute_time, effective_resistance, hitting_time_exact, hitting_times_dense, hitting_times_to,
    laplacian_pseudoinverse_fpt, mfpt_exact_solve, monte_carlo_fpt, monte_carlo_mfpt, WalkConfig,
};
use treegrowth_core::{build_seed, grow, GrowthOp, SeedKind, Tree};

fn tgraph(t: u32) -> Tree {
    grow(
        &build_seed(&SeedKind::SingleEdge).unwrap(),
        GrowthOp::StarFractal(1),
        t,
    )
    .unwrap()
}

fn r(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

#[test]
fn hand_solved_hitting_times() {
    let p = build_seed(&SeedKind::Path(3)).unwrap();
    assert_eq!(hitting_time_exact(&p, 0, 2).unwrap(), r(4, 1));
    assert_eq!(hitting_time_exact(&p, 1, 0).unwrap(), r(3, 1));
    assert_eq!(mfpt_exact_solve(&p).unwrap(), r(8, 3));
    let s = build_seed(&SeedKind::Star(3)).unwrap();
    assert_eq!(mfpt_exact_solve(&s).unwrap(), r(9, 2));
    assert_eq!(commute_time(&s, 1, 2).unwrap(), r(12, 1));
    assert_eq!(effective_resistance(&s, 1, 2).unwrap(), r(2, 1));
}

#[test]
fn elimination_matches_dense_solve() {
    for t in [
        tgraph(2),
        build_seed(&SeedKind::RandomLabeledTree { n: 15, rng_seed: 8 }).unwrap(),
    ] {
        for target in 0..t.n() {
            assert_eq!(
                hitting_times_to(&t, target).unwrap(),
                hitting_times_dense(&t, target).unwrap()
            );
        }
    }
}

#[test]
fn pseudoinverse_agrees_on_every_pair() {
    let t = tgraph(2);
    for u in 0..t.n() {
        for v in 0..t.n() {
            if u != v {
                let exact = ratio_to_f64(&hitting_time_exact(&t, u, v).unwrap());
                let dense = laplacian_pseudoinverse_fpt(&t, u, v).unwrap();
                assert!((dense - exact).abs() <= 1e-9 * exact);
            }
        }
    }
}

#[test]
fn tgraph3_exhaustive_monte_carlo() {
    let t = tgraph(3);
    assert_eq!(t.n(), 28);
    let cfg = WalkConfig {
        trials: 10_000,
        max_steps: 10_000_000,
        rng_seed: 3,
    };
    let est = monte_carlo_mfpt(&t, &cfg, 756).unwrap();
    let exact = ratio_to_f64(&mfpt_exact_solve(&t).unwrap());
    assert_eq!(est.pairs, 756);
    assert!(!est.biased_low);
    assert!(
        (est.mean_steps - exact).abs() <= 3.0 * est.stderr,
        "{est:?} vs {exact}"
    );
}

#[test]
fn single_pair_monte_carlo() {
    let p = build_seed(&SeedKind::Path(3)).unwrap();
    let est = monte_carlo_fpt(
        &p,
        1,
        0,
        &WalkConfig {
            trials: 100_000,
            max_steps: 1_000_000,
            rng_seed: 7,
        },
    )
    .unwrap();
    assert!((est.mean_steps - 3.0).abs() <= 3.0 * est.stderr);
    assert_eq!(est.completed, 100_000);
}
