//! Acceptance criteria 1-12. Prints one PASS/FAIL line per criterion (with
//! indented detail lines) and exits nonzero if any criterion fails.

use std::cell::RefCell;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use treegrowth_core::closed_form::{
    closed_form_sum, ntm_st, ntm_st_selfsimilar, path_st, path_st_enumeration,
    star_fractal_avg_approx, star_fractal_s1, star_fractal_s1_cases, star_fractal_st,
    subdivision_s1, tgraph_st,
};
use treegrowth_core::exact::ratio_to_f64;
use treegrowth_core::mfpt::{fit_exponent, lambda_theory, mfpt_closed, theorem_approx};
use treegrowth_core::oracles::{
    class_pair_sums, hitting_times_to, mfpt_exact_solve, monte_carlo_mfpt, PseudoinverseOracle,
    WalkConfig,
};
use treegrowth_core::verify::corpus_seeds;
use treegrowth_core::{build_seed, grow, predict_counts, GrowthOp, SeedKind, SeedSummary, Tree};

const CORPUS_RNG: u64 = 2024;

thread_local! {
    // (checks, mismatches) for criterion 11, fed by every grown tree.
    static COUNTS: RefCell<(u64, Vec<String>)> = const { RefCell::new((0, Vec::new())) };
}

/// Grows `seed` and records whether the built counts match the predicted ones.
fn grow_counted(seed: &Tree, op: GrowthOp, t: u32) -> Tree {
    let tree = grow(seed, op, t).expect("grow");
    let (n_t, e_t) =
        predict_counts(seed.n() as u64, seed.edge_count() as u64, op, t).expect("counts");
    let ok = n_t == BigUint::from(tree.n()) && e_t == BigUint::from(tree.edge_count());
    COUNTS.with(|c| {
        let mut c = c.borrow_mut();
        c.0 += 1;
        if !ok {
            c.1.push(format!(
                "{op} t={t} n_seed={}: predicted ({n_t}, {e_t}), built ({}, {})",
                seed.n(),
                tree.n(),
                tree.edge_count()
            ));
        }
    });
    tree
}

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Outcome {
            pass,
            summary: summary.into(),
            details: Vec::new(),
        }
    }

    fn with(mut self, details: Vec<String>) -> Self {
        self.details = details;
        self
    }
}

/// Collects failures but keeps only the first few messages.
#[derive(Default)]
struct Tally {
    checks: u64,
    failures: u64,
    shown: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.shown.len() < 5 {
                self.shown.push(what());
            }
        }
    }

    fn outcome(self, label: &str) -> Outcome {
        Outcome::new(
            self.failures == 0,
            format!(
                "{label}: {} checks, {} failures",
                self.checks, self.failures
            ),
        )
        .with(self.shown)
    }
}

struct Grown {
    label: String,
    seed: SeedSummary,
    op: GrowthOp,
    t: u32,
    tree: Tree,
}

fn corpus() -> Vec<(String, Tree)> {
    corpus_seeds(CORPUS_RNG, 5).expect("corpus")
}

fn grown_corpus(ops: &[GrowthOp], t_max: u32) -> Vec<Grown> {
    let mut out = Vec::new();
    for (label, tree) in corpus() {
        let seed = SeedSummary::from_tree(&tree).unwrap();
        for &op in ops {
            for t in 0..=t_max {
                out.push(Grown {
                    label: label.clone(),
                    seed: seed.clone(),
                    op,
                    t,
                    tree: grow_counted(&tree, op, t),
                });
            }
        }
    }
    out
}

const OPS: [GrowthOp; 5] = [
    GrowthOp::Subdivision,
    GrowthOp::StarFractal(0),
    GrowthOp::StarFractal(1),
    GrowthOp::StarFractal(2),
    GrowthOp::StarFractal(3),
];

fn frac(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn c1_formula_vs_bfs() -> Outcome {
    let mut tally = Tally::default();
    let mut largest = 0;
    for g in grown_corpus(&OPS, 3) {
        largest = largest.max(g.tree.n());
        let formula = closed_form_sum(&g.seed, g.op, g.t).unwrap();
        let bfs = g.tree.geodesic_sum();
        tally.check(formula == bfs, || {
            format!(
                "{} {} t={}: formula {formula}, BFS {bfs}",
                g.label, g.op, g.t
            )
        });
    }
    let mut o = tally.outcome("closed-form S equals all-pairs BFS");
    o.summary += &format!(" (largest n = {largest})");
    o
}

fn c2_case_decomposition() -> Outcome {
    let mut tally = Tally::default();
    for (label, tree) in corpus() {
        let seed = SeedSummary::from_tree(&tree).unwrap();
        for m in 1..=3 {
            let grown = grow_counted(&tree, GrowthOp::StarFractal(m), 1);
            let b = star_fractal_s1_cases(&seed, m).unwrap();
            let oracle = class_pair_sums(&grown);
            for (i, (formula, enumerated)) in b.cases.iter().zip(&oracle).enumerate() {
                tally.check(formula == enumerated, || {
                    format!(
                        "{label} m={m}: c{} formula {formula}, enumeration {enumerated}",
                        i + 1
                    )
                });
            }
            let sum: BigUint = b.cases.iter().sum();
            let s1 = star_fractal_s1(&seed, m).unwrap();
            tally.check(sum == s1, || {
                format!("{label} m={m}: c1+..+c7 = {sum}, one-step total {s1}")
            });
        }
    }
    tally.outcome("c1..c7 equal per-class enumeration and sum to the one-step total")
}

fn c3_route_equivalence() -> Outcome {
    let mut tally = Tally::default();
    let edge = SeedSummary::edge();
    for m in 0..=4 {
        for t in 0..=8 {
            let (a, b, c) = (
                ntm_st(t, m).unwrap(),
                ntm_st_selfsimilar(t, m).unwrap(),
                star_fractal_st(&edge, m, t).unwrap(),
            );
            tally.check(a == b && b == c, || format!("m={m} t={t}: {a} / {b} / {c}"));
        }
    }
    for t in 0..=10 {
        let (a, b) = (tgraph_st(t).unwrap(), ntm_st(t, 1).unwrap());
        tally.check(a == b, || format!("t={t}: T-graph {a}, N(t,1) {b}"));
    }
    for t in 0..=16 {
        let (a, b) = (path_st(t).unwrap(), path_st_enumeration(t).unwrap());
        tally.check(a == b, || format!("t={t}: path {a}, enumeration {b}"));
    }
    tally.outcome("N(t,m) three routes, T-graph, path closed form vs enumeration")
}

fn c4_spot_values() -> Outcome {
    let got = [
        ("tgraph_st(1)", tgraph_st(1).unwrap(), 9u32),
        ("tgraph_st(2)", tgraph_st(2).unwrap(), 117),
        ("path_st(2)", path_st(2).unwrap(), 20),
        (
            "subdivision_s1(n=2,S=1)",
            subdivision_s1(&SeedSummary::edge()).unwrap(),
            4,
        ),
    ];
    let details: Vec<String> = got
        .iter()
        .map(|(name, v, want)| format!("{name} = {v} (expected {want})"))
        .collect();
    let pass = got.iter().all(|(_, v, want)| *v == BigUint::from(*want));
    Outcome::new(pass, "spot values").with(details)
}

fn c5_mfpt_identity() -> Outcome {
    let mut tally = Tally::default();
    for g in grown_corpus(&OPS, 3)
        .into_iter()
        .filter(|g| g.tree.n() <= 400)
    {
        let solved = mfpt_exact_solve(&g.tree).unwrap();
        let n = BigInt::from(g.tree.n());
        let identity = BigRational::new(BigInt::from(g.tree.geodesic_sum()) * 2, n);
        tally.check(solved == identity, || {
            format!(
                "{} {} t={}: solve {solved}, 2S/n {identity}",
                g.label, g.op, g.t
            )
        });
        let closed = mfpt_closed(&g.seed, g.op, g.t).unwrap();
        tally.check(closed == identity, || {
            format!(
                "{} {} t={}: closed {closed}, 2S/n {identity}",
                g.label, g.op, g.t
            )
        });
    }
    let path3 = mfpt_exact_solve(&build_seed(&SeedKind::Path(3)).unwrap()).unwrap();
    let star3 = mfpt_exact_solve(&build_seed(&SeedKind::Star(3)).unwrap()).unwrap();
    tally.check(path3 == frac(8, 3), || {
        format!("mfpt(path(3)) = {path3}, expected 8/3")
    });
    tally.check(star3 == frac(9, 2), || {
        format!("mfpt(star(3)) = {star3}, expected 9/2")
    });
    tally.outcome("exact MFPT solve equals 2S/n (n <= 400), path(3) = 8/3, star(3) = 9/2")
}

fn c6_cross_oracle() -> Outcome {
    let mut tally = Tally::default();
    let mut worst = 0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for g in grown_corpus(&OPS, 3)
        .into_iter()
        .filter(|g| g.tree.n() <= 200)
    {
        let n = g.tree.n();
        let oracle = PseudoinverseOracle::new(&g.tree).unwrap();
        for _ in 0..50 {
            let u = rng.gen_range(0..n);
            let v = (u + rng.gen_range(1..n)) % n;
            let exact = ratio_to_f64(&hitting_times_to(&g.tree, v).unwrap()[u]);
            let dense = oracle.fpt(u, v);
            let rel = (dense - exact).abs() / exact;
            worst = worst.max(rel);
            tally.check(rel <= 1e-6, || {
                format!(
                    "{} {} t={} ({u},{v}): {dense} vs {exact}",
                    g.label, g.op, g.t
                )
            });
        }
    }
    let mut o =
        tally.outcome("pseudoinverse FPT vs exact hitting times, 50 pairs per tree (n <= 200)");
    o.summary += &format!(", worst relative error {worst:.2e}");
    o
}

fn c7_commute() -> Outcome {
    let mut tally = Tally::default();
    for g in grown_corpus(&OPS, 3)
        .into_iter()
        .filter(|g| g.tree.n() <= 60)
    {
        let n = g.tree.n();
        let h: Vec<Vec<BigRational>> = (0..n)
            .map(|v| hitting_times_to(&g.tree, v).unwrap())
            .collect();
        for (u, to_u) in h.iter().enumerate() {
            let d = g.tree.bfs_distances(u).unwrap();
            for v in u + 1..n {
                let lhs = &h[v][u] + &to_u[v];
                let rhs = BigRational::from_integer(BigInt::from(2 * (n - 1)) * d[v]);
                tally.check(lhs == rhs, || {
                    format!("{} {} t={} ({u},{v}): {lhs} vs {rhs}", g.label, g.op, g.t)
                });
            }
        }
    }
    tally.outcome("hitting(u,v) + hitting(v,u) = 2(n-1) d(u,v), all pairs (n <= 60)")
}

fn c8_fig6() -> Outcome {
    let edge_tree = build_seed(&SeedKind::SingleEdge).unwrap();
    let edge = SeedSummary::edge();
    let mut pass = true;
    let mut details = Vec::new();
    for m in 1..=3 {
        let op = GrowthOp::StarFractal(m);
        let pts: Vec<(f64, f64)> = (2..=7)
            .map(|t| {
                let (n_t, _) = predict_counts(2, 1, op, t).unwrap();
                (
                    n_t.to_f64().unwrap(),
                    ratio_to_f64(&mfpt_closed(&edge, op, t).unwrap()),
                )
            })
            .collect();
        let fit = fit_exponent(&pts).unwrap();
        let theory = lambda_theory(op);
        let ok = (fit.slope / theory - 1.0).abs() <= 0.05;
        pass &= ok;
        details.push(format!(
            "m={m}: slope {:.4} vs 1 + ln2/ln{} = {theory:.4} (r^2 {:.6}) {}",
            fit.slope,
            m + 2,
            fit.r_squared,
            if ok { "ok" } else { "OUT OF 5%" }
        ));
    }
    let cfg = WalkConfig {
        trials: 10_000,
        max_steps: 10_000_000,
        rng_seed: 8,
    };
    for m in 1..=3 {
        for t in 1..=3 {
            let tree = grow_counted(&edge_tree, GrowthOp::StarFractal(m), t);
            let exact = ratio_to_f64(&mfpt_exact_solve(&tree).unwrap());
            let est = monte_carlo_mfpt(&tree, &cfg, 30).unwrap();
            let z = (est.mean_steps - exact) / est.stderr.max(f64::MIN_POSITIVE);
            let ok = z.abs() <= 3.0 && !est.biased_low;
            pass &= ok;
            details.push(format!(
                "m={m} t={t} n={}: Monte Carlo {:.4} +/- {:.4} vs exact {exact:.4} (z = {z:+.2}) {}",
                tree.n(),
                est.mean_steps,
                est.stderr,
                if ok { "ok" } else { "OUTSIDE 3 stderr" }
            ));
        }
    }
    Outcome::new(
        pass,
        "MFPT log-log slope within 5% of 1 + gamma; Monte Carlo within 3 stderr",
    )
    .with(details)
}

/// Largest `t` with `n_t <= 10^6` from the single-edge seed.
fn t_max(m: u32) -> u32 {
    let op = GrowthOp::StarFractal(m);
    (0..)
        .take_while(|&t| predict_counts(2, 1, op, t).unwrap().0 <= BigUint::from(1_000_000u32))
        .last()
        .unwrap()
}

fn c9_fig3() -> Outcome {
    let edge_tree = build_seed(&SeedKind::SingleEdge).unwrap();
    let edge = SeedSummary::edge();
    let mut pass = true;
    let mut details = Vec::new();
    for m in 0..=4 {
        let op = GrowthOp::StarFractal(m);
        let mut exact_ok = true;
        let mut compared = 0;
        for t in 0.. {
            if predict_counts(2, 1, op, t).unwrap().0 > BigUint::from(10_000u32) {
                break;
            }
            let tree = grow_counted(&edge_tree, op, t);
            let closed = treegrowth_core::geodesic_report(&edge, op, t)
                .unwrap()
                .avg_exact;
            exact_ok &= closed == tree.average_geodesic().unwrap();
            compared += 1;
        }
        let tm = t_max(m);
        let errs: Vec<f64> = (3..=tm)
            .map(|t| {
                let exact = ratio_to_f64(
                    &treegrowth_core::geodesic_report(&edge, op, t)
                        .unwrap()
                        .avg_exact,
                );
                (star_fractal_avg_approx(&edge, m, t) - exact).abs() / exact
            })
            .collect();
        let non_increasing = errs.windows(2).all(|w| w[1] <= w[0]);
        let final_err = *errs.last().unwrap();
        let ok = exact_ok && non_increasing && final_err <= 0.05;
        pass &= ok;
        details.push(format!(
            "m={m}: exact = BFS for t <= {} ({}); approximation error t=3: {:.2}%, t=T_max={tm}: {:.2}%, non-increasing: {non_increasing} {}",
            compared - 1,
            if exact_ok { "equal" } else { "MISMATCH" },
            errs[0] * 100.0,
            final_err * 100.0,
            if ok { "ok" } else { "FAIL" }
        ));
    }
    Outcome::new(
        pass,
        "exact average = BFS; approximate average error non-increasing and <= 5% at T_max (n_t <= 10^6)",
    )
    .with(details)
}

fn c10_scaling() -> Outcome {
    let edge = SeedSummary::edge();
    let mut pass = true;
    let mut details = Vec::new();
    let ops = [
        GrowthOp::Subdivision,
        GrowthOp::StarFractal(1),
        GrowthOp::StarFractal(2),
        GrowthOp::StarFractal(3),
    ];
    for op in ops {
        let pts: Vec<(f64, f64)> = (3..=8)
            .map(|t| {
                let r = treegrowth_core::geodesic_report(&edge, op, t).unwrap();
                (r.n_t.to_f64().unwrap(), ratio_to_f64(&r.avg_exact))
            })
            .collect();
        let fit = fit_exponent(&pts).unwrap();
        let gamma = treegrowth_core::closed_form::scaling_exponents(op).gamma;
        let ok = (fit.slope / gamma - 1.0).abs() <= 0.05;
        pass &= ok;
        details.push(format!(
            "{op}: fitted gamma {:.4} vs {gamma:.4} {}",
            fit.slope,
            if ok { "ok" } else { "OUT OF 5%" }
        ));
    }
    Outcome::new(pass, "fitted gamma over t in [3,8] within 5% of theory").with(details)
}

fn c11_counts() -> Outcome {
    COUNTS.with(|c| {
        let c = c.borrow();
        Outcome::new(
            c.1.is_empty(),
            format!(
                "predicted (n_t, e_t) equal built counts: {} trees, {} mismatches",
                c.0,
                c.1.len()
            ),
        )
        .with(c.1.iter().take(5).cloned().collect())
    })
}

fn c12_theorem_ratio() -> Outcome {
    let edge = SeedSummary::edge();
    let mut pass = true;
    let mut details = Vec::new();
    for op in [
        GrowthOp::Subdivision,
        GrowthOp::StarFractal(1),
        GrowthOp::StarFractal(2),
        GrowthOp::StarFractal(3),
    ] {
        let ratios: Vec<(u32, f64)> = (5..=10)
            .map(|t| {
                (
                    t,
                    theorem_approx(&edge, op, t)
                        / ratio_to_f64(&mfpt_closed(&edge, op, t).unwrap()),
                )
            })
            .collect();
        let mut worst = 0f64;
        for w in ratios.windows(2).filter(|w| w[0].0 >= 6) {
            worst = worst.max((w[1].1 / w[0].1 - 1.0).abs());
        }
        let ok = worst < 0.01;
        pass &= ok;
        let shown: Vec<String> = ratios
            .iter()
            .map(|(t, r)| format!("t={t}: {r:.5}"))
            .collect();
        details.push(format!(
            "{op}: {}; max successive change for t >= 6: {:.2}% {}",
            shown.join(", "),
            worst * 100.0,
            if ok { "ok" } else { "NOT CONVERGED" }
        ));
    }
    Outcome::new(
        pass,
        "theorem approximation / exact MFPT converges (successive change < 1% for t >= 6)",
    )
    .with(details)
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 12] = [
        (1, c1_formula_vs_bfs),
        (2, c2_case_decomposition),
        (3, c3_route_equivalence),
        (4, c4_spot_values),
        (5, c5_mfpt_identity),
        (6, c6_cross_oracle),
        (7, c7_commute),
        (8, c8_fig6),
        (9, c9_fig3),
        (10, c10_scaling),
        (12, c12_theorem_ratio),
        // Runs last: tallies the trees grown by every other criterion.
        (11, c11_counts),
    ];
    let mut results = Vec::new();
    for (id, run) in criteria {
        let clock = Instant::now();
        let o = run();
        let secs = clock.elapsed().as_secs_f64();
        println!(
            "criterion {id:>2}: {} - {} [{secs:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.summary
        );
        for d in &o.details {
            println!("    {d}");
        }
        results.push((id, o.pass));
    }
    results.sort();
    let failed: Vec<String> = results
        .iter()
        .filter(|r| !r.1)
        .map(|r| r.0.to_string())
        .collect();
    println!(
        "acceptance: {} of {} criteria passed{}",
        results.len() - failed.len(),
        results.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!("; failed: {}", failed.join(", "))
        }
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
