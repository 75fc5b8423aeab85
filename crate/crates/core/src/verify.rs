//! Self-check suites run by `treegrowth verify`.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::closed_form::{
    closed_form_sum, ntm_st, ntm_st_selfsimilar, path_st, path_st_enumeration, star_fractal_s1,
    star_fractal_s1_cases, star_fractal_st, tgraph_st, SeedSummary,
};
use crate::error::Result;
use crate::exact::{ratio_of, ratio_to_f64};
use crate::growth::{grow, predict_counts, GrowthOp};
use crate::mfpt::mfpt_closed;
use crate::oracles::{class_pair_sums, hitting_times_to, mfpt_exact_solve, PseudoinverseOracle};
use crate::tree::{build_seed, SeedKind, Tree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Corpus {
    /// Four fixed seeds, two random trees, `t <= 2`.
    Small,
    /// Four fixed seeds, five random trees, `t <= 3`.
    Full,
}

impl Corpus {
    fn random_trees(self) -> usize {
        match self {
            Corpus::Small => 2,
            Corpus::Full => 5,
        }
    }

    fn t_max(self) -> u32 {
        match self {
            Corpus::Small => 2,
            Corpus::Full => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub corpus: Corpus,
    pub seed_rng: u64,
    /// Adds one to every closed-form sum before comparing. Negative control.
    pub inject_fault: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checks: u64,
    pub failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        SuiteResult {
            name,
            checks: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifySummary {
    pub suites: Vec<SuiteResult>,
}

impl VerifySummary {
    pub fn failed_suites(&self) -> usize {
        self.suites.iter().filter(|s| !s.passed()).count()
    }

    /// Fixed-width table, one suite per line.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<22} {:>8} {:>8}  status",
            "suite", "checks", "failures"
        );
        for s in &self.suites {
            let status = if s.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{:<22} {:>8} {:>8}  {status}",
                s.name, s.checks, s.failures
            );
            if let Some(f) = &s.first_failure {
                let _ = writeln!(out, "    first failure: {f}");
            }
        }
        out
    }
}

/// Named seed trees: edge, path(3), path(4), star(3) and `count` random
/// labelled trees with 4 to 8 vertices drawn from `seed_rng`.
pub fn corpus_seeds(seed_rng: u64, count: usize) -> Result<Vec<(String, Tree)>> {
    let mut out = vec![
        ("edge".to_string(), build_seed(&SeedKind::SingleEdge)?),
        ("path:3".to_string(), build_seed(&SeedKind::Path(3))?),
        ("path:4".to_string(), build_seed(&SeedKind::Path(4))?),
        ("star:3".to_string(), build_seed(&SeedKind::Star(3))?),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed_rng);
    for _ in 0..count {
        let n = rng.gen_range(4..=8usize);
        let s: u64 = rng.gen();
        out.push((
            format!("random:{n}:{s}"),
            build_seed(&SeedKind::RandomLabeledTree { n, rng_seed: s })?,
        ));
    }
    Ok(out)
}

pub const CORPUS_OPS: [GrowthOp; 5] = [
    GrowthOp::Subdivision,
    GrowthOp::StarFractal(0),
    GrowthOp::StarFractal(1),
    GrowthOp::StarFractal(2),
    GrowthOp::StarFractal(3),
];

/// A seed grown by one operation for `t` steps.
#[derive(Debug, Clone)]
pub struct CorpusTree {
    pub label: String,
    pub seed: SeedSummary,
    pub seed_tree: Tree,
    pub op: GrowthOp,
    pub t: u32,
    pub tree: Tree,
}

impl CorpusTree {
    pub fn describe(&self) -> String {
        format!("{} {} t={}", self.label, self.op, self.t)
    }
}

pub fn grown_corpus(
    seeds: &[(String, Tree)],
    ops: &[GrowthOp],
    t_max: u32,
) -> Result<Vec<CorpusTree>> {
    let mut jobs = Vec::new();
    for (label, tree) in seeds {
        for &op in ops {
            for t in 0..=t_max {
                jobs.push((label, tree, op, t));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(label, seed_tree, op, t)| {
            Ok(CorpusTree {
                label: label.clone(),
                seed: SeedSummary::from_tree(seed_tree)?,
                seed_tree: seed_tree.clone(),
                op,
                t,
                tree: grow(seed_tree, op, t)?,
            })
        })
        .collect()
}

fn closed(c: &CorpusTree, fault: bool) -> Result<BigUint> {
    let s = closed_form_sum(&c.seed, c.op, c.t)?;
    Ok(if fault { s + 1u32 } else { s })
}

fn suite_counts(corpus: &[CorpusTree]) -> Result<SuiteResult> {
    let mut r = SuiteResult::new("count_formulas");
    for c in corpus {
        let (n_t, e_t) = predict_counts(c.seed.n_seed, c.seed.n_seed - 1, c.op, c.t)?;
        let ok = n_t == BigUint::from(c.tree.n()) && e_t == BigUint::from(c.tree.edge_count());
        r.check(ok, || {
            format!(
                "{}: predicted ({n_t}, {e_t}), built ({}, {})",
                c.describe(),
                c.tree.n(),
                c.tree.edge_count()
            )
        });
        r.check(c.tree.validate().is_ok(), || {
            format!("{}: not a valid tree", c.describe())
        });
    }
    Ok(r)
}

fn suite_closed_vs_bfs(corpus: &[CorpusTree], fault: bool) -> Result<SuiteResult> {
    let mut r = SuiteResult::new("closed_form_vs_bfs");
    for c in corpus {
        let (formula, bfs) = (closed(c, fault)?, c.tree.geodesic_sum());
        r.check(formula == bfs, || {
            format!("{}: formula {formula}, BFS {bfs}", c.describe())
        });
    }
    Ok(r)
}

fn suite_cases(seeds: &[(String, Tree)]) -> Result<SuiteResult> {
    let mut r = SuiteResult::new("case_decomposition");
    for (label, tree) in seeds {
        let seed = SeedSummary::from_tree(tree)?;
        for m in 1..=3 {
            let b = star_fractal_s1_cases(&seed, m)?;
            let grown = grow(tree, GrowthOp::StarFractal(m), 1)?;
            let oracle = class_pair_sums(&grown);
            for (i, (formula, enumerated)) in b.cases.iter().zip(&oracle).enumerate() {
                r.check(formula == enumerated, || {
                    format!(
                        "{label} m={m}: c{} formula {formula}, enumeration {enumerated}",
                        i + 1
                    )
                });
            }
            let total: BigUint = b.cases.iter().sum();
            let s1 = star_fractal_s1(&seed, m)?;
            r.check(total == s1 && b.total == s1, || {
                format!("{label} m={m}: cases sum {total}, one-step formula {s1}")
            });
        }
    }
    Ok(r)
}

fn suite_routes(corpus: Corpus) -> Result<SuiteResult> {
    let mut r = SuiteResult::new("route_equivalence");
    let edge = SeedSummary::edge();
    let t_max = match corpus {
        Corpus::Small => 6,
        Corpus::Full => 8,
    };
    for m in 0..=4 {
        for t in 0..=t_max {
            let a = ntm_st(t, m)?;
            let b = ntm_st_selfsimilar(t, m)?;
            let c = star_fractal_st(&edge, m, t)?;
            r.check(a == b && b == c, || {
                format!("m={m} t={t}: N(t,m) {a}, self-similar {b}, general {c}")
            });
        }
    }
    for t in 0..=10 {
        let (a, b) = (tgraph_st(t)?, ntm_st(t, 1)?);
        r.check(a == b, || format!("t={t}: T-graph {a}, N(t,1) {b}"));
    }
    for t in 0..=16 {
        let (a, b) = (path_st(t)?, path_st_enumeration(t)?);
        r.check(a == b, || {
            format!("t={t}: path closed form {a}, enumeration {b}")
        });
    }
    Ok(r)
}

fn suite_mfpt_identity(corpus: &[CorpusTree], fault: bool) -> Result<SuiteResult> {
    let mut r = SuiteResult::new("mfpt_identity");
    let small: Vec<&CorpusTree> = corpus.iter().filter(|c| c.tree.n() <= 400).collect();
    let rows: Vec<Result<(BigRational, BigRational, BigRational)>> = small
        .par_iter()
        .map(|c| {
            let solved = mfpt_exact_solve(&c.tree)?;
            let n = BigUint::from(c.tree.n());
            let identity = ratio_of(&(c.tree.geodesic_sum() * 2u32), &n);
            let closed_mfpt = if fault {
                ratio_of(&(closed(c, true)? * 2u32), &n)
            } else {
                mfpt_closed(&c.seed, c.op, c.t)?
            };
            Ok((solved, identity, closed_mfpt))
        })
        .collect();
    for (c, row) in small.iter().zip(rows) {
        let (solved, identity, closed_mfpt) = row?;
        r.check(solved == identity && identity == closed_mfpt, || {
            format!(
                "{}: solve {solved}, 2S/n {identity}, closed {closed_mfpt}",
                c.describe()
            )
        });
    }
    Ok(r)
}

fn suite_cross_oracle(corpus: &[CorpusTree], seed_rng: u64) -> Result<SuiteResult> {
    let mut r = SuiteResult::new("cross_oracle");
    for (k, c) in corpus.iter().enumerate().filter(|(_, c)| c.tree.n() <= 200) {
        let n = c.tree.n();
        let oracle = PseudoinverseOracle::new(&c.tree)?;
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed_rng ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let mut by_target: Vec<Option<Vec<BigRational>>> = vec![None; n];
        for _ in 0..50 {
            let u = rng.gen_range(0..n);
            let v = (u + rng.gen_range(1..n)) % n;
            let exact = by_target[v]
                .get_or_insert_with(|| hitting_times_to(&c.tree, v).expect("v in range"));
            let exact = ratio_to_f64(&exact[u]);
            let dense = oracle.fpt(u, v);
            r.check((dense - exact).abs() <= 1e-6 * exact, || {
                format!(
                    "{} ({u},{v}): pseudoinverse {dense}, exact {exact}",
                    c.describe()
                )
            });
        }
    }
    Ok(r)
}

fn suite_commute(corpus: &[CorpusTree]) -> Result<SuiteResult> {
    let mut r = SuiteResult::new("commute_identity");
    for c in corpus.iter().filter(|c| c.tree.n() <= 60) {
        let n = c.tree.n();
        let h: Vec<Vec<BigRational>> = (0..n)
            .map(|v| hitting_times_to(&c.tree, v))
            .collect::<Result<_>>()?;
        let scale = BigInt::from(2 * (n - 1));
        for (u, to_u) in h.iter().enumerate() {
            let d = c.tree.bfs_distances(u)?;
            for v in u + 1..n {
                let lhs = &h[v][u] + &to_u[v];
                let rhs = BigRational::from_integer(&scale * d[v]);
                r.check(lhs == rhs, || {
                    format!("{} ({u},{v}): commute {lhs}, 2(n-1)d = {rhs}", c.describe())
                });
            }
        }
    }
    Ok(r)
}

fn suite_mfpt_growth(seeds: &[(String, Tree)]) -> Result<SuiteResult> {
    let mut r = SuiteResult::new("mfpt_monotone");
    for (label, tree) in seeds {
        let seed = SeedSummary::from_tree(tree)?;
        for op in CORPUS_OPS {
            let mut prev = BigRational::from_integer(BigInt::from(0));
            for t in 0..=6 {
                let cur = mfpt_closed(&seed, op, t)?;
                r.check(cur > prev, || {
                    format!("{label} {op}: MFPT not increasing at t={t}")
                });
                prev = cur;
            }
            r.check(prev > BigRational::one(), || {
                format!("{label} {op}: MFPT too small")
            });
        }
    }
    Ok(r)
}

pub fn run_verify(opts: &VerifyOptions) -> Result<VerifySummary> {
    let seeds = corpus_seeds(opts.seed_rng, opts.corpus.random_trees())?;
    let corpus = grown_corpus(&seeds, &CORPUS_OPS, opts.corpus.t_max())?;
    let suites = vec![
        suite_counts(&corpus)?,
        suite_closed_vs_bfs(&corpus, opts.inject_fault)?,
        suite_cases(&seeds)?,
        suite_routes(opts.corpus)?,
        suite_mfpt_identity(&corpus, opts.inject_fault)?,
        suite_cross_oracle(&corpus, opts.seed_rng)?,
        suite_commute(&corpus)?,
        suite_mfpt_growth(&seeds)?,
    ];
    Ok(VerifySummary { suites })
}
