use std::collections::BTreeMap;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::check_index;
use crate::error::{Error, Result};
use crate::tree::Tree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WalkConfig {
    /// Walks per ordered (source, target) pair.
    pub trials: u64,
    /// Walks still short of the target after this many steps are truncated.
    pub max_steps: u64,
    pub rng_seed: u64,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            trials: 1000,
            max_steps: 1_000_000,
            rng_seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FptEstimate {
    pub mean_steps: f64,
    pub stderr: f64,
    pub completed: u64,
    pub truncated: u64,
    /// Ordered pairs walked (1 for a single source/target query).
    pub pairs: u64,
    /// Set when any walk was truncated; the mean then underestimates.
    pub biased_low: bool,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the ChaCha8 substream used by walk `trial` from `source` to
/// `target`: SplitMix64 folded over the four coordinates.
pub fn walk_seed(rng_seed: u64, source: usize, target: usize, trial: u64) -> u64 {
    let mut h = splitmix64(rng_seed);
    for x in [source as u64, target as u64, trial] {
        h = splitmix64(h ^ x);
    }
    h
}

fn walk_once(
    tree: &Tree,
    source: usize,
    target: usize,
    max_steps: u64,
    rng: &mut ChaCha8Rng,
) -> Option<u64> {
    let mut pos = source;
    let mut steps = 0u64;
    while pos != target {
        if steps == max_steps {
            return None;
        }
        let nb = tree.neighbors(pos);
        pos = nb[rng.gen_range(0..nb.len())] as usize;
        steps += 1;
    }
    Some(steps)
}

#[derive(Debug, Default, Clone, Copy)]
struct PairStats {
    sum: u128,
    sum_sq: u128,
    completed: u64,
    truncated: u64,
}

impl PairStats {
    fn merge(&mut self, other: &PairStats) {
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self.completed += other.completed;
        self.truncated += other.truncated;
    }

    fn mean(&self) -> f64 {
        self.sum as f64 / self.completed as f64
    }

    /// Unbiased sample variance of single-walk lengths.
    fn variance(&self) -> f64 {
        let c = self.completed as u128;
        if c < 2 {
            return 0.0;
        }
        (c * self.sum_sq - self.sum * self.sum) as f64 / (c * (c - 1)) as f64
    }
}

fn run_pair(
    tree: &Tree,
    source: usize,
    target: usize,
    cfg: &WalkConfig,
    first_trial: u64,
    parallel: bool,
) -> PairStats {
    let one = |k: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(walk_seed(cfg.rng_seed, source, target, k));
        walk_once(tree, source, target, cfg.max_steps, &mut rng)
    };
    let results: Vec<Option<u64>> = if parallel {
        (first_trial..first_trial + cfg.trials)
            .into_par_iter()
            .map(one)
            .collect()
    } else {
        (first_trial..first_trial + cfg.trials).map(one).collect()
    };
    let mut st = PairStats::default();
    for r in results {
        match r {
            Some(s) => {
                st.sum += s as u128;
                st.sum_sq += (s as u128) * (s as u128);
                st.completed += 1;
            }
            None => st.truncated += 1,
        }
    }
    st
}

fn check_cfg(cfg: &WalkConfig) -> Result<()> {
    if cfg.trials == 0 || cfg.max_steps == 0 {
        return Err(Error::ParameterOutOfRange(
            "trials and max_steps must be positive".into(),
        ));
    }
    Ok(())
}

/// Monte Carlo first-passage time from `source` to `target`.
pub fn monte_carlo_fpt(
    tree: &Tree,
    source: usize,
    target: usize,
    cfg: &WalkConfig,
) -> Result<FptEstimate> {
    check_index(tree, source)?;
    check_index(tree, target)?;
    check_cfg(cfg)?;
    if source == target {
        return Err(Error::ParameterOutOfRange(
            "source and target must differ".into(),
        ));
    }
    let st = run_pair(tree, source, target, cfg, 0, true);
    let (mean, stderr) = if st.completed == 0 {
        (f64::NAN, f64::NAN)
    } else {
        (st.mean(), (st.variance() / st.completed as f64).sqrt())
    };
    Ok(FptEstimate {
        mean_steps: mean,
        stderr,
        completed: st.completed,
        truncated: st.truncated,
        pairs: 1,
        biased_low: st.truncated > 0,
    })
}

/// Monte Carlo MFPT over `pair_budget` ordered pairs, each walked
/// `cfg.trials` times.
///
/// Pairs are drawn uniformly without replacement; once every ordered pair
/// has been taken, further pairs are drawn with replacement and their walks
/// pooled into that pair, so each distinct pair weighs equally. The standard
/// error combines between-pair and within-pair variance (two-stage
/// sampling), so exhaustive enumeration only carries walk noise.
pub fn monte_carlo_mfpt(tree: &Tree, cfg: &WalkConfig, pair_budget: u64) -> Result<FptEstimate> {
    let n = tree.n();
    if n < 2 {
        return Err(Error::DegenerateTree { n });
    }
    check_cfg(cfg)?;
    if pair_budget == 0 {
        return Err(Error::ParameterOutOfRange(
            "pair budget must be positive".into(),
        ));
    }
    let population = (n as u64) * (n as u64 - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(cfg.rng_seed ^ 0x5041_4952_5321));
    let mut picks: Vec<u64> = if pair_budget >= population {
        (0..population).collect()
    } else {
        index::sample(&mut rng, population as usize, pair_budget as usize)
            .into_iter()
            .map(|i| i as u64)
            .collect()
    };
    while (picks.len() as u64) < pair_budget {
        picks.push(rng.gen_range(0..population));
    }

    let decode = |idx: u64| {
        let u = (idx / (n as u64 - 1)) as usize;
        let r = (idx % (n as u64 - 1)) as usize;
        (u, if r < u { r } else { r + 1 })
    };
    // A pair drawn again after exhaustion gets fresh walks (trial indices
    // continue past the first batch) pooled into the same pair mean.
    let mut draws: BTreeMap<u64, u64> = BTreeMap::new();
    let jobs: Vec<(u64, u64)> = picks
        .iter()
        .map(|&idx| {
            let rep = draws.entry(idx).or_insert(0);
            *rep += 1;
            (idx, *rep - 1)
        })
        .collect();
    let batches: Vec<(u64, PairStats)> = jobs
        .par_iter()
        .map(|&(idx, rep)| {
            let (u, v) = decode(idx);
            (idx, run_pair(tree, u, v, cfg, rep * cfg.trials, false))
        })
        .collect();
    let mut pooled: BTreeMap<u64, PairStats> = BTreeMap::new();
    for (idx, st) in batches {
        pooled.entry(idx).or_default().merge(&st);
    }
    let stats: Vec<PairStats> = pooled.into_values().collect();

    let completed: u64 = stats.iter().map(|s| s.completed).sum();
    let truncated: u64 = stats.iter().map(|s| s.truncated).sum();
    let means: Vec<f64> = stats
        .iter()
        .filter(|s| s.completed > 0)
        .map(PairStats::mean)
        .collect();
    let p = means.len() as f64;
    let (mean, stderr) = if means.is_empty() {
        (f64::NAN, f64::NAN)
    } else {
        let mean = means.iter().sum::<f64>() / p;
        let between = if means.len() > 1 {
            means.iter().map(|m| (m - mean) * (m - mean)).sum::<f64>() / (p - 1.0)
        } else {
            0.0
        };
        let within = stats
            .iter()
            .filter(|s| s.completed > 0)
            .map(|s| s.variance() / s.completed as f64)
            .sum::<f64>()
            / p;
        let f = p / population as f64;
        let var = (1.0 - f) * between / p + f * within / p;
        (mean, var.max(0.0).sqrt())
    };
    Ok(FptEstimate {
        mean_steps: mean,
        stderr,
        completed,
        truncated,
        pairs: picks.len() as u64,
        biased_low: truncated > 0,
    })
}
