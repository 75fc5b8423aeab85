//! Parameter sweeps written out as CSV rows.

use std::time::Instant;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::closed_form::{avg_paper_approx, geodesic_report, SeedSummary};
use crate::error::Result;
use crate::exact::format_sig;
use crate::growth::{grow_with_limit, GrowthOp, DEFAULT_MAX_VERTICES};
use crate::mfpt::{mfpt_closed, theorem_approx};
use crate::oracles::{monte_carlo_mfpt, WalkConfig};
use crate::serde_util;
use crate::tree::Tree;

/// Significant digits of the decimal columns.
pub const SIG_DIGITS: usize = 12;

/// One CSV row. Columns that were not computed hold `NA`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub op: &'static str,
    pub m: u32,
    pub t: u32,
    #[serde(serialize_with = "serde_util::display")]
    pub n_t: BigUint,
    #[serde(serialize_with = "serde_util::display")]
    pub e_t: BigUint,
    #[serde(serialize_with = "serde_util::display")]
    pub s_exact: BigUint,
    pub avg_exact: String,
    pub avg_approx: f64,
    #[serde(serialize_with = "serde_util::display_or_na")]
    pub avg_oracle: Option<String>,
    pub mfpt_exact: String,
    pub mfpt_theorem: f64,
    #[serde(serialize_with = "serde_util::display_or_na")]
    pub mfpt_monte_carlo: Option<f64>,
    #[serde(serialize_with = "serde_util::display_or_na")]
    pub mfpt_monte_carlo_stderr: Option<f64>,
    #[serde(serialize_with = "serde_util::display_or_na")]
    pub elapsed_closed_ms: Option<f64>,
    #[serde(serialize_with = "serde_util::display_or_na")]
    pub elapsed_oracle_ms: Option<f64>,
    #[serde(serialize_with = "serde_util::display_or_na")]
    pub elapsed_monte_carlo_ms: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepPlan {
    pub seed: Tree,
    pub ops: Vec<GrowthOp>,
    pub ts: Vec<u32>,
    /// BFS average is filled in when `n_t` is at most this.
    pub oracle_max_n: u64,
    /// Monte Carlo MFPT is filled in when `n_t` is at most this.
    pub monte_carlo_max_n: u64,
    pub walk: WalkConfig,
    pub pair_budget: u64,
    /// Wall-clock columns; off by default so reruns are byte-identical.
    pub timing: bool,
}

impl SweepPlan {
    /// Average geodesic distance for `m = 0..=4`, `t = 1..=t_max`.
    pub fn fig3(seed: Tree, t_max: u32) -> Self {
        SweepPlan {
            seed,
            ops: (0..=4).map(GrowthOp::StarFractal).collect(),
            ts: (1..=t_max).collect(),
            oracle_max_n: 10_000,
            monte_carlo_max_n: 0,
            walk: WalkConfig::default(),
            pair_budget: 0,
            timing: false,
        }
    }

    /// MFPT against order for `m = 1..=3`, `t = 1..=t_max`.
    pub fn fig6(seed: Tree, t_max: u32, walk: WalkConfig, pair_budget: u64) -> Self {
        SweepPlan {
            seed,
            ops: (1..=3).map(GrowthOp::StarFractal).collect(),
            ts: (1..=t_max).collect(),
            oracle_max_n: 0,
            monte_carlo_max_n: 1_000,
            walk,
            pair_budget,
            timing: false,
        }
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn sweep_row(plan: &SweepPlan, seed: &SeedSummary, op: GrowthOp, t: u32) -> Result<SweepRow> {
    let clock = Instant::now();
    let report = geodesic_report(seed, op, t)?;
    let mfpt = mfpt_closed(seed, op, t)?;
    let elapsed_closed = ms(clock);

    let n = report.n_t.to_u64().unwrap_or(u64::MAX);
    let want_oracle = n <= plan.oracle_max_n;
    let want_walk = n <= plan.monte_carlo_max_n && plan.pair_budget > 0;
    let grown = if want_oracle || want_walk {
        Some(grow_with_limit(&plan.seed, op, t, DEFAULT_MAX_VERTICES)?)
    } else {
        None
    };

    let (mut avg_oracle, mut elapsed_oracle) = (None, None);
    if want_oracle {
        let clock = Instant::now();
        let avg = grown.as_ref().expect("grown").average_geodesic()?;
        avg_oracle = Some(format_sig(&avg, SIG_DIGITS));
        elapsed_oracle = Some(ms(clock));
    }
    let (mut mc, mut mc_err, mut elapsed_mc) = (None, None, None);
    if want_walk {
        let clock = Instant::now();
        let est = monte_carlo_mfpt(grown.as_ref().expect("grown"), &plan.walk, plan.pair_budget)?;
        mc = Some(est.mean_steps);
        mc_err = Some(est.stderr);
        elapsed_mc = Some(ms(clock));
    }

    let timing = |x: Option<f64>| if plan.timing { x } else { None };
    Ok(SweepRow {
        op: op.name(),
        m: op.m(),
        t,
        avg_exact: format_sig(&report.avg_exact, SIG_DIGITS),
        avg_approx: avg_paper_approx(seed, op, t),
        avg_oracle,
        mfpt_exact: format_sig(&mfpt, SIG_DIGITS),
        mfpt_theorem: theorem_approx(seed, op, t),
        mfpt_monte_carlo: mc,
        mfpt_monte_carlo_stderr: mc_err,
        elapsed_closed_ms: timing(Some(elapsed_closed)),
        elapsed_oracle_ms: timing(elapsed_oracle),
        elapsed_monte_carlo_ms: timing(elapsed_mc),
        n_t: report.n_t,
        e_t: report.e_t,
        s_exact: report.s_t,
    })
}

/// Rows ordered by operation, then `t`.
pub fn run_sweep(plan: &SweepPlan) -> Result<Vec<SweepRow>> {
    let seed = SeedSummary::from_tree(&plan.seed)?;
    let mut rows = Vec::with_capacity(plan.ops.len() * plan.ts.len());
    for &op in &plan.ops {
        op.check()?;
        for &t in &plan.ts {
            rows.push(sweep_row(plan, &seed, op, t)?);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::path_st;
    use crate::tree::{build_seed, SeedKind};

    fn edge() -> Tree {
        build_seed(&SeedKind::SingleEdge).unwrap()
    }

    #[test]
    fn fig3_shape() {
        let rows = run_sweep(&SweepPlan::fig3(edge(), 5)).unwrap();
        assert_eq!(rows.len(), 25);
        for r in &rows {
            let oracle = r.avg_oracle.as_ref().expect("all n_t below 10^4 at t <= 5");
            assert_eq!(oracle, &r.avg_exact);
            assert!(r.mfpt_monte_carlo.is_none() && r.elapsed_closed_ms.is_none());
        }
    }

    #[test]
    fn subdivision_matches_path_formula() {
        let plan = SweepPlan {
            ops: vec![GrowthOp::Subdivision],
            ts: (0..=10).collect(),
            oracle_max_n: 0,
            ..SweepPlan::fig3(edge(), 0)
        };
        let rows = run_sweep(&plan).unwrap();
        for r in rows {
            assert_eq!(r.s_exact, path_st(r.t).unwrap());
            assert_eq!(r.op, "subdivision");
        }
    }

    #[test]
    fn fig6_monte_carlo_limited_by_order() {
        let walk = WalkConfig {
            trials: 20,
            max_steps: 1_000_000,
            rng_seed: 3,
        };
        let rows = run_sweep(&SweepPlan::fig6(edge(), 3, walk, 5)).unwrap();
        assert_eq!(rows.len(), 9);
        for r in rows {
            assert!(r.mfpt_monte_carlo.is_some());
            assert!(r.avg_oracle.is_none());
        }
    }
}
