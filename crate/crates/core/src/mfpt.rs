//! Mean first-passage time on grown trees.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::closed_form::{closed_form_sum, scaling_exponents, SeedSummary};
use crate::error::{Error, Result};
use crate::exact::{pow_q, q, ratio_of, ratio_to_f64};
use crate::growth::{predict_counts, GrowthOp};
use crate::serde_util;

/// `2 S_t / n_t`: on a tree the commute identity turns the ordered-pair
/// average of hitting times into a multiple of the geodesic sum.
pub fn mfpt_closed(seed: &SeedSummary, op: GrowthOp, t: u32) -> Result<BigRational> {
    let s_t = closed_form_sum(seed, op, t)?;
    let (n_t, _) = predict_counts(seed.n_seed, seed.n_seed - 1, op, t)?;
    Ok(ratio_of(&(s_t * 2u32), &n_t))
}

fn seed_terms(seed: &SeedSummary) -> (BigRational, BigRational) {
    let e = q(seed.n_seed - 1);
    let s = q(num_bigint::BigInt::from(seed.s_seed.clone()));
    (s / &e, e)
}

/// `2^{2t+2} S/(n-1) - 2^{2t+2}/3 + (2 - 2^{2t+1})(n-1)`, evaluated
/// exactly and rounded once.
pub fn theorem5_approx(seed: &SeedSummary, t: u32) -> f64 {
    let (s_over_e, e) = seed_terms(seed);
    let t = t as i64;
    let lead = pow_q(2, 2 * t + 2);
    let v = &lead * s_over_e - &lead / q(3) + (q(2) - pow_q(2, 2 * t + 1)) * e;
    ratio_to_f64(&v)
}

/// `4(4+2m)^t S/(n-1) - 4(4+2m)^t (m+1)/(2m+3) + (2 - 2^{t+1})(2+m)^t (n-1)`.
///
/// At `m = 0` this differs from [`theorem5_approx`] by `(2^{t+1} - 2)(n-1)`.
pub fn theorem6_approx(seed: &SeedSummary, m: u32, t: u32) -> f64 {
    let (s_over_e, e) = seed_terms(seed);
    let (m, t) = (m as i64, t as i64);
    let lead = pow_q(4 + 2 * m, t) * q(4);
    let v = &lead * s_over_e - &lead * q(m + 1) / q(2 * m + 3)
        + (q(2) - pow_q(2, t + 1)) * pow_q(2 + m, t) * e;
    ratio_to_f64(&v)
}

pub fn theorem_approx(seed: &SeedSummary, op: GrowthOp, t: u32) -> f64 {
    match op {
        GrowthOp::Subdivision => theorem5_approx(seed, t),
        GrowthOp::StarFractal(m) => theorem6_approx(seed, m, t),
    }
}

/// `λ = 1 + γ`.
pub fn lambda_theory(op: GrowthOp) -> f64 {
    match op {
        GrowthOp::Subdivision => 2.0,
        GrowthOp::StarFractal(m) => {
            let k = (m + 2) as f64;
            let lambda = (2.0 * k).ln() / k.ln();
            debug_assert!((lambda - (1.0 + scaling_exponents(op).gamma)).abs() < 1e-12);
            lambda
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dimensions {
    pub d_f: f64,
    pub d_w: f64,
    pub d_spectral: f64,
}

/// Fractal, walk and spectral dimensions of the star-fractal family.
pub fn dimensions(m: u32) -> Dimensions {
    let k = (m + 2) as f64;
    let d_f = k.ln() / std::f64::consts::LN_2;
    let d_w = (2.0 * k).ln() / std::f64::consts::LN_2;
    let d_spectral = 2.0 * d_f / d_w;
    assert!((d_w - (1.0 + d_f)).abs() < 1e-12);
    assert!(d_spectral < 2.0);
    Dimensions {
        d_f,
        d_w,
        d_spectral,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Least-squares line through `(ln n, ln value)`.
pub fn fit_exponent(points: &[(f64, f64)]) -> Result<PowerFit> {
    if points.len() < 3 {
        return Err(Error::InsufficientPoints(points.len()));
    }
    if let Some(&(n, value)) = points.iter().find(|(n, v)| !(*n > 0.0 && *v > 0.0)) {
        return Err(Error::NonPositiveValue { n, value });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::ParameterOutOfRange("all n values coincide".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Ok(PowerFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MfptReport {
    #[serde(serialize_with = "serde_util::display")]
    pub exact: BigRational,
    pub exact_float: f64,
    pub theorem_approx: f64,
    pub ratio: f64,
    pub lambda_theory: f64,
    pub gamma_theory: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_f: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_w: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_spectral: Option<f64>,
}

pub fn mfpt_report(seed: &SeedSummary, op: GrowthOp, t: u32) -> Result<MfptReport> {
    let exact = mfpt_closed(seed, op, t)?;
    let exact_float = ratio_to_f64(&exact);
    let approx = theorem_approx(seed, op, t);
    let dims = match op {
        GrowthOp::Subdivision => None,
        GrowthOp::StarFractal(m) => Some(dimensions(m)),
    };
    Ok(MfptReport {
        exact,
        exact_float,
        theorem_approx: approx,
        ratio: approx / exact_float,
        lambda_theory: lambda_theory(op),
        gamma_theory: scaling_exponents(op).gamma,
        d_f: dims.map(|d| d.d_f),
        d_w: dims.map(|d| d.d_w),
        d_spectral: dims.map(|d| d.d_spectral),
    })
}

/// `(n_t, exact MFPT)` for each `t` in `ts`, computed in parallel and
/// returned in input order.
pub fn mfpt_series(
    seed: &SeedSummary,
    op: GrowthOp,
    ts: &[u32],
) -> Result<Vec<(BigUint, BigRational)>> {
    ts.par_iter()
        .map(|&t| {
            let (n_t, _) = predict_counts(seed.n_seed, seed.n_seed - 1, op, t)?;
            Ok((n_t, mfpt_closed(seed, op, t)?))
        })
        .collect()
}

/// `(n_t, exact average geodesic distance)` for each `t` in `ts`.
pub fn avg_series(
    seed: &SeedSummary,
    op: GrowthOp,
    ts: &[u32],
) -> Result<Vec<(BigUint, BigRational)>> {
    ts.par_iter()
        .map(|&t| {
            let r = crate::closed_form::geodesic_report(seed, op, t)?;
            Ok((r.n_t, r.avg_exact))
        })
        .collect()
}

/// Fits `value ~ n^slope` to an exact series, converting to floats last.
pub fn fit_series(series: &[(BigUint, BigRational)]) -> Result<PowerFit> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .map(|(n, v)| (n.to_f64().unwrap_or(f64::INFINITY), ratio_to_f64(v)))
        .collect();
    fit_exponent(&pts)
}
