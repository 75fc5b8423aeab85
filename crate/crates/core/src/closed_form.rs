//! Closed-form geodesic-distance sums for subdivision and star-fractal
//! growth trees, evaluated in exact rational arithmetic.
//!
//! Every function that returns an integer goes through
//! [`to_natural`](crate::exact::to_natural), so a fractional or negative
//! intermediate surfaces as [`Error::FormulaNonIntegral`] instead of being
//! rounded away. The `*_approx` functions are the asymptotic forms and are
//! returned as plain floats.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{format_sig, pow_q, q, ratio_of, to_natural};
use crate::growth::{predict_counts, GrowthOp, MAX_M};
use crate::serde_util;
use crate::tree::Tree;

/// The two numbers the closed forms need from a seed: `|V|` and `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeedSummary {
    pub n_seed: u64,
    #[serde(serialize_with = "serde_util::display")]
    pub s_seed: BigUint,
}

impl SeedSummary {
    pub fn new(n_seed: u64, s_seed: impl Into<BigUint>) -> Result<Self> {
        let s_seed = s_seed.into();
        if n_seed < 2 {
            return Err(Error::ParameterOutOfRange(format!(
                "seed needs at least 2 vertices, got {n_seed}"
            )));
        }
        if s_seed < BigUint::from(n_seed - 1) {
            return Err(Error::ParameterOutOfRange(format!(
                "geodesic sum {s_seed} is below n - 1 = {}",
                n_seed - 1
            )));
        }
        if n_seed == 2 && !s_seed.is_one() {
            return Err(Error::ParameterOutOfRange(
                "a 2-vertex tree has geodesic sum 1".into(),
            ));
        }
        Ok(SeedSummary { n_seed, s_seed })
    }

    /// Single edge: `(2, 1)`.
    pub fn edge() -> Self {
        SeedSummary {
            n_seed: 2,
            s_seed: BigUint::one(),
        }
    }

    /// Summarizes a tree with the BFS enumeration.
    pub fn from_tree(tree: &Tree) -> Result<Self> {
        SeedSummary::new(tree.n() as u64, tree.geodesic_sum())
    }

    fn n(&self) -> BigRational {
        q(self.n_seed)
    }

    fn s(&self) -> BigRational {
        q(BigInt::from(self.s_seed.clone()))
    }

    fn n_f64(&self) -> f64 {
        self.n_seed as f64
    }

    fn s_f64(&self) -> f64 {
        self.s_seed.to_f64().unwrap_or(f64::INFINITY)
    }
}

fn check_m(m: u32) -> Result<()> {
    if m > MAX_M {
        return Err(Error::ParameterOutOfRange(format!(
            "m = {m} exceeds the maximum {MAX_M}"
        )));
    }
    Ok(())
}

/// One subdivision step: `S' = 8 S - 2 |V| (|V| - 1)`.
pub fn subdivision_s1(seed: &SeedSummary) -> Result<BigUint> {
    let n = seed.n();
    let v = q(8) * seed.s() - q(2) * &n * (&n - q(1));
    to_natural(&v, "subdivision_s1")
}

/// `t` subdivision steps:
/// `8^t S - (2^{3t} - 2^t)(|V|-1)/3 + (2^{2t-1} - 2^{3t-1})(|V|-1)^2`.
pub fn subdivision_st(seed: &SeedSummary, t: u32) -> Result<BigUint> {
    let t = t as i64;
    let nm1 = seed.n() - q(1);
    let v = pow_q(8, t) * seed.s() - (pow_q(2, 3 * t) - pow_q(2, t)) * &nm1 / q(3)
        + (pow_q(2, 2 * t - 1) - pow_q(2, 3 * t - 1)) * &nm1 * &nm1;
    to_natural(&v, "subdivision_st")
}

/// Asymptotic average geodesic distance after `t` subdivision steps:
/// `2^{t+1} S/(|V|-1)^2 - 2^{t+1}/(3(|V|-1)) + 1 - 2^t`.
pub fn subdivision_avg_approx(seed: &SeedSummary, t: u32) -> f64 {
    star_fractal_avg_approx(seed, 0, t)
}

/// Path on `2^t + 1` vertices: `(2^{t-1} + 1) 2^t (2^t + 1) / 3`.
pub fn path_st(t: u32) -> Result<BigUint> {
    let t = t as i64;
    let v = (pow_q(2, t - 1) + q(1)) * pow_q(2, t) * (pow_q(2, t) + q(1)) / q(3);
    to_natural(&v, "path_st")
}

/// Largest `t` accepted by [`path_st_enumeration`].
pub const PATH_ENUMERATION_MAX_T: u32 = 26;

/// The same path sum as a literal double sum,
/// `sum_{i=1}^{2^t} (2^t + 1 - i)(2^t + 2 - i) / 2`.
pub fn path_st_enumeration(t: u32) -> Result<BigUint> {
    if t > PATH_ENUMERATION_MAX_T {
        return Err(Error::ParameterOutOfRange(format!(
            "enumeration limited to t <= {PATH_ENUMERATION_MAX_T}, got {t}"
        )));
    }
    let len: u128 = 1 << t;
    let mut total: u128 = 0;
    for i in 1..=len {
        let prod = (len + 1 - i) * (len + 2 - i);
        debug_assert_eq!(prod % 2, 0);
        total += prod / 2;
    }
    Ok(BigUint::from(total))
}

/// `(2^t + 3) / 3`.
pub fn path_avg_approx(t: u32) -> f64 {
    (2f64.powi(t as i32) + 3.0) / 3.0
}

/// One star-fractal step: `S* = 2(m+2)^2 S - (m+2)(|V|-1)(m+|V|)`.
pub fn star_fractal_s1(seed: &SeedSummary, m: u32) -> Result<BigUint> {
    check_m(m)?;
    let (n, mq) = (seed.n(), q(m));
    let k = &mq + q(2);
    let v = q(2) * &k * &k * seed.s() - &k * (&n - q(1)) * (&mq + &n);
    to_natural(&v, "star_fractal_s1")
}

/// One star-fractal step split by vertex-pair class.
///
/// With `X` the old vertices, `C` the inserted centers and `L` the inserted
/// leaves, the classes are: `c1` X-X, `c2` C-C, `c3` X-C, `c4` L-L within
/// one star, `c5` L-L across stars, `c6` X-L, `c7` C-L.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseBreakdown {
    #[serde(serialize_with = "serde_util::display_slice")]
    pub cases: [BigUint; 7],
    #[serde(serialize_with = "serde_util::display")]
    pub total: BigUint,
}

pub fn star_fractal_s1_cases(seed: &SeedSummary, m: u32) -> Result<CaseBreakdown> {
    check_m(m)?;
    let n = BigInt::from(seed.n_seed);
    let s = BigInt::from(seed.s_seed.clone());
    let mm = BigInt::from(m);
    let one = BigInt::one();
    let pairs = &n * (&n - &one);

    let c1 = &s * 2;
    let c2 = &c1 - &pairs;
    let c3 = &c2 * 2 + &pairs;
    let c4 = (&n - &one) * &mm * (&mm - &one);
    let mut cross = BigInt::zero();
    for i in 1..seed.n_seed.saturating_sub(1) {
        cross += BigInt::from(seed.n_seed - 1 - i);
    }
    let c5 = &mm * &mm * &c2 + &mm * &mm * 2 * cross;
    let c6 = &mm * &c3 + &mm * &pairs;
    let c7 = &mm * 2 * &c2 + &mm * (&n - &one) * (&n - &one);

    let mut cases: [BigUint; 7] = Default::default();
    for (slot, (v, name)) in cases.iter_mut().zip([
        (c1, "case 1"),
        (c2, "case 2"),
        (c3, "case 3"),
        (c4, "case 4"),
        (c5, "case 5"),
        (c6, "case 6"),
        (c7, "case 7"),
    ]) {
        *slot = to_natural(&BigRational::from_integer(v), name)?;
    }
    let total = cases.iter().sum();
    Ok(CaseBreakdown { cases, total })
}

/// `t` star-fractal steps:
/// `2^t k^{2t} S - (2^t - 1) k^{2t-1} (|V|-1)^2
///  - (m+1)(|V|-1)/2 * (2^{t+1} k^{2t} - 2 k^t) / (2k - 1)` with `k = m + 2`.
///
/// The middle term is what iterating [`star_fractal_s1`] produces; see
/// [`star_fractal_st_as_printed`] for the commonly quoted variant that only
/// agrees on single-edge seeds.
pub fn star_fractal_st(seed: &SeedSummary, m: u32, t: u32) -> Result<BigUint> {
    check_m(m)?;
    let nm1 = seed.n() - q(1);
    let middle = -(nm1.clone() * &nm1);
    let v = star_fractal_st_with_middle(seed, m, t, middle);
    to_natural(&v, "star_fractal_st")
}

/// The multi-step star-fractal sum with middle factor `|V|^2 - 2|V| - 1`.
///
/// Equal to [`star_fractal_st`] when `|V| = 2`. For larger seeds it exceeds
/// the enumerated sum by `(2^t - 1) k^{2t-1} 2|V|(|V| - 2)`.
pub fn star_fractal_st_as_printed(seed: &SeedSummary, m: u32, t: u32) -> Result<BigUint> {
    check_m(m)?;
    let n = seed.n();
    let middle = &n * &n - q(2) * &n - q(1);
    let v = star_fractal_st_with_middle(seed, m, t, middle);
    to_natural(&v, "star_fractal_st_as_printed")
}

fn star_fractal_st_with_middle(
    seed: &SeedSummary,
    m: u32,
    t: u32,
    middle: BigRational,
) -> BigRational {
    let (t, m) = (t as i64, m as i64);
    let k = m + 2;
    let nm1 = seed.n() - q(1);
    pow_q(2, t) * pow_q(k, 2 * t) * seed.s() + (pow_q(2, t) - q(1)) * pow_q(k, 2 * t - 1) * middle
        - q(m + 1) * &nm1 / q(2) * (pow_q(2, t + 1) * pow_q(k, 2 * t) - q(2) * pow_q(k, t))
            / q(2 * k - 1)
}

/// `2^{t+1} S/(|V|-1)^2 - (m+1) 2^{t+1} / ((2m+3)(|V|-1)) + 1 - 2^t`.
pub fn star_fractal_avg_approx(seed: &SeedSummary, m: u32, t: u32) -> f64 {
    let (n, s, m) = (seed.n_f64(), seed.s_f64(), m as f64);
    let p = 2f64.powi(t as i32 + 1);
    p * s / ((n - 1.0) * (n - 1.0)) - (m + 1.0) * p / ((2.0 * m + 3.0) * (n - 1.0)) + 1.0
        - 2f64.powi(t as i32)
}

/// Star-fractal tree grown from a single edge, `N(t, m)`:
/// `((m+1)^2 2^t + 2m+3)/(2m+3) k^{2t-1} + k^t - k^2/(2m+3) k^{t-1}`.
pub fn ntm_st(t: u32, m: u32) -> Result<BigUint> {
    check_m(m)?;
    if t == 0 {
        return Ok(BigUint::one());
    }
    let (t, m) = (t as i64, m as i64);
    let k = m + 2;
    let d = q(2 * m + 3);
    let v = (q((m + 1) * (m + 1)) * pow_q(2, t) + &d) / &d * pow_q(k, 2 * t - 1) + pow_q(k, t)
        - q(k * k) / &d * pow_q(k, t - 1);
    to_natural(&v, "ntm_st")
}

/// `N(t, m)` from its self-similar decomposition into `m + 2` copies of
/// `N(t-1, m)` glued at a hub:
///
/// `S(t) = (m+2) S(t-1) + (m+1)(m+2)/2 * 2 (|V_{t-1}| - 1) Θ_{t-1}`,
/// where `Θ_{t-1} = k^{t-1} + (m+1) k^{t-2} (2^{t-1} - 1)` is the distance
/// sum from an end vertex of the original edge in `N(t-1, m)`.
pub fn ntm_st_selfsimilar(t: u32, m: u32) -> Result<BigUint> {
    check_m(m)?;
    let m = m as i64;
    let k = m + 2;
    let mut s = q(1);
    for step in 1..=t as i64 {
        let prev_order = pow_q(k, step - 1) + q(1);
        let theta =
            pow_q(k, step - 1) + q(m + 1) * pow_q(k, step - 2) * (pow_q(2, step - 1) - q(1));
        let omega_pair = q(2) * (prev_order - q(1)) * theta;
        let omega = q((m + 1) * (m + 2)) / q(2) * omega_pair;
        s = q(k) * s + omega;
    }
    to_natural(&s, "ntm_st_selfsimilar")
}

/// T-graph: `3^t + (2^{t+2} + 5)/5 * 3^{2t-1} - 3^{t+1}/5`.
pub fn tgraph_st(t: u32) -> Result<BigUint> {
    let t = t as i64;
    let v = pow_q(3, t) + (pow_q(2, t + 2) + q(5)) / q(5) * pow_q(3, 2 * t - 1)
        - pow_q(3, t + 1) / q(5);
    to_natural(&v, "tgraph_st")
}

/// `2^t`.
pub fn tgraph_avg_approx(t: u32) -> f64 {
    2f64.powi(t as i32)
}

/// `2^{t+1} (m+1)^2 / ((m+2)(2m+3))`.
pub fn ntm_avg_approx(t: u32, m: u32) -> f64 {
    let m = m as f64;
    2f64.powi(t as i32 + 1) * (m + 1.0) * (m + 1.0) / ((m + 2.0) * (2.0 * m + 3.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingExponent {
    pub gamma: f64,
    pub description: &'static str,
}

/// Exponent `γ` in `<S_t> ~ |V_t|^γ`: 1 for subdivision, `ln 2 / ln(m+2)`
/// for star-fractal growth.
pub fn scaling_exponents(op: GrowthOp) -> ScalingExponent {
    match op {
        GrowthOp::Subdivision => ScalingExponent {
            gamma: 1.0,
            description: "subdivision: average distance grows linearly in order",
        },
        GrowthOp::StarFractal(m) => ScalingExponent {
            gamma: std::f64::consts::LN_2 / ((m + 2) as f64).ln(),
            description: "star-fractal: gamma = ln 2 / ln(m + 2)",
        },
    }
}

/// Closed-form `S_t` for any seed and operation.
pub fn closed_form_sum(seed: &SeedSummary, op: GrowthOp, t: u32) -> Result<BigUint> {
    match op {
        GrowthOp::Subdivision => subdivision_st(seed, t),
        GrowthOp::StarFractal(m) => star_fractal_st(seed, m, t),
    }
}

/// Asymptotic average for the operation, as quoted alongside the exact sum.
pub fn avg_paper_approx(seed: &SeedSummary, op: GrowthOp, t: u32) -> f64 {
    match op {
        GrowthOp::Subdivision => subdivision_avg_approx(seed, t),
        GrowthOp::StarFractal(m) => star_fractal_avg_approx(seed, m, t),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesicReport {
    #[serde(rename = "s_exact", serialize_with = "serde_util::display")]
    pub s_t: BigUint,
    #[serde(serialize_with = "serde_util::display")]
    pub avg_exact: BigRational,
    /// `avg_exact` to 12 significant digits.
    pub avg_exact_decimal: String,
    pub avg_paper_approx: f64,
    #[serde(serialize_with = "serde_util::display")]
    pub n_t: BigUint,
    #[serde(serialize_with = "serde_util::display")]
    pub e_t: BigUint,
}

pub fn geodesic_report(seed: &SeedSummary, op: GrowthOp, t: u32) -> Result<GeodesicReport> {
    let s_t = closed_form_sum(seed, op, t)?;
    let (n_t, e_t) = predict_counts(seed.n_seed, seed.n_seed - 1, op, t)?;
    let pairs = &n_t * (&n_t - BigUint::one());
    let avg_exact = ratio_of(&(&s_t * 2u32), &pairs);
    Ok(GeodesicReport {
        avg_exact_decimal: format_sig(&avg_exact, 12),
        avg_paper_approx: avg_paper_approx(seed, op, t),
        s_t,
        avg_exact,
        n_t,
        e_t,
    })
}
