//! Trees grown from an arbitrary seed by repeated first-order subdivision or
//! (1,m)-star-fractal insertion, with exact geodesic-distance sums, mean
//! first-passage times and the brute-force oracles that check them.

pub mod closed_form;
pub mod edgelist;
pub mod error;
pub mod exact;
pub mod growth;
pub mod mfpt;
pub mod oracles;
mod serde_util;
pub mod sweep;
pub mod tree;
pub mod verify;

pub use closed_form::{
    closed_form_sum, geodesic_report, CaseBreakdown, GeodesicReport, ScalingExponent, SeedSummary,
};
pub use error::{Error, Result};
pub use growth::{grow, grow_with_limit, predict_counts, GrowthOp};
pub use mfpt::{mfpt_closed, mfpt_report, Dimensions, MfptReport, PowerFit};
pub use oracles::{FptEstimate, WalkConfig};
pub use sweep::{run_sweep, SweepPlan, SweepRow};
pub use tree::{build_seed, Provenance, SeedKind, Tree, VertexId};
pub use verify::{run_verify, Corpus, SuiteResult, VerifyOptions, VerifySummary};
