//! Ground truth for random-walk quantities, independent of the closed forms:
//! exact hitting times from the absorbing linear system, the dense
//! Laplacian-pseudoinverse route, and Monte Carlo walks.

mod cases;
mod hitting;
mod laplacian;
mod walk;

pub use cases::class_pair_sums;
pub use hitting::{
    commute_time, effective_resistance, hitting_time_exact, hitting_times_dense, hitting_times_to,
    mfpt_exact_solve, DENSE_EXACT_LIMIT,
};
pub use laplacian::{laplacian_pseudoinverse_fpt, PseudoinverseOracle, DENSE_FLOAT_LIMIT};
pub use walk::{monte_carlo_fpt, monte_carlo_mfpt, walk_seed, FptEstimate, WalkConfig};

use crate::error::{Error, Result};
use crate::tree::Tree;

fn check_index(tree: &Tree, index: usize) -> Result<()> {
    if index >= tree.n() {
        return Err(Error::IndexOutOfRange { index, n: tree.n() });
    }
    Ok(())
}
