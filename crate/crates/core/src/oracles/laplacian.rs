use nalgebra::DMatrix;

use super::check_index;
use crate::error::{Error, Result};
use crate::tree::Tree;

/// Largest tree accepted by the dense floating-point route.
pub const DENSE_FLOAT_LIMIT: usize = 2000;

/// Holds `L* = (L - J/n)^{-1} + J/n` for repeated first-passage queries,
/// where `L = Z - A` and `J` is the all-ones matrix.
#[derive(Debug, Clone)]
pub struct PseudoinverseOracle {
    pinv: DMatrix<f64>,
    degree: Vec<f64>,
}

impl PseudoinverseOracle {
    pub fn new(tree: &Tree) -> Result<Self> {
        Self::with_limit(tree, DENSE_FLOAT_LIMIT)
    }

    pub fn with_limit(tree: &Tree, limit: usize) -> Result<Self> {
        let n = tree.n();
        if n < 2 {
            return Err(Error::DegenerateTree { n });
        }
        if n > limit {
            return Err(Error::SizeLimitExceeded {
                predicted: n.to_string(),
                limit: limit as u64,
            });
        }
        let degree: Vec<f64> = (0..n).map(|v| tree.degree(v) as f64).collect();
        let mut laplacian = DMatrix::<f64>::zeros(n, n);
        for u in 0..n {
            laplacian[(u, u)] = degree[u];
            for &w in tree.neighbors(u) {
                laplacian[(u, w as usize)] = -1.0;
            }
        }
        let j = DMatrix::<f64>::from_element(n, n, 1.0 / n as f64);
        let shifted = &laplacian - &j;
        let inv = shifted.try_inverse().ok_or(Error::SingularMatrix)?;
        Ok(PseudoinverseOracle {
            pinv: inv + j,
            degree,
        })
    }

    pub fn pseudoinverse(&self) -> &DMatrix<f64> {
        &self.pinv
    }

    /// `FPT(u, v) = sum_i (l*_ui - l*_uv - l*_vi + l*_vv) l_ii`.
    pub fn fpt(&self, u: usize, v: usize) -> f64 {
        let p = &self.pinv;
        let (luv, lvv) = (p[(u, v)], p[(v, v)]);
        (0..self.degree.len())
            .map(|i| (p[(u, i)] - luv - p[(v, i)] + lvv) * self.degree[i])
            .sum()
    }
}

pub fn laplacian_pseudoinverse_fpt(tree: &Tree, source: usize, target: usize) -> Result<f64> {
    check_index(tree, source)?;
    check_index(tree, target)?;
    Ok(PseudoinverseOracle::new(tree)?.fpt(source, target))
}
