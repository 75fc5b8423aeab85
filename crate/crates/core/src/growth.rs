//! First-order subdivision and (1,m)-star-fractal growth.
//!
//! Each step visits the edges of the current tree in canonical order. For
//! edge number `i` a center `n + i` is appended; star leaves follow after all
//! centers, grouped per center: leaf `j` of edge `i` is `n + |E| + i*m + j`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tree::{Provenance, Tree};

/// Largest accepted star parameter.
pub const MAX_M: u32 = 64;

/// Default cap on the predicted vertex count of a grown tree.
pub const DEFAULT_MAX_VERTICES: u64 = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "m", rename_all = "kebab-case")]
pub enum GrowthOp {
    Subdivision,
    /// Star with `m` pendant leaves inserted into every edge. `m = 0` builds
    /// the same trees as [`GrowthOp::Subdivision`] with different tags.
    StarFractal(u32),
}

impl GrowthOp {
    /// `m`, with subdivision reported as 0.
    pub fn m(self) -> u32 {
        match self {
            GrowthOp::Subdivision => 0,
            GrowthOp::StarFractal(m) => m,
        }
    }

    /// Edge multiplication factor per step: `2 + m`.
    pub fn branching(self) -> u32 {
        self.m() + 2
    }

    pub fn name(self) -> &'static str {
        match self {
            GrowthOp::Subdivision => "subdivision",
            GrowthOp::StarFractal(_) => "star-fractal",
        }
    }

    pub fn check(self) -> Result<()> {
        if self.m() > MAX_M {
            return Err(Error::ParameterOutOfRange(format!(
                "m = {} exceeds the maximum {MAX_M}",
                self.m()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for GrowthOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthOp::Subdivision => f.write_str("subdivision"),
            GrowthOp::StarFractal(m) => write!(f, "star-fractal(m={m})"),
        }
    }
}

/// One growth step; new vertices are tagged with `step`.
pub fn apply_once(tree: &Tree, op: GrowthOp, step: u32) -> Result<Tree> {
    op.check()?;
    if tree.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let n = tree.n();
    let old_edges: Vec<(u32, u32)> = tree.edges().collect();
    let e = old_edges.len();
    let m = op.m() as usize;
    let new_n = n + (1 + m) * e;
    if new_n > u32::MAX as usize {
        return Err(Error::SizeLimitExceeded {
            predicted: new_n.to_string(),
            limit: u32::MAX as u64,
        });
    }

    let (center_tag, leaf_tag) = match op {
        GrowthOp::Subdivision => (Provenance::SubdivisionCenter(step), None),
        GrowthOp::StarFractal(_) => (
            Provenance::StarCenter(step),
            Some(Provenance::StarLeaf(step)),
        ),
    };
    let mut provenance = Vec::with_capacity(new_n);
    provenance.extend_from_slice(tree.provenances());
    provenance.extend(std::iter::repeat_n(center_tag, e));
    if let Some(tag) = leaf_tag {
        provenance.extend(std::iter::repeat_n(tag, m * e));
    }

    let mut edges = Vec::with_capacity(new_n - 1);
    for (i, &(u, v)) in old_edges.iter().enumerate() {
        let w = (n + i) as u32;
        edges.push((u, w));
        edges.push((w, v));
        let first_leaf = n + e + i * m;
        for j in 0..m {
            edges.push((w, (first_leaf + j) as u32));
        }
    }
    Ok(Tree::from_parts(
        new_n,
        &edges,
        provenance,
        tree.seed_order(),
    ))
}

/// `apply_once` composed `t` times under the default size limit.
pub fn grow(seed: &Tree, op: GrowthOp, t: u32) -> Result<Tree> {
    grow_with_limit(seed, op, t, DEFAULT_MAX_VERTICES)
}

pub fn grow_with_limit(seed: &Tree, op: GrowthOp, t: u32, max_vertices: u64) -> Result<Tree> {
    op.check()?;
    if seed.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let (n_t, _) = predict_counts(seed.n() as u64, seed.edge_count() as u64, op, t)?;
    if n_t > BigUint::from(max_vertices) {
        return Err(Error::SizeLimitExceeded {
            predicted: n_t.to_string(),
            limit: max_vertices,
        });
    }
    let mut tree = seed.clone();
    for step in 1..=t {
        tree = apply_once(&tree, op, step)?;
    }
    Ok(tree)
}

/// Vertex and edge counts after `t` steps:
/// `n_t = n + ((2+m)^t - 1) e`, `e_t = (2+m)^t e` (subdivision is `m = 0`).
pub fn predict_counts(
    n_seed: u64,
    e_seed: u64,
    op: GrowthOp,
    t: u32,
) -> Result<(BigUint, BigUint)> {
    op.check()?;
    if e_seed < 1 || e_seed + 1 != n_seed {
        return Err(Error::ParameterOutOfRange(format!(
            "seed must be a tree with at least one edge (n = {n_seed}, e = {e_seed})"
        )));
    }
    let factor = BigUint::from(op.branching()).pow(t);
    let e_t = &factor * e_seed;
    let n_t = BigUint::from(n_seed) + (factor - BigUint::one()) * e_seed;
    Ok((n_t, e_t))
}

/// Predicted vertex count as `u64`, if it fits.
pub fn predicted_order(n_seed: u64, op: GrowthOp, t: u32) -> Result<Option<u64>> {
    Ok(predict_counts(n_seed, n_seed.saturating_sub(1), op, t)?
        .0
        .to_u64())
}
