use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::check_index;
use crate::error::{Error, Result};
use crate::exact::q;
use crate::tree::Tree;

/// Largest tree accepted by [`hitting_times_dense`].
pub const DENSE_EXACT_LIMIT: usize = 2000;

/// Expected hitting times `h[v]` of `target` from every vertex.
///
/// Solves `h_target = 0`, `h_v = 1 + (1/deg v) sum_{w ~ v} h_w` by exact
/// Gaussian elimination, pivoting on vertices farthest from the target
/// first. On a tree that order produces no fill-in: after eliminating its
/// subtree each vertex satisfies `h_v = a_v + b_v h_parent`.
pub fn hitting_times_to(tree: &Tree, target: usize) -> Result<Vec<BigRational>> {
    check_index(tree, target)?;
    let n = tree.n();

    // BFS order from the target gives parents and a top-down sequence.
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    parent[target] = target;
    order.push(target);
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for &w in tree.neighbors(u) {
            let w = w as usize;
            if parent[w] == usize::MAX {
                parent[w] = u;
                order.push(w);
            }
        }
    }

    let mut a = vec![BigRational::zero(); n];
    let mut b = vec![BigRational::zero(); n];
    let mut sum_a = vec![BigRational::zero(); n];
    let mut sum_b = vec![BigRational::zero(); n];
    for &v in order.iter().skip(1).rev() {
        let deg = q(tree.degree(v) as i64);
        // deg h_v = deg + h_parent + sum_children (a_c + b_c h_v)
        let pivot = &deg - &sum_b[v];
        if pivot.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let av = (&deg + &sum_a[v]) / &pivot;
        let bv = pivot.recip();
        let p = parent[v];
        sum_a[p] += &av;
        sum_b[p] += &bv;
        a[v] = av;
        b[v] = bv;
    }

    let mut h = vec![BigRational::zero(); n];
    for &v in order.iter().skip(1) {
        h[v] = &a[v] + &b[v] * &h[parent[v]];
    }
    Ok(h)
}

/// Expected number of steps for a walk from `source` to first reach `target`.
pub fn hitting_time_exact(tree: &Tree, source: usize, target: usize) -> Result<BigRational> {
    check_index(tree, source)?;
    let mut h = hitting_times_to(tree, target)?;
    Ok(std::mem::take(&mut h[source]))
}

/// Same system as [`hitting_times_to`], solved by dense row reduction over
/// the rationals. Kept as a reference for small trees.
pub fn hitting_times_dense(tree: &Tree, target: usize) -> Result<Vec<BigRational>> {
    check_index(tree, target)?;
    let n = tree.n();
    if n > DENSE_EXACT_LIMIT {
        return Err(Error::SizeLimitExceeded {
            predicted: n.to_string(),
            limit: DENSE_EXACT_LIMIT as u64,
        });
    }
    let vars: Vec<usize> = (0..n).filter(|&v| v != target).collect();
    let mut col = vec![usize::MAX; n];
    for (i, &v) in vars.iter().enumerate() {
        col[v] = i;
    }
    let k = vars.len();
    // Augmented matrix rows: deg h_v - sum_{w != target} h_w = deg.
    let mut m = vec![vec![BigRational::zero(); k + 1]; k];
    for (i, &v) in vars.iter().enumerate() {
        let deg = tree.degree(v) as i64;
        m[i][i] = q(deg);
        m[i][k] = q(deg);
        for &w in tree.neighbors(v) {
            if w as usize != target {
                m[i][col[w as usize]] -= BigRational::one();
            }
        }
    }
    for c in 0..k {
        let p = (c..k)
            .find(|&r| !m[r][c].is_zero())
            .ok_or(Error::SingularMatrix)?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut().skip(c) {
            *x *= &inv;
        }
        let pivot_row = m[c].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == c || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x -= &f * y;
            }
        }
    }
    let mut h = vec![BigRational::zero(); n];
    for (i, &v) in vars.iter().enumerate() {
        h[v] = m[i][k].clone();
    }
    Ok(h)
}

/// Average of `FPT(u, v)` over all ordered pairs `u != v`.
pub fn mfpt_exact_solve(tree: &Tree) -> Result<BigRational> {
    let n = tree.n();
    if n < 2 {
        return Err(Error::DegenerateTree { n });
    }
    let mut total = BigRational::zero();
    for target in 0..n {
        for h in hitting_times_to(tree, target)? {
            total += h;
        }
    }
    Ok(total / q(BigInt::from(n) * BigInt::from(n - 1)))
}

/// Unit-resistor effective resistance; on a tree this is the hop distance.
pub fn effective_resistance(tree: &Tree, u: usize, v: usize) -> Result<BigRational> {
    check_index(tree, u)?;
    check_index(tree, v)?;
    Ok(q(tree.bfs_distances(u)?[v] as i64))
}

/// `FPT(u, v) + FPT(v, u)`.
pub fn commute_time(tree: &Tree, u: usize, v: usize) -> Result<BigRational> {
    Ok(hitting_time_exact(tree, u, v)? + hitting_time_exact(tree, v, u)?)
}
