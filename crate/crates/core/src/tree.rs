//! Immutable labeled trees with per-vertex provenance, seed constructors and
//! BFS distance machinery.
//!
//! Vertices are dense indices `0..n`. Adjacency is stored in compressed
//! sparse row form with every neighbor list sorted ascending, so the
//! canonical edge order `(min, max)` falls out of a row-major scan.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use num_bigint::BigInt;
use num_bigint::BigUint;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub type VertexId = usize;

/// Which growth step created a vertex, and in what role.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "role", content = "step", rename_all = "snake_case")]
pub enum Provenance {
    Original,
    SubdivisionCenter(u32),
    StarCenter(u32),
    StarLeaf(u32),
}

impl Provenance {
    pub fn step(self) -> Option<u32> {
        match self {
            Provenance::Original => None,
            Provenance::SubdivisionCenter(s)
            | Provenance::StarCenter(s)
            | Provenance::StarLeaf(s) => Some(s),
        }
    }

    pub fn is_center(self) -> bool {
        matches!(
            self,
            Provenance::SubdivisionCenter(_) | Provenance::StarCenter(_)
        )
    }
}

/// A violated tree invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Empty,
    IndexOutOfRange { index: usize, n: usize },
    SelfLoop { vertex: usize },
    DuplicateEdge { u: usize, v: usize },
    EdgeCount { expected: usize, found: usize },
    Disconnected { reached: usize, n: usize },
    Asymmetric { u: usize, v: usize },
    OriginalOutsideSeed { vertex: usize },
    ProvenanceLength { expected: usize, found: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Empty => write!(f, "tree has no vertices"),
            Violation::IndexOutOfRange { index, n } => {
                write!(f, "vertex {index} out of range 0..{n}")
            }
            Violation::SelfLoop { vertex } => write!(f, "self-loop at {vertex}"),
            Violation::DuplicateEdge { u, v } => write!(f, "duplicate edge {{{u},{v}}}"),
            Violation::EdgeCount { expected, found } => {
                write!(f, "edge count {found} != n-1 = {expected}")
            }
            Violation::Disconnected { reached, n } => {
                write!(
                    f,
                    "disconnected: BFS from 0 reached {reached} of {n} vertices"
                )
            }
            Violation::Asymmetric { u, v } => {
                write!(
                    f,
                    "adjacency not symmetric: {u} lists {v} but not vice versa"
                )
            }
            Violation::OriginalOutsideSeed { vertex } => {
                write!(
                    f,
                    "vertex {vertex} tagged Original lies outside the seed range"
                )
            }
            Violation::ProvenanceLength { expected, found } => {
                write!(f, "{found} provenance tags for {expected} vertices")
            }
        }
    }
}

pub type ValidationResult = std::result::Result<(), Vec<Violation>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    provenance: Vec<Provenance>,
    seed_order: usize,
}

impl Tree {
    /// Builds a seed tree (all vertices `Original`) from an undirected edge
    /// list, rejecting anything that is not a tree on `0..n`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Tree> {
        if let Err(violations) = validate_edges(n, edges) {
            let msg = violations
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; ");
            return Err(Error::EdgeListNotATree(msg));
        }
        let edges: Vec<(u32, u32)> = edges.iter().map(|&(u, v)| (u as u32, v as u32)).collect();
        Ok(Tree::from_parts(
            n,
            &edges,
            vec![Provenance::Original; n],
            n,
        ))
    }

    /// Assembles a tree without validation. Callers guarantee the edge list
    /// describes a tree on `0..n`.
    pub(crate) fn from_parts(
        n: usize,
        edges: &[(u32, u32)],
        provenance: Vec<Provenance>,
        seed_order: usize,
    ) -> Tree {
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; 2 * edges.len()];
        for &(u, v) in edges {
            neighbors[fill[u as usize]] = v;
            fill[u as usize] += 1;
            neighbors[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        for v in 0..n {
            neighbors[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Tree {
            offsets,
            neighbors,
            provenance,
            seed_order,
        }
    }

    pub fn n(&self) -> usize {
        self.provenance.len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn neighbors(&self, v: VertexId) -> &[u32] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn provenance(&self, v: VertexId) -> Provenance {
        self.provenance[v]
    }

    pub fn provenances(&self) -> &[Provenance] {
        &self.provenance
    }

    /// Vertex count of the seed this tree was grown from.
    pub fn seed_order(&self) -> usize {
        self.seed_order
    }

    /// Edges in canonical order: `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v as usize > u)
                .map(move |v| (u as u32, v))
        })
    }

    pub fn leaf_count(&self) -> usize {
        (0..self.n()).filter(|&v| self.degree(v) == 1).count()
    }

    /// Same vertex and edge structure, ignoring provenance tags.
    pub fn same_shape(&self, other: &Tree) -> bool {
        self.offsets == other.offsets && self.neighbors == other.neighbors
    }

    /// Re-checks every structural invariant on the stored adjacency.
    pub fn validate(&self) -> ValidationResult {
        let n = self.n();
        let mut violations = Vec::new();
        if n == 0 {
            return Err(vec![Violation::Empty]);
        }
        if self.offsets.len() != n + 1 {
            violations.push(Violation::ProvenanceLength {
                expected: self.offsets.len().saturating_sub(1),
                found: n,
            });
            return Err(violations);
        }
        for u in 0..n {
            let row = self.neighbors(u);
            for (i, &v) in row.iter().enumerate() {
                let v = v as usize;
                if v >= n {
                    violations.push(Violation::IndexOutOfRange { index: v, n });
                    continue;
                }
                if v == u {
                    violations.push(Violation::SelfLoop { vertex: u });
                }
                if i > 0 && row[i - 1] as usize == v {
                    violations.push(Violation::DuplicateEdge {
                        u: u.min(v),
                        v: u.max(v),
                    });
                }
                if self.neighbors(v).binary_search(&(u as u32)).is_err() {
                    violations.push(Violation::Asymmetric { u, v });
                }
            }
        }
        if !self.neighbors.len().is_multiple_of(2) || self.edge_count() != n - 1 {
            violations.push(Violation::EdgeCount {
                expected: n - 1,
                found: self.neighbors.len() / 2,
            });
        }
        if violations.is_empty() {
            let reached = reachable_from_zero(n, |u| self.neighbors(u));
            if reached != n {
                violations.push(Violation::Disconnected { reached, n });
            }
        }
        for (v, p) in self.provenance.iter().enumerate() {
            if *p == Provenance::Original && v >= self.seed_order {
                violations.push(Violation::OriginalOutsideSeed { vertex: v });
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// Hop counts from `source` to every vertex.
    pub fn bfs_distances(&self, source: VertexId) -> Result<Vec<u32>> {
        if source >= self.n() {
            return Err(Error::SourceOutOfRange {
                vertex: source,
                n: self.n(),
            });
        }
        let mut dist = vec![u32::MAX; self.n()];
        let mut queue = VecDeque::with_capacity(self.n());
        self.bfs_into(source, &mut dist, &mut queue);
        Ok(dist)
    }

    /// BFS into caller-owned buffers; `dist` is overwritten. Returns the sum
    /// of distances and the farthest vertex.
    fn bfs_into(&self, source: usize, dist: &mut [u32], queue: &mut VecDeque<u32>) -> (u64, usize) {
        dist.fill(u32::MAX);
        queue.clear();
        dist[source] = 0;
        queue.push_back(source as u32);
        let mut sum = 0u64;
        let mut far = source;
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            sum += du as u64;
            if du > dist[far] {
                far = u as usize;
            }
            for &w in self.neighbors(u as usize) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        (sum, far)
    }

    /// Sum of `d(u, v)` over unordered pairs, by BFS from every vertex.
    ///
    /// This is the enumeration oracle for all closed forms, so it never
    /// exploits tree structure beyond plain BFS.
    pub fn geodesic_sum(&self) -> BigUint {
        let n = self.n();
        let ordered: u128 = (0..n)
            .into_par_iter()
            .map_init(
                || (vec![u32::MAX; n], VecDeque::with_capacity(n)),
                |(dist, queue), s| self.bfs_into(s, dist, queue).0 as u128,
            )
            .sum();
        BigUint::from(ordered / 2)
    }

    /// `2 S / (n (n - 1))` as an exact rational.
    pub fn average_geodesic(&self) -> Result<BigRational> {
        let n = self.n();
        if n < 2 {
            return Err(Error::DegenerateTree { n });
        }
        let s = BigInt::from(self.geodesic_sum());
        let pairs = BigInt::from(n) * BigInt::from(n - 1);
        Ok(BigRational::new(s * 2, pairs))
    }

    /// Longest shortest path, via double BFS.
    pub fn diameter(&self) -> u32 {
        let n = self.n();
        let mut dist = vec![u32::MAX; n];
        let mut queue = VecDeque::with_capacity(n);
        let (_, far) = self.bfs_into(0, &mut dist, &mut queue);
        let (_, far2) = self.bfs_into(far, &mut dist, &mut queue);
        dist[far2]
    }
}

fn reachable_from_zero<'a, F>(n: usize, neighbors: F) -> usize
where
    F: Fn(usize) -> &'a [u32],
{
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    seen[0] = true;
    queue.push_back(0usize);
    let mut reached = 0;
    while let Some(u) = queue.pop_front() {
        reached += 1;
        for &w in neighbors(u) {
            let w = w as usize;
            if w < n && !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    reached
}

/// Checks that `edges` forms a tree on vertices `0..n`.
pub fn validate_edges(n: usize, edges: &[(usize, usize)]) -> ValidationResult {
    if n == 0 {
        return Err(vec![Violation::Empty]);
    }
    let mut violations = Vec::new();
    let mut canon = Vec::with_capacity(edges.len());
    for &(u, v) in edges {
        let mut ok = true;
        for x in [u, v] {
            if x >= n {
                violations.push(Violation::IndexOutOfRange { index: x, n });
                ok = false;
            }
        }
        if u == v {
            violations.push(Violation::SelfLoop { vertex: u });
            ok = false;
        }
        if ok {
            canon.push((u.min(v), u.max(v)));
        }
    }
    canon.sort_unstable();
    for w in canon.windows(2) {
        if w[0] == w[1] {
            violations.push(Violation::DuplicateEdge {
                u: w[0].0,
                v: w[0].1,
            });
        }
    }
    if edges.len() != n - 1 {
        violations.push(Violation::EdgeCount {
            expected: n - 1,
            found: edges.len(),
        });
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in &canon {
        adj[u].push(v as u32);
        adj[v].push(u as u32);
    }
    let reached = reachable_from_zero(n, |u| adj[u].as_slice());
    if reached != n {
        violations.push(Violation::Disconnected { reached, n });
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Seed shapes accepted by [`build_seed`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeedKind {
    SingleEdge,
    /// Path on `k >= 2` vertices.
    Path(usize),
    /// Star with center 0 and `k >= 1` leaves.
    Star(usize),
    /// Vertex count is `1 + max index`.
    FromEdgeList(Vec<(usize, usize)>),
    /// Uniform labeled tree from a random Prüfer sequence.
    RandomLabeledTree {
        n: usize,
        rng_seed: u64,
    },
}

pub fn build_seed(kind: &SeedKind) -> Result<Tree> {
    match kind {
        SeedKind::SingleEdge => Tree::from_edges(2, &[(0, 1)]),
        SeedKind::Path(k) => {
            if *k < 2 {
                return Err(Error::ParameterOutOfRange(format!(
                    "path needs at least 2 vertices, got {k}"
                )));
            }
            let edges: Vec<_> = (0..k - 1).map(|i| (i, i + 1)).collect();
            Tree::from_edges(*k, &edges)
        }
        SeedKind::Star(k) => {
            if *k < 1 {
                return Err(Error::ParameterOutOfRange(
                    "star needs at least 1 leaf".into(),
                ));
            }
            let edges: Vec<_> = (1..=*k).map(|i| (0, i)).collect();
            Tree::from_edges(k + 1, &edges)
        }
        SeedKind::FromEdgeList(edges) => {
            let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(1);
            Tree::from_edges(n, edges)
        }
        SeedKind::RandomLabeledTree { n, rng_seed } => {
            if *n < 2 {
                return Err(Error::ParameterOutOfRange(format!(
                    "random tree needs at least 2 vertices, got {n}"
                )));
            }
            let seq = random_prufer_sequence(*n, *rng_seed);
            let edges = prufer_decode(*n, &seq)?;
            Tree::from_edges(*n, &edges)
        }
    }
}

/// `n - 2` entries drawn uniformly from `0..n` with ChaCha8 seeded by `rng_seed`.
pub fn random_prufer_sequence(n: usize, rng_seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    (0..n.saturating_sub(2))
        .map(|_| rng.gen_range(0..n as u64) as usize)
        .collect()
}

/// Decodes a Prüfer sequence, always joining the smallest current leaf.
pub fn prufer_decode(n: usize, seq: &[usize]) -> Result<Vec<(usize, usize)>> {
    if n < 2 || seq.len() != n - 2 {
        return Err(Error::ParameterOutOfRange(format!(
            "Prüfer sequence for {n} vertices must have length {}",
            n.saturating_sub(2)
        )));
    }
    if let Some(&bad) = seq.iter().find(|&&x| x >= n) {
        return Err(Error::ParameterOutOfRange(format!(
            "Prüfer entry {bad} out of range 0..{n}"
        )));
    }
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let Reverse(leaf) = leaves.pop().expect("a leaf always exists");
        edges.push((leaf.min(x), leaf.max(x)));
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.push(Reverse(x));
        }
    }
    let Reverse(a) = leaves.pop().expect("two leaves remain");
    let Reverse(b) = leaves.pop().expect("two leaves remain");
    edges.push((a.min(b), a.max(b)));
    Ok(edges)
}
