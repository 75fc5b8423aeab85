use num_bigint::BigUint;
use rayon::prelude::*;

use crate::tree::{Provenance, Tree};

#[derive(Clone, Copy, PartialEq)]
enum Class {
    Old,
    Center,
    Leaf(u32),
}

/// Per-class distance sums on a tree produced by ONE star-fractal (or
/// subdivision) step, by brute-force BFS. Pairs are split as
/// old-old, center-center, old-center, leaf-leaf on the same center,
/// leaf-leaf on different centers, old-leaf, center-leaf.
pub fn class_pair_sums(tree: &Tree) -> [BigUint; 7] {
    let class = |v: usize| match tree.provenance(v) {
        Provenance::Original => Class::Old,
        Provenance::StarCenter(_) | Provenance::SubdivisionCenter(_) => Class::Center,
        Provenance::StarLeaf(_) => Class::Leaf(tree.neighbors(v)[0]),
    };
    let acc = (0..tree.n())
        .into_par_iter()
        .map(|u| {
            let d = tree.bfs_distances(u).expect("u in range");
            let mut acc = [0u128; 7];
            for (v, &dv) in d.iter().enumerate().skip(u + 1) {
                let idx = match (class(u), class(v)) {
                    (Class::Old, Class::Old) => 0,
                    (Class::Center, Class::Center) => 1,
                    (Class::Old, Class::Center) | (Class::Center, Class::Old) => 2,
                    (Class::Leaf(a), Class::Leaf(b)) if a == b => 3,
                    (Class::Leaf(_), Class::Leaf(_)) => 4,
                    (Class::Old, Class::Leaf(_)) | (Class::Leaf(_), Class::Old) => 5,
                    (Class::Center, Class::Leaf(_)) | (Class::Leaf(_), Class::Center) => 6,
                };
                acc[idx] += dv as u128;
            }
            acc
        })
        .reduce(
            || [0u128; 7],
            |mut a, b| {
                for i in 0..7 {
                    a[i] += b[i];
                }
                a
            },
        );
    acc.map(BigUint::from)
}
