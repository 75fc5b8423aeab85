//! Parsing of seed specs, operation flags and integer ranges.

use std::fs;

use anyhow::{bail, Context, Result};
use treegrowth_core::edgelist::parse_edge_list;
use treegrowth_core::{build_seed, GrowthOp, SeedKind, Tree};

/// `edge | path:K | star:K | file:PATH | random:N:SEED`.
pub fn parse_seed(spec: &str) -> Result<Tree> {
    let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let num = |s: &str, what: &str| -> Result<usize> {
        s.parse()
            .with_context(|| format!("bad {what} in seed spec {spec:?}"))
    };
    let kind = match head {
        "edge" if rest.is_empty() => SeedKind::SingleEdge,
        "path" => SeedKind::Path(num(rest, "vertex count")?),
        "star" => SeedKind::Star(num(rest, "leaf count")?),
        "random" => {
            let (n, seed) = rest
                .split_once(':')
                .with_context(|| format!("expected random:N:SEED, got {spec:?}"))?;
            SeedKind::RandomLabeledTree {
                n: num(n, "vertex count")?,
                rng_seed: seed.parse().with_context(|| format!("bad rng seed in {spec:?}"))?,
            }
        }
        "file" => {
            let text = fs::read_to_string(rest).with_context(|| format!("cannot read {rest}"))?;
            return Ok(parse_edge_list(&text)?);
        }
        _ => bail!("unknown seed spec {spec:?} (expected edge, path:K, star:K, file:PATH or random:N:SEED)"),
    };
    Ok(build_seed(&kind)?)
}

pub fn parse_op(name: &str, m: Option<u32>) -> Result<GrowthOp> {
    let op = match (name, m) {
        ("subdivision", None) => GrowthOp::Subdivision,
        ("subdivision", Some(_)) => bail!("--m only applies to --op star-fractal"),
        ("star-fractal", m) => GrowthOp::StarFractal(m.unwrap_or(1)),
        _ => bail!("unknown operation {name:?} (expected subdivision or star-fractal)"),
    };
    op.check()?;
    Ok(op)
}

/// `A`, `A..B` or `A..=B`, both ends inclusive.
pub fn parse_range(text: &str) -> Result<Vec<u32>> {
    let bad = || format!("bad range {text:?} (expected A, A..B or A..=B)");
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (text, text),
    };
    let lo: u32 = lo.trim().parse().with_context(bad)?;
    let hi: u32 = hi.trim().parse().with_context(bad)?;
    if lo > hi {
        bail!("empty range {text:?}");
    }
    Ok((lo..=hi).collect())
}
