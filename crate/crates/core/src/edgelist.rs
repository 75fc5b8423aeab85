//! Plain-text edge lists: one `u v` pair of 0-based indices per line,
//! `#` starts a comment line, vertex count is `1 + max index`.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::tree::Tree;

pub fn parse_edge_list(text: &str) -> Result<Tree> {
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let mut next = |what: &str| -> Result<usize> {
            let tok = fields.next().ok_or_else(|| Error::Parse {
                line: i + 1,
                message: format!("missing {what} index"),
            })?;
            tok.parse().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("invalid index {tok:?}"),
            })
        };
        let u = next("first")?;
        let v = next("second")?;
        if fields.next().is_some() {
            return Err(Error::Parse {
                line: i + 1,
                message: "expected exactly two indices".into(),
            });
        }
        edges.push((u, v));
    }
    let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(1);
    Tree::from_edges(n, &edges)
}

/// Writes `header` lines as `# ` comments followed by the canonical edge list.
pub fn format_edge_list(tree: &Tree, header: &[String]) -> String {
    let mut out = String::with_capacity(tree.edge_count() * 12);
    for h in header {
        let _ = writeln!(out, "# {h}");
    }
    for (u, v) in tree.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}
