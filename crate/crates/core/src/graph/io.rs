//! Plain-text graph files.
//!
//! ```text
//! # optional comments
//! n m
//! bipartite n0      (optional: V0 = {0..n0-1})
//! u v               (m lines, 0-indexed, u < v)
//! ```

use std::fmt::Write as _;
use std::path::Path;

use super::{BuildOptions, Graph};
use crate::error::{Error, Result};

/// Canonical text form: edges sorted, bipartition line only when `V0` is a
/// prefix of the vertex ids.
pub fn format_graph(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.n(), g.num_edges()).unwrap();
    if let Some(n0) = g.bipartition().and_then(|b| b.prefix_size()) {
        writeln!(out, "bipartite {n0}").unwrap();
    }
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn write_graph(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_graph(g))?;
    Ok(())
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace().map(|t| t.parse::<usize>());
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
        _ => Err(Error::Parse { line: lineno, msg: format!("expected two integers, got {line:?}") }),
    }
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (lineno, header) =
        lines.next().ok_or(Error::Parse { line: 0, msg: "empty graph file".into() })?;
    let (n, m) = parse_pair(header, lineno)?;
    let mut class0 = None;
    let mut edges = Vec::with_capacity(m);
    for (lineno, line) in lines {
        if let Some(rest) = line.strip_prefix("bipartite") {
            if !edges.is_empty() || class0.is_some() {
                return Err(Error::Parse { line: lineno, msg: "bipartite line must follow the header".into() });
            }
            let n0 = rest.trim().parse::<usize>().map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("bad class size: {e}"),
            })?;
            class0 = Some(n0);
            continue;
        }
        let (u, v) = parse_pair(line, lineno)?;
        edges.push((u.min(v), u.max(v)));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Graph::build(n, &edges, BuildOptions { class0_size: class0, ..Default::default() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_bipartite, complete_graph};

    #[test]
    fn round_trips() {
        for g in [complete_graph(4), complete_bipartite(3)] {
            let text = format_graph(&g);
            let back = parse_graph(&text).unwrap();
            assert_eq!(format_graph(&back), text);
            assert_eq!(back.adjacency(), g.adjacency());
        }
        assert!(format_graph(&complete_bipartite(2)).starts_with("4 4\nbipartite 2\n"));
    }

    #[test]
    fn comments_and_errors() {
        let g = parse_graph("# K2\n2 1\n# edge\n0 1\n").unwrap();
        assert_eq!(g.num_edges(), 1);
        assert!(parse_graph("2 2\n0 1\n").is_err());
        assert!(parse_graph("3 1\n0 x\n").is_err());
        assert!(matches!(parse_graph("3 1\n1 1\n"), Err(Error::SelfLoop(1))));
    }
}
