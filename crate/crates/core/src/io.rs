//! Text formats: edge lists, partition files and LFR benchmark output.
//!
//! Edge list: one `u v [w]` per line, whitespace separated, `#` starts a
//! comment line, missing weight means 1. Partition: one `vertex label` per
//! line. LFR: the 1-indexed `network.dat` / `community.dat` pair written by
//! the reference benchmark generator, with each edge listed in both directions.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::partition::Partition;
use crate::scalar::Scalar;

fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(k, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((k + 1, line.split_whitespace().collect()))
        }
    })
}

fn parse_token<F: std::str::FromStr>(token: &str, line: usize, what: &str) -> Result<F> {
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {what} `{token}`"),
    })
}

/// Parses `u v [w]` lines into a graph with `n = max id + 1`.
pub fn parse_edge_list<T: Scalar>(text: &str) -> Result<WeightedGraph<T>> {
    let mut edges = Vec::new();
    let mut n = 0;
    for (line, tokens) in data_lines(text) {
        if !(2..=3).contains(&tokens.len()) {
            return Err(Error::Parse {
                line,
                message: format!("expected `u v [w]`, found {} fields", tokens.len()),
            });
        }
        let u: usize = parse_token(tokens[0], line, "vertex id")?;
        let v: usize = parse_token(tokens[1], line, "vertex id")?;
        let w: T = match tokens.get(2) {
            Some(t) => parse_token(t, line, "weight")?,
            None => T::one(),
        };
        if !w.is_finite() {
            return Err(Error::Parse { line, message: "weight must be finite".into() });
        }
        n = n.max(u + 1).max(v + 1);
        edges.push((u, v, w));
    }
    WeightedGraph::from_edges(n, edges)
}

/// Writes `u v w` lines (u < v) with round-trip precision.
pub fn write_edge_list<T: Scalar>(graph: &WeightedGraph<T>) -> String {
    let mut out = String::new();
    for &(u, v, w) in graph.edges() {
        writeln!(out, "{u} {v} {w}").unwrap();
    }
    out
}

fn collect_assignments(text: &str, offset: usize) -> Result<Vec<usize>> {
    let mut assigned: HashMap<usize, usize> = HashMap::new();
    let mut n = 0;
    for (line, tokens) in data_lines(text) {
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected `vertex label`, found {} fields", tokens.len()),
            });
        }
        let raw: usize = parse_token(tokens[0], line, "vertex id")?;
        let label: usize = parse_token(tokens[1], line, "label")?;
        if raw < offset {
            return Err(Error::Parse { line, message: format!("vertex ids start at {offset}") });
        }
        let vertex = raw - offset;
        if assigned.insert(vertex, label).is_some() {
            return Err(Error::DuplicateAssignment { vertex });
        }
        n = n.max(vertex + 1);
    }
    (0..n)
        .map(|v| assigned.get(&v).copied().ok_or(Error::IncompletePartition { vertex: v }))
        .collect()
}

/// Parses `vertex label` lines; every vertex `0..=max` must appear exactly once.
pub fn parse_partition(text: &str) -> Result<Partition> {
    collect_assignments(text, 0).map(Partition::new)
}

/// Like [`parse_partition`] but also checks the partition covers exactly `n` vertices.
pub fn parse_partition_for(text: &str, n: usize) -> Result<Partition> {
    let p = parse_partition(text)?;
    if p.len() < n {
        return Err(Error::IncompletePartition { vertex: p.len() });
    }
    if p.len() > n {
        return Err(Error::OutOfRange { vertex: p.len() - 1, n });
    }
    Ok(p)
}

pub fn write_partition(partition: &Partition) -> String {
    let mut out = String::new();
    for (i, z) in partition.labels().iter().enumerate() {
        writeln!(out, "{i} {z}").unwrap();
    }
    out
}

/// Reads an LFR `network.dat` / `community.dat` pair.
///
/// Ids are shifted to 0-based and each mirrored pair of lines becomes one
/// undirected edge. Community labels are kept as written.
pub fn parse_lfr<T: Scalar>(network: &str, communities: &str) -> Result<(WeightedGraph<T>, Partition)> {
    // (min, max) -> weight as listed from the min side and from the max side
    let mut pairs: HashMap<(usize, usize), [Option<T>; 2]> = HashMap::new();
    let mut order = Vec::new();
    let mut n = 0;
    for (line, tokens) in data_lines(network) {
        if !(2..=3).contains(&tokens.len()) {
            return Err(Error::Parse {
                line,
                message: format!("expected `src dst [w]`, found {} fields", tokens.len()),
            });
        }
        let a: usize = parse_token(tokens[0], line, "vertex id")?;
        let b: usize = parse_token(tokens[1], line, "vertex id")?;
        if a == 0 || b == 0 {
            return Err(Error::Parse { line, message: "LFR ids are 1-indexed".into() });
        }
        let (a, b) = (a - 1, b - 1);
        let w: T = match tokens.get(2) {
            Some(t) => parse_token(t, line, "weight")?,
            None => T::one(),
        };
        if a == b {
            return Err(Error::SelfLoop { vertex: a });
        }
        n = n.max(a + 1).max(b + 1);
        let key = (a.min(b), a.max(b));
        let slot = usize::from(a > b);
        let entry = pairs.entry(key).or_insert_with(|| {
            order.push(key);
            [None, None]
        });
        if entry[slot].replace(w).is_some() {
            return Err(Error::DuplicateEdge { u: key.0, v: key.1 });
        }
    }
    let mut edges = Vec::with_capacity(order.len());
    for key in order {
        match pairs[&key] {
            [Some(x), Some(y)] if x == y => edges.push((key.0, key.1, x)),
            [Some(_), Some(_)] => return Err(Error::WeightMismatch { u: key.0, v: key.1 }),
            _ => return Err(Error::AsymmetricEdge { u: key.0, v: key.1 }),
        }
    }
    let labels = collect_assignments(communities, 1)?;
    n = n.max(labels.len());
    if labels.len() < n {
        return Err(Error::IncompletePartition { vertex: labels.len() });
    }
    Ok((WeightedGraph::from_edges(n, edges)?, Partition::new(labels)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_with_default_weights_and_comments() {
        let g: WeightedGraph<f64> = parse_edge_list("# header\n0 1 1.0\n\n1 2 2.5\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.strength(1).unwrap(), 3.5);
        let h: WeightedGraph<f64> = parse_edge_list("0\t1\n").unwrap();
        assert_eq!(h.edges(), &[(0, 1, 1.0)]);
    }

    #[test]
    fn edge_list_errors() {
        assert_eq!(
            parse_edge_list::<f64>("0 1 1\n1 0 1"),
            Err(Error::DuplicateEdge { u: 0, v: 1 })
        );
        assert_eq!(parse_edge_list::<f64>("2 2"), Err(Error::SelfLoop { vertex: 2 }));
        assert!(matches!(
            parse_edge_list::<f64>("0 1\n0 x 1"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_edge_list::<f64>("-1 2"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list::<f64>("0 1 2 3"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn negative_weights_are_accepted_by_the_parser() {
        let g: WeightedGraph<f64> = parse_edge_list("0 1 -1").unwrap();
        assert_eq!(g.min_weight(), Some(-1.0));
    }

    #[test]
    fn partition_parse_and_errors() {
        let p = parse_partition("0 0\n1 0\n2 1").unwrap();
        assert_eq!(p.labels(), &[0, 0, 1]);
        assert_eq!(p.size_of(0), 2);
        assert_eq!(p.size_of(1), 1);
        assert_eq!(parse_partition("0 0\n0 1"), Err(Error::DuplicateAssignment { vertex: 0 }));
        assert_eq!(parse_partition("0 0\n2 1"), Err(Error::IncompletePartition { vertex: 1 }));
        assert_eq!(
            parse_partition_for("0 0\n1 1", 3),
            Err(Error::IncompletePartition { vertex: 2 })
        );
    }

    #[test]
    fn lfr_pair() {
        let (g, p) = parse_lfr::<f64>("1 2 0.5\n2 1 0.5", "1 1\n2 1").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges(), &[(0, 1, 0.5)]);
        assert_eq!(p.community_count(), 1);
    }

    #[test]
    fn lfr_errors() {
        assert_eq!(
            parse_lfr::<f64>("1 2 0.5\n2 1 0.6", "1 1\n2 1"),
            Err(Error::WeightMismatch { u: 0, v: 1 })
        );
        assert_eq!(
            parse_lfr::<f64>("1 2\n2 3\n3 2", "1 1\n2 1\n3 1"),
            Err(Error::AsymmetricEdge { u: 0, v: 1 })
        );
        assert_eq!(
            parse_lfr::<f64>("1 2\n2 1", "1 1"),
            Err(Error::IncompletePartition { vertex: 1 })
        );
        assert!(matches!(parse_lfr::<f64>("0 1\n1 0", "1 1"), Err(Error::Parse { .. })));
    }

    #[test]
    fn unweighted_lfr_lines_default_to_unit_weight() {
        let net = "1\t2\n2\t1\n2\t3\n3\t2\n";
        let (g, p) = parse_lfr::<f64>(net, "1\t1\n2\t1\n3\t2\n").unwrap();
        assert_eq!(g.edge_count(), net.lines().count() / 2);
        assert_eq!(g.total_weight(), 2.0);
        assert_eq!(p.labels(), &[1, 1, 2]);
    }
}
