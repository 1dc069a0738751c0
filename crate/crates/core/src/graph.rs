//! Immutable undirected weighted graph.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::scalar::Scalar;

/// Undirected weighted graph on vertices `0..n`.
///
/// Each edge is stored once in `edges` with `u < v` and twice in the
/// adjacency lists. Self-loops and repeated pairs are rejected at
/// construction, so `W_ii = 0` holds for every vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph<T> {
    n: usize,
    edges: Vec<(usize, usize, T)>,
    adjacency: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> WeightedGraph<T> {
    /// Builds a graph from an edge list. Endpoints may be given in either order.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, T)>,
    {
        let mut seen = HashSet::new();
        let mut stored = Vec::new();
        let mut adjacency = vec![Vec::new(); n];
        for (a, b, w) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::OutOfRange { vertex: x, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop { vertex: a });
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((u, v)) {
                return Err(Error::DuplicateEdge { u, v });
            }
            stored.push((u, v, w));
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
        }
        Ok(Self { n, edges: stored, adjacency })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v, w)` with `u < v`, in insertion order.
    pub fn edges(&self) -> &[(usize, usize, T)] {
        &self.edges
    }

    /// Neighbors of `i` with the connecting weight.
    pub fn neighbors(&self, i: usize) -> &[(usize, T)] {
        &self.adjacency[i]
    }

    pub fn min_weight(&self) -> Option<T> {
        self.edges.iter().map(|e| e.2).reduce(T::min)
    }

    pub fn max_weight(&self) -> Option<T> {
        self.edges.iter().map(|e| e.2).reduce(T::max)
    }

    /// Sum of edge weights over unordered pairs.
    pub fn total_weight(&self) -> T {
        self.edges.iter().map(|e| e.2).sum()
    }

    fn check(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::OutOfRange { vertex: i, n: self.n })
        }
    }

    /// Total weight of edges incident to `i`.
    pub fn strength(&self, i: usize) -> Result<T> {
        self.check(i)?;
        Ok(self.adjacency[i].iter().map(|&(_, w)| w).sum())
    }

    /// `k_i^z`: weight from `i` to the members of community `z` (excluding `i`).
    pub fn intra_strength(&self, partition: &Partition, i: usize, z: usize) -> Result<T> {
        self.check(i)?;
        if partition.len() != self.n {
            return Err(Error::SizeMismatch { left: self.n, right: partition.len() });
        }
        if partition.size_of(z) == 0 {
            return Err(Error::UnknownLabel { label: z });
        }
        let labels = partition.labels();
        Ok(self.adjacency[i]
            .iter()
            .filter(|&&(j, _)| labels[j] == z)
            .map(|&(_, w)| w)
            .sum())
    }

    /// Returns a copy with every weight multiplied by `c`.
    pub fn scaled(&self, c: T) -> Self {
        Self {
            n: self.n,
            edges: self.edges.iter().map(|&(u, v, w)| (u, v, w * c)).collect(),
            adjacency: self
                .adjacency
                .iter()
                .map(|row| row.iter().map(|&(j, w)| (j, w * c)).collect())
                .collect(),
        }
    }
}
