//! Vertex-to-community assignments.

use std::collections::{BTreeMap, HashMap};

/// Assignment of a community label to every vertex, with per-label sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<usize>,
    sizes: BTreeMap<usize, usize>,
}

impl Partition {
    pub fn new(labels: Vec<usize>) -> Self {
        let mut sizes = BTreeMap::new();
        for &z in &labels {
            *sizes.entry(z).or_insert(0) += 1;
        }
        Self { labels, sizes }
    }

    /// Every vertex in its own community, labelled by its id.
    pub fn singletons(n: usize) -> Self {
        Self::new((0..n).collect())
    }

    pub fn all_in_one(n: usize) -> Self {
        Self::new(vec![0; n])
    }

    /// Builds a partition from explicit blocks of vertex ids.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Self {
        let mut labels = vec![usize::MAX; n];
        for (z, block) in blocks.iter().enumerate() {
            for &v in block {
                labels[v] = z;
            }
        }
        assert!(labels.iter().all(|&z| z != usize::MAX), "blocks must cover every vertex");
        Self::new(labels)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Label → member count, for every label present.
    pub fn sizes(&self) -> &BTreeMap<usize, usize> {
        &self.sizes
    }

    pub fn size_of(&self, z: usize) -> usize {
        self.sizes.get(&z).copied().unwrap_or(0)
    }

    pub fn community_count(&self) -> usize {
        self.sizes.len()
    }

    /// Members of each community, in ascending vertex order.
    pub fn members(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &z) in self.labels.iter().enumerate() {
            out.entry(z).or_default().push(i);
        }
        out
    }

    pub fn members_of(&self, z: usize) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|&(_, &l)| l == z)
            .map(|(i, _)| i)
            .collect()
    }

    /// Relabels communities `0, 1, ...` in order of first appearance.
    pub fn normalized(&self) -> Self {
        let mut map = HashMap::new();
        let labels = self
            .labels
            .iter()
            .map(|&z| {
                let next = map.len();
                *map.entry(z).or_insert(next)
            })
            .collect();
        Self::new(labels)
    }

    /// True when both partitions group the vertices identically, ignoring label names.
    pub fn same_clustering(&self, other: &Partition) -> bool {
        self.len() == other.len() && self.normalized().labels == other.normalized().labels
    }
}
