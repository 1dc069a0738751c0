//! Shared oracles and fixtures for the integration tests.
#![allow(dead_code)]

use gsbm::rng::rng_from_seed;
use gsbm::{Graph, Partition};
use nalgebra::DMatrix;
use rand::Rng as _;

/// Every set partition of `0..n`, as restricted growth strings.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    fn grow(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Partition>) {
        if prefix.len() == n {
            out.push(Partition::new(prefix.clone()));
            return;
        }
        let next = prefix.iter().copied().max().map_or(0, |m| m + 1);
        for z in 0..=next {
            prefix.push(z);
            grow(prefix, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::with_capacity(n), n, &mut out);
    out
}

/// NMI straight from the contingency table, no shortcuts.
pub fn nmi_oracle(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len() as f64;
    let ka = a.iter().max().unwrap() + 1;
    let kb = b.iter().max().unwrap() + 1;
    let mut table = vec![vec![0.0; kb]; ka];
    for (&x, &y) in a.iter().zip(b) {
        table[x][y] += 1.0;
    }
    let row: Vec<f64> = table.iter().map(|r| r.iter().sum()).collect();
    let col: Vec<f64> = (0..kb).map(|y| table.iter().map(|r| r[y]).sum()).collect();
    let h = |c: &[f64]| -c.iter().filter(|&&x| x > 0.0).map(|&x| x / n * (x / n).ln()).sum::<f64>();
    let (ha, hb) = (h(&row), h(&col));
    if ha == 0.0 && hb == 0.0 {
        return 1.0;
    }
    let mut mi = 0.0;
    for x in 0..ka {
        for y in 0..kb {
            let nxy = table[x][y];
            if nxy > 0.0 {
                mi += nxy / n * (n * nxy / (row[x] * col[y])).ln();
            }
        }
    }
    2.0 * mi / (ha + hb)
}

/// Dense symmetric adjacency of the subgraph induced by `members`.
pub fn dense_block(graph: &Graph, members: &[usize]) -> DMatrix<f64> {
    let k = members.len();
    let mut m = DMatrix::zeros(k, k);
    for (a, &u) in members.iter().enumerate() {
        for &(v, w) in graph.neighbors(u) {
            if let Some(b) = members.iter().position(|&x| x == v) {
                m[(a, b)] = w;
            }
        }
    }
    m
}

/// Largest eigenvalue by dense symmetric eigendecomposition.
pub fn dense_top_eigenvalue(m: &DMatrix<f64>) -> f64 {
    m.clone().symmetric_eigen().eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Q = sum of squared principal eigenvalues, via the dense oracle.
pub fn dense_objective(graph: &Graph, partition: &Partition) -> f64 {
    partition
        .members()
        .values()
        .map(|members| dense_top_eigenvalue(&dense_block(graph, members)).max(0.0).powi(2))
        .sum()
}

/// Random simple graph: each pair is an edge with probability `p`, weight
/// drawn from `weights` (use `1.0..=1.0` for unit weights).
pub fn random_graph(n: usize, p: f64, weights: std::ops::RangeInclusive<f64>, seed: u64) -> Graph {
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                let w = if weights.start() == weights.end() { *weights.start() } else { rng.gen_range(weights.clone()) };
                edges.push((u, v, w));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Disjoint unit-weight cliques of the given sizes and their planted partition.
pub fn disjoint_cliques(sizes: &[usize]) -> (Graph, Partition) {
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    let mut base = 0;
    for (z, &k) in sizes.iter().enumerate() {
        for i in 0..k {
            labels.push(z);
            for j in i + 1..k {
                edges.push((base + i, base + j, 1.0));
            }
        }
        base += k;
    }
    (Graph::from_edges(base, edges).unwrap(), Partition::new(labels))
}

/// All permutations of `0..n` (Heap's algorithm).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        heap(k - 1, a, out);
        for i in 0..k - 1 {
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
            heap(k - 1, a, out);
        }
    }
    let mut out = Vec::new();
    heap(n, &mut (0..n).collect(), &mut out);
    out
}
