//! Per-community node preferences.
//!
//! GSBM-P preferences are `sqrt(lambda_z) * v_z`, where `(lambda_z, v_z)` is the
//! principal eigenpair of the community's internal adjacency matrix. LPA-P
//! preferences are the stationary distribution of a random walk confined to
//! the community.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::partition::Partition;
use crate::scalar::Scalar;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITERS: usize = 200;
/// Principal eigenvalues at or below this are treated as "no internal edges".
pub const FALLBACK_EPS: f64 = 1e-12;

/// Internal adjacency of one community in compressed row form, indexed by
/// position in `members`.
#[derive(Debug, Clone)]
pub(crate) struct LocalAdjacency<T> {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<T>,
}

impl<T: Scalar> LocalAdjacency<T> {
    /// `local(j)` maps a global vertex to its position in the community, if it is a member.
    pub(crate) fn build<F>(graph: &WeightedGraph<T>, members: &[usize], local: F) -> Result<Self>
    where
        F: Fn(usize) -> Option<usize>,
    {
        let mut offsets = Vec::with_capacity(members.len() + 1);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for &v in members {
            for &(j, w) in graph.neighbors(v) {
                if let Some(k) = local(j) {
                    if w < T::zero() {
                        return Err(Error::NegativeWeight { u: v.min(j), v: v.max(j) });
                    }
                    targets.push(k);
                    weights.push(w);
                }
            }
            offsets.push(targets.len());
        }
        Ok(Self { offsets, targets, weights })
    }

    pub(crate) fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    fn multiply(&self, x: &[T], out: &mut [T]) {
        for (row, o) in out.iter_mut().enumerate() {
            let span = self.offsets[row]..self.offsets[row + 1];
            *o = self.targets[span.clone()]
                .iter()
                .zip(&self.weights[span])
                .map(|(&k, &w)| w * x[k])
                .sum();
        }
    }

    /// Row sums: intra-community strength of each member.
    pub(crate) fn row_sums(&self) -> Vec<T> {
        (0..self.len())
            .map(|row| self.weights[self.offsets[row]..self.offsets[row + 1]].iter().copied().sum())
            .collect()
    }

    fn has_positive_weight(&self) -> bool {
        self.weights.iter().any(|&w| w > T::zero())
    }
}

/// Outcome of a principal-eigenpair computation.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerIteration<T> {
    pub eigenvalue: T,
    /// L2-normalized, entrywise nonnegative.
    pub vector: Vec<T>,
    pub converged: bool,
    pub iterations: usize,
    /// Set when the community has no positive internal weight; `eigenvalue` is 0.
    pub fallback: bool,
}

fn normalize<T: Scalar>(v: &mut [T]) -> T {
    let norm = v.iter().map(|&x| x * x).sum::<T>().sqrt();
    if norm > T::zero() {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

/// Shifted power iteration on a nonnegative symmetric matrix.
///
/// Iterates `v <- (A + s I) v / |.|` with `s = lambda / 2`, which keeps the
/// Perron root strictly dominant even for bipartite communities. Stops once
/// `|A v - lambda v| <= tol * max(lambda, 1)` with `lambda = v' A v`.
pub(crate) fn power_iterate_local<T: Scalar>(
    adj: &LocalAdjacency<T>,
    start: Option<&[T]>,
    tol: T,
    max_iters: usize,
) -> PowerIteration<T> {
    let k = adj.len();
    if k == 0 || !adj.has_positive_weight() {
        let u = T::one() / T::from_count(k.max(1)).sqrt();
        return PowerIteration {
            eigenvalue: T::zero(),
            vector: vec![u; k],
            converged: true,
            iterations: 0,
            fallback: true,
        };
    }
    let tol = tol.max(T::epsilon() * T::lit(64.0));
    let uniform = T::one() / T::from_count(k).sqrt();
    let mut v: Vec<T> = match start {
        // Blend in the uniform vector so every component keeps a positive entry.
        Some(s) if s.len() == k => s.iter().map(|&x| x.max(T::zero()) + uniform * T::lit(1e-3)).collect(),
        _ => vec![uniform; k],
    };
    normalize(&mut v);
    let mut w = vec![T::zero(); k];
    let mut iterations = 0;
    let (lambda, converged) = loop {
        adj.multiply(&v, &mut w);
        let lambda = v.iter().zip(&w).map(|(&a, &b)| a * b).sum::<T>().max(T::zero());
        let residual = v
            .iter()
            .zip(&w)
            .map(|(&a, &b)| {
                let d = b - lambda * a;
                d * d
            })
            .sum::<T>()
            .sqrt();
        if residual <= tol * lambda.max(T::one()) {
            break (lambda, true);
        }
        if iterations >= max_iters {
            break (lambda, false);
        }
        let shift = lambda * T::lit(0.5);
        for (a, &b) in v.iter_mut().zip(&w) {
            *a = b + shift * *a;
        }
        normalize(&mut v);
        iterations += 1;
    };
    PowerIteration { eigenvalue: lambda, vector: v, converged, iterations, fallback: lambda <= T::lit(FALLBACK_EPS) }
}

fn index_of(members: &[usize]) -> HashMap<usize, usize> {
    members.iter().enumerate().map(|(k, &v)| (v, k)).collect()
}

/// Principal eigenpair of the adjacency submatrix induced by `members`.
///
/// Returns `NegativeWeight` if any internal edge is negative. A community
/// without internal edges yields `eigenvalue = 0` with `fallback = true`.
pub fn power_iterate<T: Scalar>(
    graph: &WeightedGraph<T>,
    members: &[usize],
    tol: T,
    max_iters: usize,
) -> Result<PowerIteration<T>> {
    if members.is_empty() {
        return Err(Error::InvalidParameter("community has no members".into()));
    }
    let n = graph.vertex_count();
    if let Some(&v) = members.iter().find(|&&v| v >= n) {
        return Err(Error::OutOfRange { vertex: v, n });
    }
    let index = index_of(members);
    let adj = LocalAdjacency::build(graph, members, |j| index.get(&j).copied())?;
    Ok(power_iterate_local(&adj, None, tol, max_iters))
}

/// Node preferences of one community together with its principal eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceVector<T> {
    pub community: usize,
    pub members: Vec<usize>,
    /// One value per entry of `members`.
    pub values: Vec<T>,
    pub eigenvalue: T,
    pub fallback: bool,
    pub converged: bool,
}

impl<T: Scalar> PreferenceVector<T> {
    pub(crate) fn from_eigenpair(community: usize, members: Vec<usize>, eig: PowerIteration<T>) -> Self {
        let values = if eig.fallback {
            vec![T::one(); members.len()]
        } else {
            let scale = eig.eigenvalue.sqrt();
            eig.vector.iter().map(|&x| x * scale).collect()
        };
        Self {
            community,
            members,
            values,
            eigenvalue: if eig.fallback { T::zero() } else { eig.eigenvalue },
            fallback: eig.fallback,
            converged: eig.converged,
        }
    }

    /// Preferences as used in likelihood sums: all zero for a fallback community.
    pub fn model_values(&self) -> Vec<T> {
        if self.fallback {
            vec![T::zero(); self.values.len()]
        } else {
            self.values.clone()
        }
    }

    pub fn value_of(&self, vertex: usize) -> Option<T> {
        self.members.iter().position(|&v| v == vertex).map(|k| self.values[k])
    }
}

fn checked_members(partition: &Partition, z: usize) -> Result<Vec<usize>> {
    let members = partition.members_of(z);
    if members.is_empty() {
        Err(Error::UnknownLabel { label: z })
    } else {
        Ok(members)
    }
}

fn check_len<T: Scalar>(graph: &WeightedGraph<T>, partition: &Partition) -> Result<()> {
    if graph.vertex_count() == partition.len() {
        Ok(())
    } else {
        Err(Error::SizeMismatch { left: graph.vertex_count(), right: partition.len() })
    }
}

/// GSBM-P preferences for community `z`: `sqrt(lambda_z)` times the unit
/// principal eigenvector, or all ones when the community has no internal edges.
pub fn community_preferences<T: Scalar>(
    graph: &WeightedGraph<T>,
    partition: &Partition,
    z: usize,
    tol: T,
    max_iters: usize,
) -> Result<PreferenceVector<T>> {
    check_len(graph, partition)?;
    let members = checked_members(partition, z)?;
    let eig = power_iterate(graph, &members, tol, max_iters)?;
    Ok(PreferenceVector::from_eigenpair(z, members, eig))
}

/// Preferences for every community of `partition`, in label order.
pub fn all_community_preferences<T: Scalar>(
    graph: &WeightedGraph<T>,
    partition: &Partition,
    tol: T,
    max_iters: usize,
) -> Result<Vec<PreferenceVector<T>>> {
    check_len(graph, partition)?;
    partition
        .members()
        .into_iter()
        .map(|(z, members)| {
            let eig = power_iterate(graph, &members, tol, max_iters)?;
            Ok(PreferenceVector::from_eigenpair(z, members, eig))
        })
        .collect()
}

/// Stationary distribution of the random walk restricted to community `z`.
///
/// For an undirected community this is the intra-community strength divided
/// by its total, which is exactly the left eigenvector of the walk matrix for
/// eigenvalue 1. Communities without internal weight get the uniform `1 / n_z`.
pub fn random_walk_preferences<T: Scalar>(
    graph: &WeightedGraph<T>,
    partition: &Partition,
    z: usize,
) -> Result<PreferenceVector<T>> {
    check_len(graph, partition)?;
    let members = checked_members(partition, z)?;
    let index = index_of(&members);
    let adj = LocalAdjacency::build(graph, &members, |j| index.get(&j).copied())?;
    let strengths = adj.row_sums();
    let total: T = strengths.iter().copied().sum();
    let fallback = total <= T::zero();
    let values = if fallback {
        vec![T::one() / T::from_count(members.len()); members.len()]
    } else {
        strengths.iter().map(|&k| k / total).collect()
    };
    Ok(PreferenceVector {
        community: z,
        members,
        values,
        eigenvalue: if fallback { T::zero() } else { T::one() },
        fallback,
        converged: true,
    })
}
