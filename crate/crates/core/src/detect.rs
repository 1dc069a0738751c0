//! Configuration, results and sweep helpers shared by every detector.

use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::partition::Partition;
use crate::rng::{stream, Rng};
use crate::scalar::Scalar;

/// When GSBM-P node preferences are re-estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PreferenceUpdate {
    /// Refresh the two affected communities after every accepted move.
    #[default]
    Immediate,
    /// Refresh every community once per sweep.
    PerSweep,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectConfig {
    pub seed: u64,
    pub max_outer_iters: usize,
    pub restarts: usize,
    /// Power-iteration residual tolerance.
    pub tol: f64,
    pub max_power_iters: usize,
    pub preference_update: PreferenceUpdate,
    pub objective_tol: f64,
    /// Sweep cap for LPA-P.
    pub lpa_p_sweeps: usize,
    /// Exponent `m` applied to LPA-P preferences.
    pub preference_exponent: f64,
}

impl Default for DetectConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            max_outer_iters: 100,
            restarts: 1,
            tol: crate::preference::DEFAULT_TOL,
            max_power_iters: crate::preference::DEFAULT_MAX_ITERS,
            preference_update: PreferenceUpdate::Immediate,
            objective_tol: 1e-9,
            lpa_p_sweeps: 50,
            preference_exponent: 1.0,
        }
    }
}

impl DetectConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.max_outer_iters == 0 {
            return Err(Error::InvalidParameter("max_outer_iters must be at least 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidParameter("restarts must be at least 1".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidParameter("tol must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectResult<T> {
    pub partition: Partition,
    /// Objective of `partition`, recomputed from scratch.
    pub objective: T,
    /// Objective after each accepted sweep of the winning run.
    pub objective_trace: Vec<T>,
    /// Noise variance estimate; `None` for the label-propagation baselines.
    pub sigma2: Option<T>,
    /// Sweeps executed by the winning run.
    pub iterations: usize,
    pub community_count: usize,
}

/// Runs `run` once per restart on its own stream and keeps the best objective,
/// preferring the lowest restart index on ties.
pub(crate) fn best_of_restarts<T, F>(config: &DetectConfig, run: F) -> Result<DetectResult<T>>
where
    T: Scalar,
    F: Fn(&mut Rng) -> Result<DetectResult<T>> + Sync,
{
    config.validate()?;
    let results: Vec<Result<DetectResult<T>>> = (0..config.restarts as u64)
        .into_par_iter()
        .map(|r| run(&mut stream(config.seed, r)))
        .collect();
    let mut best: Option<DetectResult<T>> = None;
    for result in results {
        let result = result?;
        if best.as_ref().is_none_or(|b| result.objective > b.objective) {
            best = Some(result);
        }
    }
    Ok(best.expect("at least one restart"))
}

pub(crate) fn shuffled_order(n: usize, rng: &mut Rng) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order
}

/// Accumulates per-label scores for one vertex and applies the tie rule.
#[derive(Debug, Clone)]
pub(crate) struct ScoreBoard<T> {
    score: Vec<T>,
    touched: Vec<usize>,
    active: Vec<bool>,
    maximizers: Vec<usize>,
}

impl<T: Scalar> ScoreBoard<T> {
    pub(crate) fn new(labels: usize) -> Self {
        Self {
            score: vec![T::zero(); labels],
            touched: Vec::new(),
            active: vec![false; labels],
            maximizers: Vec::new(),
        }
    }

    pub(crate) fn add(&mut self, label: usize, x: T) {
        if !self.active[label] {
            self.active[label] = true;
            self.touched.push(label);
        }
        self.score[label] += x;
    }

    pub(crate) fn get(&self, label: usize) -> T {
        self.score[label]
    }

    /// Labels touched since the last clear, in first-touch order.
    pub(crate) fn touched(&self) -> &[usize] {
        &self.touched
    }

    pub(crate) fn clear(&mut self) {
        for &z in &self.touched {
            self.score[z] = T::zero();
            self.active[z] = false;
        }
        self.touched.clear();
    }

    /// Argmax over touched labels and `current`; keeps `current` if it attains
    /// the maximum, otherwise picks uniformly among the maximizers. Clears the board.
    pub(crate) fn choose(&mut self, current: usize, rng: &mut Rng) -> usize {
        let current_score = self.score[current];
        let best = self.touched.iter().map(|&z| self.score[z]).fold(current_score, T::max);
        let chosen = if current_score >= best {
            current
        } else {
            self.maximizers.clear();
            self.maximizers.extend(self.touched.iter().copied().filter(|&z| self.score[z] == best));
            self.maximizers[rng.gen_range(0..self.maximizers.len())]
        };
        self.clear();
        chosen
    }

    /// Like [`choose`](Self::choose) but only returns the maximizer set.
    #[cfg(test)]
    pub(crate) fn argmax_set(&mut self, current: usize) -> Vec<usize> {
        let current_score = self.score[current];
        let best = self.touched.iter().map(|&z| self.score[z]).fold(current_score, T::max);
        let mut out: Vec<usize> = self.touched.iter().copied().filter(|&z| self.score[z] == best).collect();
        if current_score == best && !out.contains(&current) {
            out.push(current);
        }
        out.sort_unstable();
        self.clear();
        out
    }
}

/// Mutable label state with a member index, labels drawn from `0..n`.
#[derive(Debug, Clone)]
pub(crate) struct Communities {
    pub(crate) labels: Vec<usize>,
    pub(crate) members: Vec<Vec<usize>>,
    slot: Vec<usize>,
}

impl Communities {
    pub(crate) fn singletons(n: usize) -> Self {
        Self { labels: (0..n).collect(), members: (0..n).map(|i| vec![i]).collect(), slot: vec![0; n] }
    }

    /// Adopts an existing partition, compacting its labels into `0..k`.
    pub(crate) fn from_partition(partition: &Partition) -> Self {
        let n = partition.len();
        let labels = partition.normalized().labels().to_vec();
        let mut members = vec![Vec::new(); n];
        let mut slot = vec![0; n];
        for (i, &z) in labels.iter().enumerate() {
            slot[i] = members[z].len();
            members[z].push(i);
        }
        Self { labels, members, slot }
    }

    pub(crate) fn size(&self, z: usize) -> usize {
        self.members[z].len()
    }

    pub(crate) fn move_vertex(&mut self, i: usize, to: usize) {
        let from = self.labels[i];
        let k = self.slot[i];
        self.members[from].swap_remove(k);
        if let Some(&moved) = self.members[from].get(k) {
            self.slot[moved] = k;
        }
        self.slot[i] = self.members[to].len();
        self.members[to].push(i);
        self.labels[i] = to;
    }

    pub(crate) fn nonempty(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.members.len()).filter(|&z| !self.members[z].is_empty())
    }

    pub(crate) fn to_partition_unnormalized(&self) -> Partition {
        Partition::new(self.labels.clone())
    }

    pub(crate) fn to_partition(&self) -> Partition {
        Partition::new(self.labels.clone()).normalized()
    }
}

/// Folds every community smaller than `min_size` into the major community
/// (size at least `min_size`) it shares the most weight with; ties go to the
/// lower label. Small communities with no link to a major one are kept.
pub fn merge_small_communities<T: Scalar>(
    graph: &WeightedGraph<T>,
    partition: &Partition,
    min_size: usize,
) -> Result<Partition> {
    if graph.vertex_count() != partition.len() {
        return Err(Error::SizeMismatch { left: graph.vertex_count(), right: partition.len() });
    }
    let is_major = |z: usize| partition.size_of(z) >= min_size;
    let mut target = BTreeMap::new();
    for (z, members) in partition.members() {
        if is_major(z) {
            continue;
        }
        let mut links = BTreeMap::<usize, T>::new();
        for &u in &members {
            for &(v, w) in graph.neighbors(u) {
                let y = partition.label(v);
                if is_major(y) {
                    *links.entry(y).or_insert(T::zero()) += w;
                }
            }
        }
        let best = links.into_iter().fold(None, |best: Option<(usize, T)>, (y, w)| match best {
            Some((_, bw)) if bw >= w => best,
            _ => Some((y, w)),
        });
        if let Some((y, _)) = best {
            target.insert(z, y);
        }
    }
    let labels = partition.labels().iter().map(|z| *target.get(z).unwrap_or(z)).collect();
    Ok(Partition::new(labels).normalized())
}
