//! Maximum-likelihood fitting of the Gaussian stochastic blockmodel with node
//! preference by coordinate ascent.
//!
//! Edge weights are modelled as `W_ij ~ N(p_i p_j [z_i = z_j], sigma^2)`. With
//! the labels fixed, the preferences of community `z` are `sqrt(lambda_z)` times
//! its unit principal eigenvector and the likelihood objective collapses to
//! `Q = sum_z lambda_z^2`. With the preferences fixed, each label update is a
//! preference-weighted label-propagation step.

use std::collections::BTreeSet;

use rand::Rng as _;

use crate::detect::{best_of_restarts, shuffled_order, Communities, DetectConfig, DetectResult, PreferenceUpdate, ScoreBoard};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::partition::Partition;
use crate::preference::{all_community_preferences, power_iterate, power_iterate_local, LocalAdjacency, PreferenceVector};
use crate::rng::Rng;
use crate::scalar::Scalar;

fn check_len<T: Scalar>(graph: &WeightedGraph<T>, partition: &Partition) -> Result<()> {
    if graph.vertex_count() == partition.len() {
        Ok(())
    } else {
        Err(Error::SizeMismatch { left: graph.vertex_count(), right: partition.len() })
    }
}

/// `sum_z lambda_z^2` over the communities of `partition`.
pub fn gsbm_objective<T: Scalar>(graph: &WeightedGraph<T>, partition: &Partition, tol: T) -> Result<T> {
    gsbm_objective_with(graph, partition, tol, crate::preference::DEFAULT_MAX_ITERS)
}

pub fn gsbm_objective_with<T: Scalar>(
    graph: &WeightedGraph<T>,
    partition: &Partition,
    tol: T,
    max_iters: usize,
) -> Result<T> {
    check_len(graph, partition)?;
    let mut q = T::zero();
    for members in partition.members().values() {
        let eig = power_iterate(graph, members, tol, max_iters)?;
        if !eig.fallback {
            q += eig.eigenvalue * eig.eigenvalue;
        }
    }
    Ok(q)
}

/// Per-vertex model preferences; fallback communities contribute `p = 0`.
fn model_preferences<T: Scalar>(n: usize, partition: &Partition, prefs: &[PreferenceVector<T>]) -> Result<Vec<T>> {
    let communities = partition.members();
    if prefs.len() != communities.len() {
        return Err(Error::InconsistentState(format!(
            "{} preference vectors for {} communities",
            prefs.len(),
            communities.len()
        )));
    }
    let mut p = vec![T::zero(); n];
    let mut seen = BTreeSet::new();
    for pv in prefs {
        let expected = communities.get(&pv.community).ok_or_else(|| {
            Error::InconsistentState(format!("community {} is not in the partition", pv.community))
        })?;
        let mut members = pv.members.clone();
        members.sort_unstable();
        if &members != expected || pv.values.len() != pv.members.len() || !seen.insert(pv.community) {
            return Err(Error::InconsistentState(format!(
                "preference vector for community {} does not match its members",
                pv.community
            )));
        }
        for (&v, x) in pv.members.iter().zip(pv.model_values()) {
            p[v] = x;
        }
    }
    Ok(p)
}

/// Maximum-likelihood noise variance
/// `sigma^2 = sum_{i,j} (W_ij - p_i p_j [z_i = z_j])^2 / n^2`
/// over all ordered pairs including `i = j`.
pub fn sigma2_mle<T: Scalar>(
    graph: &WeightedGraph<T>,
    partition: &Partition,
    preferences: &[PreferenceVector<T>],
) -> Result<T> {
    check_len(graph, partition)?;
    let n = graph.vertex_count();
    if n == 0 {
        return Ok(T::zero());
    }
    let p = model_preferences(n, partition, preferences)?;
    let labels = partition.labels();
    let two = T::lit(2.0);
    // Start from the all-pairs squared means, then correct the pairs that carry an edge.
    let mut block_sq = std::collections::BTreeMap::<usize, T>::new();
    for (i, &z) in labels.iter().enumerate() {
        *block_sq.entry(z).or_insert(T::zero()) += p[i] * p[i];
    }
    let mut total: T = block_sq.values().map(|&s| s * s).sum();
    for &(u, v, w) in graph.edges() {
        let m = if labels[u] == labels[v] { p[u] * p[v] } else { T::zero() };
        total += two * ((w - m) * (w - m) - m * m);
    }
    Ok(total / T::from_count(n * n))
}

fn vertex_preferences<T: Scalar>(n: usize, preferences: &[PreferenceVector<T>]) -> Vec<Option<T>> {
    let mut p = vec![None; n];
    for pv in preferences {
        for (&v, &x) in pv.members.iter().zip(&pv.values) {
            if v < n {
                p[v] = Some(x);
            }
        }
    }
    p
}

/// One GSBM-P label update for vertex `i` under fixed preferences:
/// `argmax_z sum_{j != i} p_j W_ij [z_j = z]` over neighbor labels and the
/// current label. Ties keep the current label, otherwise `rng` picks.
pub fn gsbm_label_update<T: Scalar>(
    graph: &WeightedGraph<T>,
    partition: &Partition,
    preferences: &[PreferenceVector<T>],
    i: usize,
    rng: &mut Rng,
) -> Result<usize> {
    check_len(graph, partition)?;
    let n = graph.vertex_count();
    if i >= n {
        return Err(Error::OutOfRange { vertex: i, n });
    }
    let p = vertex_preferences(n, preferences);
    let labels = partition.labels();
    let mut scores: Vec<(usize, T)> = Vec::new();
    for &(j, w) in graph.neighbors(i) {
        let pj = p[j].ok_or_else(|| Error::InconsistentState(format!("no preference for vertex {j}")))?;
        match scores.iter_mut().find(|(z, _)| *z == labels[j]) {
            Some(entry) => entry.1 += pj * w,
            None => scores.push((labels[j], pj * w)),
        }
    }
    let current = labels[i];
    let current_score = scores.iter().find(|(z, _)| *z == current).map_or(T::zero(), |e| e.1);
    let best = scores.iter().map(|e| e.1).fold(current_score, T::max);
    if current_score >= best {
        return Ok(current);
    }
    let maximizers: Vec<usize> = scores.iter().filter(|e| e.1 == best).map(|e| e.0).collect();
    Ok(maximizers[rng.gen_range(0..maximizers.len())])
}

/// Working state of one coordinate-ascent run.
struct GsbmRun<'g, T> {
    graph: &'g WeightedGraph<T>,
    config: &'g DetectConfig,
    tol: T,
    comms: Communities,
    /// Scoring preference per vertex (`fallback` inside fallback communities).
    pref: Vec<T>,
    /// Scoring preference of vertices in communities without internal
    /// weight: `sqrt(max |w|)`, which is 1 on unit-weight graphs and keeps
    /// every argmax unchanged when all weights are scaled.
    fallback: T,
    /// Entry of the unit principal eigenvector, used as a warm start.
    unit: Vec<T>,
    /// Principal eigenvalue per label, 0 for fallback or empty labels.
    eig: Vec<T>,
    local: Vec<usize>,
    board: ScoreBoard<T>,
}

impl<'g, T: Scalar> GsbmRun<'g, T> {
    fn new(graph: &'g WeightedGraph<T>, config: &'g DetectConfig) -> Self {
        let n = graph.vertex_count();
        let fallback = graph.edges().iter().map(|e| e.2.abs()).fold(T::zero(), T::max);
        let fallback = if fallback > T::zero() { fallback.sqrt() } else { T::one() };
        Self {
            graph,
            config,
            tol: T::lit(config.tol),
            comms: Communities::singletons(n),
            pref: vec![fallback; n],
            fallback,
            unit: vec![T::one(); n],
            eig: vec![T::zero(); n],
            local: vec![usize::MAX; n],
            board: ScoreBoard::new(n),
        }
    }

    fn refresh(&mut self, z: usize) -> Result<()> {
        let members = &self.comms.members[z];
        if members.is_empty() {
            self.eig[z] = T::zero();
            return Ok(());
        }
        for (k, &v) in members.iter().enumerate() {
            self.local[v] = k;
        }
        let local = &self.local;
        let adj = LocalAdjacency::build(self.graph, members, |j| {
            let k = local[j];
            (k != usize::MAX).then_some(k)
        });
        for &v in members {
            self.local[v] = usize::MAX;
        }
        let adj = adj?;
        let start: Vec<T> = members.iter().map(|&v| self.unit[v]).collect();
        let eig = power_iterate_local(&adj, Some(&start), self.tol, self.config.max_power_iters);
        if eig.fallback {
            self.eig[z] = T::zero();
            for &v in members {
                self.pref[v] = self.fallback;
                self.unit[v] = T::one();
            }
        } else {
            let scale = eig.eigenvalue.sqrt();
            self.eig[z] = eig.eigenvalue;
            for (&v, &x) in members.iter().zip(&eig.vector) {
                self.unit[v] = x;
                self.pref[v] = x * scale;
            }
        }
        Ok(())
    }

    fn objective(&self) -> T {
        self.eig.iter().map(|&l| l * l).sum()
    }

    fn sweep(&mut self, rng: &mut Rng) -> Result<usize> {
        let mut moves = 0;
        for i in shuffled_order(self.graph.vertex_count(), rng) {
            for &(j, w) in self.graph.neighbors(i) {
                self.board.add(self.comms.labels[j], self.pref[j] * w);
            }
            let from = self.comms.labels[i];
            let to = self.board.choose(from, rng);
            if to != from {
                self.comms.move_vertex(i, to);
                moves += 1;
                if self.config.preference_update == PreferenceUpdate::Immediate {
                    self.refresh(from)?;
                    self.refresh(to)?;
                }
            }
        }
        if self.config.preference_update == PreferenceUpdate::PerSweep {
            let labels: Vec<usize> = self.comms.nonempty().collect();
            self.eig.iter_mut().for_each(|l| *l = T::zero());
            for z in labels {
                self.refresh(z)?;
            }
        }
        Ok(moves)
    }

    fn run(mut self, rng: &mut Rng) -> Result<(Partition, Vec<T>, usize)> {
        let tol = T::lit(self.config.objective_tol);
        let mut trace: Vec<T> = Vec::new();
        let mut best: Option<(T, Vec<usize>)> = None;
        let mut iterations = 0;
        for it in 1..=self.config.max_outer_iters {
            let moves = self.sweep(rng)?;
            iterations = it;
            let q = self.objective();
            let last = trace.last().copied();
            // Sweep 1 starts from the degenerate all-singleton state, so the
            // ascent checks begin with sweep 3.
            if it >= 3 && last.is_some_and(|l| q < l - tol) {
                break;
            }
            trace.push(q);
            if best.as_ref().is_none_or(|(b, _)| q > *b) {
                best = Some((q, self.comms.labels.clone()));
            }
            if moves == 0 || (it >= 3 && last.is_some_and(|l| q <= l + tol)) {
                break;
            }
        }
        let labels = best.map_or_else(|| self.comms.labels.clone(), |(_, l)| l);
        Ok((Partition::new(labels).normalized(), trace, iterations))
    }
}

fn check_nonempty<T: Scalar>(graph: &WeightedGraph<T>) -> Result<()> {
    if graph.vertex_count() == 0 {
        return Err(Error::InvalidParameter("graph has no vertices".into()));
    }
    Ok(())
}

/// Fits GSBM-P by coordinate ascent from the all-singleton start.
///
/// Each restart sweeps the vertices in a fresh random order, applying the
/// preference-weighted label update and re-estimating preferences as
/// configured. A run stops when a sweep moves nothing, when the objective
/// stops increasing, or after `max_outer_iters` sweeps; a sweep that lowers
/// the objective is discarded. The best partition over all restarts is returned.
///
/// Negative weights are allowed between communities but raise
/// `NegativeWeight` as soon as one would fall inside a community.
pub fn detect_gsbm_p<T: Scalar>(graph: &WeightedGraph<T>, config: &DetectConfig) -> Result<DetectResult<T>> {
    check_nonempty(graph)?;
    best_of_restarts(config, |rng| {
        let (partition, trace, iterations) = GsbmRun::new(graph, config).run(rng)?;
        finish(graph, config, partition, trace, iterations)
    })
}

fn finish<T: Scalar>(
    graph: &WeightedGraph<T>,
    config: &DetectConfig,
    partition: Partition,
    objective_trace: Vec<T>,
    iterations: usize,
) -> Result<DetectResult<T>> {
    let tol = T::lit(config.tol);
    let prefs = all_community_preferences(graph, &partition, tol, config.max_power_iters)?;
    let objective = prefs.iter().filter(|p| !p.fallback).map(|p| p.eigenvalue * p.eigenvalue).sum();
    let sigma2 = sigma2_mle(graph, &partition, &prefs)?;
    Ok(DetectResult {
        community_count: partition.community_count(),
        partition,
        objective,
        objective_trace,
        sigma2: Some(sigma2),
        iterations,
    })
}
