//! Label propagation baselines: classic LPA and LPA with intra-community
//! random-walk node preference (LPA-P).

use crate::detect::{best_of_restarts, shuffled_order, Communities, DetectConfig, DetectResult, ScoreBoard};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::partition::Partition;
use crate::rng::Rng;
use crate::scalar::Scalar;

/// `Q_LPA = sum_{i,j} W_ij [z_i = z_j]`, twice the internal edge weight.
pub fn lpa_objective<T: Scalar>(graph: &WeightedGraph<T>, partition: &Partition) -> T {
    let labels = partition.labels();
    graph
        .edges()
        .iter()
        .filter(|&&(u, v, _)| labels[u] == labels[v])
        .map(|&(_, _, w)| w + w)
        .sum()
}

/// `sum_z sum_{i,j in z} p_i p_j W_ij` for per-vertex preferences `p`.
pub fn preference_weighted_objective<T: Scalar>(graph: &WeightedGraph<T>, partition: &Partition, p: &[T]) -> T {
    let labels = partition.labels();
    graph
        .edges()
        .iter()
        .filter(|&&(u, v, _)| labels[u] == labels[v])
        .map(|&(u, v, w)| T::lit(2.0) * p[u] * p[v] * w)
        .sum()
}

fn lpa_sweep<T: Scalar>(
    graph: &WeightedGraph<T>,
    comms: &mut Communities,
    board: &mut ScoreBoard<T>,
    rng: &mut Rng,
) -> usize {
    let mut moves = 0;
    for i in shuffled_order(graph.vertex_count(), rng) {
        for &(j, w) in graph.neighbors(i) {
            board.add(comms.labels[j], w);
        }
        let from = comms.labels[i];
        let to = board.choose(from, rng);
        if to != from {
            comms.move_vertex(i, to);
            moves += 1;
        }
    }
    moves
}

fn run_lpa<T: Scalar>(
    graph: &WeightedGraph<T>,
    config: &DetectConfig,
    mut comms: Communities,
    rng: &mut Rng,
) -> DetectResult<T> {
    let mut board = ScoreBoard::new(graph.vertex_count());
    let mut trace = Vec::new();
    let mut iterations = 0;
    for it in 1..=config.max_outer_iters {
        let moves = lpa_sweep(graph, &mut comms, &mut board, rng);
        iterations = it;
        trace.push(lpa_objective(graph, &comms.to_partition()));
        if moves == 0 {
            break;
        }
    }
    let partition = comms.to_partition();
    DetectResult {
        objective: lpa_objective(graph, &partition),
        community_count: partition.community_count(),
        partition,
        objective_trace: trace,
        sigma2: None,
        iterations,
    }
}

fn check_nonempty<T: Scalar>(graph: &WeightedGraph<T>) -> Result<()> {
    if graph.vertex_count() == 0 {
        Err(Error::InvalidParameter("graph has no vertices".into()))
    } else {
        Ok(())
    }
}

/// Asynchronous label propagation from the all-singleton start.
pub fn detect_lpa<T: Scalar>(graph: &WeightedGraph<T>, config: &DetectConfig) -> Result<DetectResult<T>> {
    check_nonempty(graph)?;
    best_of_restarts(config, |rng| Ok(run_lpa(graph, config, Communities::singletons(graph.vertex_count()), rng)))
}

/// Label propagation started from `initial` instead of singletons.
pub fn detect_lpa_from<T: Scalar>(
    graph: &WeightedGraph<T>,
    config: &DetectConfig,
    initial: &Partition,
) -> Result<DetectResult<T>> {
    check_nonempty(graph)?;
    if initial.len() != graph.vertex_count() {
        return Err(Error::SizeMismatch { left: graph.vertex_count(), right: initial.len() });
    }
    best_of_restarts(config, |rng| Ok(run_lpa(graph, config, Communities::from_partition(initial), rng)))
}

/// Random-walk preference state kept current under single-vertex moves.
struct WalkState<T> {
    /// Weight from each vertex into its own community.
    inner: Vec<T>,
    /// Ordered-pair internal weight per label.
    total: Vec<T>,
    exponent: T,
    floor: T,
}

impl<T: Scalar> WalkState<T> {
    fn new(graph: &WeightedGraph<T>, comms: &Communities, exponent: T) -> Self {
        let scale = graph.edges().iter().map(|e| e.2.abs()).fold(T::zero(), T::max);
        let mut state = Self {
            inner: vec![T::zero(); graph.vertex_count()],
            total: vec![T::zero(); graph.vertex_count()],
            exponent,
            floor: T::epsilon() * T::lit(1024.0) * scale,
        };
        state.resync(graph, comms);
        state
    }

    /// Recomputes every sum from scratch, discarding accumulated rounding.
    fn resync(&mut self, graph: &WeightedGraph<T>, comms: &Communities) {
        self.inner.iter_mut().for_each(|x| *x = T::zero());
        self.total.iter_mut().for_each(|x| *x = T::zero());
        for &(u, v, w) in graph.edges() {
            if comms.labels[u] == comms.labels[v] {
                self.inner[u] += w;
                self.inner[v] += w;
                self.total[comms.labels[u]] += w + w;
            }
        }
    }

    /// Stationary probability of `j` inside its community, raised to the exponent.
    fn preference(&self, j: usize, comms: &Communities) -> T {
        let z = comms.labels[j];
        let p = if self.total[z] > self.floor {
            (self.inner[j] / self.total[z]).max(T::zero())
        } else {
            T::one() / T::from_count(comms.size(z))
        };
        if self.exponent == T::one() {
            p
        } else {
            p.powf(self.exponent)
        }
    }

    /// Applies a move of `i` from `from` to `to`.
    fn apply(&mut self, graph: &WeightedGraph<T>, comms: &Communities, i: usize, from: usize, to: usize) {
        let mut k_from = T::zero();
        let mut k_to = T::zero();
        for &(j, w) in graph.neighbors(i) {
            let z = comms.labels[j];
            if z == from {
                self.inner[j] -= w;
                k_from += w;
            } else if z == to {
                self.inner[j] += w;
                k_to += w;
            }
        }
        self.inner[i] = k_to;
        self.total[from] -= k_from + k_from;
        self.total[to] += k_to + k_to;
    }

    fn values(&self, comms: &Communities) -> Vec<T> {
        (0..self.inner.len()).map(|j| self.preference(j, comms)).collect()
    }
}

fn run_lpa_p<T: Scalar>(graph: &WeightedGraph<T>, config: &DetectConfig, rng: &mut Rng) -> DetectResult<T> {
    let n = graph.vertex_count();
    let mut comms = Communities::singletons(n);
    let mut walk = WalkState::new(graph, &comms, T::lit(config.preference_exponent));
    let mut board = ScoreBoard::new(n);
    let mut trace = Vec::new();
    let mut iterations = 0;
    for it in 1..=config.lpa_p_sweeps.max(1) {
        let mut moves = 0;
        for i in shuffled_order(n, rng) {
            for &(j, w) in graph.neighbors(i) {
                board.add(comms.labels[j], walk.preference(j, &comms) * w);
            }
            let from = comms.labels[i];
            let to = board.choose(from, rng);
            if to != from {
                // Members still carry their old labels while the sums are updated.
                walk.apply(graph, &comms, i, from, to);
                comms.move_vertex(i, to);
                moves += 1;
            }
        }
        walk.resync(graph, &comms);
        iterations = it;
        trace.push(preference_weighted_objective(graph, &comms.to_partition_unnormalized(), &walk.values(&comms)));
        if moves == 0 {
            break;
        }
    }
    let partition = comms.to_partition();
    DetectResult {
        objective: *trace.last().expect("at least one sweep"),
        community_count: partition.community_count(),
        partition,
        objective_trace: trace,
        sigma2: None,
        iterations,
    }
}

/// LPA-P: label propagation weighted by each neighbor's stationary
/// random-walk probability inside its community, refreshed after every move.
/// Runs at most `lpa_p_sweeps` sweeps and returns the final partition.
pub fn detect_lpa_p<T: Scalar>(graph: &WeightedGraph<T>, config: &DetectConfig) -> Result<DetectResult<T>> {
    check_nonempty(graph)?;
    if let Some(&(u, v, _)) = graph.edges().iter().find(|e| e.2 < T::zero()) {
        return Err(Error::NegativeWeight { u, v });
    }
    best_of_restarts(config, |rng| Ok(run_lpa_p(graph, config, rng)))
}
