//! Constrained GSBM: one shared preference `sqrt(mu_z)` per community.
//!
//! With per-community maximum-likelihood `mu_z = S_z / n_z^2` the objective is
//! `sum_z S_z^2 / n_z^2`, where `S_z` is the ordered-pair internal weight.
//! With a shared fixed `mu` it becomes the constant Potts form
//! `mu * (2 Q_LPA - mu * sum_z n_z^2)`, and `mu` acts as a resolution parameter.

use crate::detect::{best_of_restarts, shuffled_order, Communities, DetectConfig, DetectResult, ScoreBoard};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::partition::Partition;
use crate::rng::Rng;
use crate::scalar::Scalar;

use rand::Rng as _;

/// Ordered-pair internal weight `S_z` and size `n_z` per label.
fn block_sums<T: Scalar>(graph: &WeightedGraph<T>, labels: &[usize]) -> (Vec<T>, Vec<usize>) {
    let k = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut s = vec![T::zero(); k];
    let mut n = vec![0; k];
    for &z in labels {
        n[z] += 1;
    }
    for &(u, v, w) in graph.edges() {
        if labels[u] == labels[v] {
            s[labels[u]] += w + w;
        }
    }
    (s, n)
}

#[derive(Debug, Clone, Copy)]
enum Mode<T> {
    Mle,
    Fixed(T),
}

impl<T: Scalar> Mode<T> {
    fn from_mu(mu: Option<T>) -> Result<Self> {
        match mu {
            None => Ok(Mode::Mle),
            Some(m) if m >= T::zero() && m.is_finite() => Ok(Mode::Fixed(m)),
            Some(m) => Err(Error::InvalidParameter(format!("mu must be finite and nonnegative, got {m}"))),
        }
    }

    /// Community term of the objective.
    fn term(self, s: T, n: usize) -> T {
        match self {
            Mode::Mle if n == 0 => T::zero(),
            Mode::Mle => {
                let nn = T::from_count(n * n);
                s * s / nn
            }
            Mode::Fixed(mu) => mu * (s + s - mu * T::from_count(n * n)),
        }
    }

    /// Term used to rank moves. For fixed `mu` this is the objective divided
    /// by `mu`, so `mu = 0` climbs `Q_LPA`.
    fn rank_term(self, s: T, n: usize) -> T {
        match self {
            Mode::Mle => self.term(s, n),
            Mode::Fixed(mu) => s + s - mu * T::from_count(n * n),
        }
    }

    fn mean(self, s: T, n: usize) -> T {
        match self {
            Mode::Mle if n == 0 => T::zero(),
            Mode::Mle => s / T::from_count(n * n),
            Mode::Fixed(mu) => mu,
        }
    }
}

/// Constrained objective of `partition`; `mu = None` uses the per-community MLE.
pub fn constrained_objective<T: Scalar>(graph: &WeightedGraph<T>, partition: &Partition, mu: Option<T>) -> Result<T> {
    if graph.vertex_count() != partition.len() {
        return Err(Error::SizeMismatch { left: graph.vertex_count(), right: partition.len() });
    }
    let mode = Mode::from_mu(mu)?;
    let (s, n) = block_sums(graph, partition.labels());
    Ok(s.iter().zip(&n).map(|(&s, &n)| mode.term(s, n)).sum())
}

/// `sigma^2` under the constrained model, means `mu_z` inside communities
/// (diagonal included) and 0 between them.
pub fn constrained_sigma2<T: Scalar>(graph: &WeightedGraph<T>, partition: &Partition, mu: Option<T>) -> Result<T> {
    let mode = Mode::from_mu(mu)?;
    let n = graph.vertex_count();
    if n == 0 {
        return Ok(T::zero());
    }
    let labels = partition.labels();
    let (s, sizes) = block_sums(graph, labels);
    let means: Vec<T> = s.iter().zip(&sizes).map(|(&s, &k)| mode.mean(s, k)).collect();
    let mut total: T = means.iter().zip(&sizes).map(|(&m, &k)| m * m * T::from_count(k * k)).sum();
    for &(u, v, w) in graph.edges() {
        let m = if labels[u] == labels[v] { means[labels[u]] } else { T::zero() };
        total += T::lit(2.0) * ((w - m) * (w - m) - m * m);
    }
    Ok(total / T::from_count(n * n))
}

struct ConstrainedRun<'g, T> {
    graph: &'g WeightedGraph<T>,
    mode: Mode<T>,
    comms: Communities,
    s: Vec<T>,
    free: Vec<usize>,
    board: ScoreBoard<T>,
    candidates: Vec<(usize, T)>,
}

impl<'g, T: Scalar> ConstrainedRun<'g, T> {
    fn new(graph: &'g WeightedGraph<T>, mode: Mode<T>) -> Self {
        let n = graph.vertex_count();
        Self {
            graph,
            mode,
            comms: Communities::singletons(n),
            s: vec![T::zero(); n],
            free: Vec::new(),
            board: ScoreBoard::new(n),
            candidates: Vec::new(),
        }
    }

    fn objective(&self) -> T {
        self.comms.nonempty().map(|z| self.mode.term(self.s[z], self.comms.size(z))).sum()
    }

    /// Rank-term gain of moving a vertex with links `k_from`, `k_to` between communities.
    fn gain(&self, from: usize, k_from: T, to: Option<(usize, T)>) -> T {
        let m = self.mode;
        let n_from = self.comms.size(from);
        let two = T::lit(2.0);
        let (s_to, n_to, k_to) = match to {
            Some((z, k)) => (self.s[z], self.comms.size(z), k),
            None => (T::zero(), 0, T::zero()),
        };
        m.rank_term(self.s[from] - two * k_from, n_from - 1) + m.rank_term(s_to + two * k_to, n_to + 1)
            - m.rank_term(self.s[from], n_from)
            - m.rank_term(s_to, n_to)
    }

    fn sweep(&mut self, rng: &mut Rng) -> usize {
        let mut moves = 0;
        for i in shuffled_order(self.graph.vertex_count(), rng) {
            let from = self.comms.labels[i];
            for &(j, w) in self.graph.neighbors(i) {
                self.board.add(self.comms.labels[j], w);
            }
            let k_from = self.board.get(from);
            self.candidates.clear();
            for idx in 0..self.board.touched().len() {
                let z = self.board.touched()[idx];
                if z != from {
                    let k = self.board.get(z);
                    self.candidates.push((z, self.gain(from, k_from, Some((z, k)))));
                }
            }
            if self.comms.size(from) > 1 {
                let z = *self.free.last().expect("an empty label exists while some community has two members");
                self.candidates.push((z, self.gain(from, k_from, None)));
            }
            let scale = self.mode.rank_term(self.s[from], self.comms.size(from)).abs() + T::one();
            let threshold = T::epsilon() * T::lit(64.0) * scale;
            let best = self.candidates.iter().map(|c| c.1).fold(T::neg_infinity(), T::max);
            if best > threshold {
                let ties: Vec<usize> = self.candidates.iter().filter(|c| c.1 == best).map(|c| c.0).collect();
                let to = ties[rng.gen_range(0..ties.len())];
                let k_to = if self.free.last() == Some(&to) {
                    self.free.pop();
                    T::zero()
                } else {
                    self.board.get(to)
                };
                let two = T::lit(2.0);
                self.s[from] -= two * k_from;
                self.s[to] += two * k_to;
                self.comms.move_vertex(i, to);
                if self.comms.size(from) == 0 {
                    self.s[from] = T::zero();
                    self.free.push(from);
                }
                moves += 1;
            }
            self.board.clear();
        }
        moves
    }

    fn run(mut self, rng: &mut Rng, config: &DetectConfig) -> (Partition, Vec<T>, usize) {
        let tol = T::lit(config.objective_tol);
        let mut trace = Vec::new();
        let mut iterations = 0;
        for it in 1..=config.max_outer_iters {
            let moves = self.sweep(rng);
            iterations = it;
            let q = self.objective();
            let last = trace.last().copied();
            trace.push(q);
            if moves == 0 || last.is_some_and(|l| q <= l + tol) {
                break;
            }
        }
        (self.comms.to_partition(), trace, iterations)
    }
}

/// Local-moving maximization of the constrained objective from all singletons.
///
/// A vertex moves to the neighboring (or a fresh, empty) community with the
/// largest objective gain, and only when that gain is positive. `mu = None`
/// fits `mu_z` per community; `Some(mu)` runs the constant Potts objective and
/// accepts weights of any sign.
pub fn detect_constrained<T: Scalar>(
    graph: &WeightedGraph<T>,
    config: &DetectConfig,
    mu: Option<T>,
) -> Result<DetectResult<T>> {
    if graph.vertex_count() == 0 {
        return Err(Error::InvalidParameter("graph has no vertices".into()));
    }
    let mode = Mode::from_mu(mu)?;
    best_of_restarts(config, |rng| {
        let (partition, objective_trace, iterations) = ConstrainedRun::new(graph, mode).run(rng, config);
        Ok(DetectResult {
            objective: constrained_objective(graph, &partition, mu)?,
            sigma2: Some(constrained_sigma2(graph, &partition, mu)?),
            community_count: partition.community_count(),
            partition,
            objective_trace,
            iterations,
        })
    })
}
