//! Seeded synthetic networks: Erdős–Rényi graphs, rings of cliques, samples
//! from the GSBM-P model and planted-partition Gaussian graphs.

use rand::Rng as _;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::partition::Partition;
use crate::rng::rng_from_seed;
use crate::scalar::Scalar;

/// Sampled weights below this magnitude are left out of the edge list.
pub const WEIGHT_EPS: f64 = 1e-12;

/// `G(n, p)` with `p = avg_degree / (n - 1)` and unit weights.
pub fn gen_er<T: Scalar>(n: usize, avg_degree: f64, seed: u64) -> Result<WeightedGraph<T>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need n >= 2, got {n}")));
    }
    if !(avg_degree > 0.0 && avg_degree <= (n - 1) as f64) {
        return Err(Error::InvalidParameter(format!("average degree {avg_degree} outside (0, {}]", n - 1)));
    }
    let p = avg_degree / (n - 1) as f64;
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if p >= 1.0 || rng.gen::<f64>() < p {
                edges.push((u, v, T::one()));
            }
        }
    }
    WeightedGraph::from_edges(n, edges)
}

/// `cliques` complete graphs of `clique_size` unit-weight vertices, vertex 0
/// of clique `t` linked to vertex 0 of clique `t + 1 (mod cliques)`.
pub fn gen_ring_of_cliques<T: Scalar>(cliques: usize, clique_size: usize) -> Result<(WeightedGraph<T>, Partition)> {
    if cliques < 3 || clique_size < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 cliques of at least 3 vertices, got {cliques} x {clique_size}"
        )));
    }
    let n = cliques * clique_size;
    let mut edges = Vec::with_capacity(cliques * (clique_size * (clique_size - 1) / 2 + 1));
    for t in 0..cliques {
        let base = t * clique_size;
        for i in 0..clique_size {
            for j in i + 1..clique_size {
                edges.push((base + i, base + j, T::one()));
            }
        }
        edges.push((base, ((t + 1) % cliques) * clique_size, T::one()));
    }
    let labels = (0..n).map(|v| v / clique_size).collect();
    Ok((WeightedGraph::from_edges(n, edges)?, Partition::new(labels)))
}

fn push_sample<T: Scalar>(edges: &mut Vec<(usize, usize, T)>, u: usize, v: usize, w: f64) {
    if w.abs() >= WEIGHT_EPS {
        edges.push((u, v, T::lit(w)));
    }
}

fn normal(sigma: f64) -> Result<Option<Normal<f64>>> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!("sigma must be finite and nonnegative, got {sigma}")));
    }
    Ok((sigma > 0.0).then(|| Normal::new(0.0, sigma).expect("valid sigma")))
}

/// Draws `W_ij ~ N(p_i p_j [z_i = z_j], sigma^2)` for every pair `i < j`.
/// `preferences` holds one value per vertex.
pub fn sample_gsbm<T: Scalar>(
    partition: &Partition,
    preferences: &[T],
    sigma: f64,
    seed: u64,
) -> Result<WeightedGraph<T>> {
    let n = partition.len();
    if preferences.len() != n {
        return Err(Error::SizeMismatch { left: n, right: preferences.len() });
    }
    if preferences.iter().any(|&p| p.is_nan() || p < T::zero()) {
        return Err(Error::InvalidParameter("preferences must be nonnegative".into()));
    }
    let noise = normal(sigma)?;
    let p: Vec<f64> = preferences.iter().map(|x| x.as_f64()).collect();
    let labels = partition.labels();
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let mean = if labels[u] == labels[v] { p[u] * p[v] } else { 0.0 };
            let w = mean + noise.map_or(0.0, |d| d.sample(&mut rng));
            push_sample(&mut edges, u, v, w);
        }
    }
    WeightedGraph::from_edges(n, edges)
}

/// Block sizes for `n` vertices in `k` blocks, the remainder spread one per block.
pub fn block_sizes(n: usize, k: usize) -> Vec<usize> {
    (0..k).map(|b| n / k + usize::from(b < n % k)).collect()
}

/// Equal-size planted blocks with `N(w_in, sigma^2)` weights inside and
/// `N(w_out, sigma^2)` between. Negative draws are kept.
pub fn gen_planted<T: Scalar>(
    n: usize,
    communities: usize,
    w_in: f64,
    w_out: f64,
    sigma: f64,
    seed: u64,
) -> Result<(WeightedGraph<T>, Partition)> {
    if communities == 0 || communities > n {
        return Err(Error::InvalidParameter(format!("cannot split {n} vertices into {communities} blocks")));
    }
    if !(w_in > w_out && w_out >= 0.0) {
        return Err(Error::InvalidParameter(format!("need w_in > w_out >= 0, got {w_in}, {w_out}")));
    }
    let noise = normal(sigma)?;
    let mut labels = Vec::with_capacity(n);
    for (b, size) in block_sizes(n, communities).into_iter().enumerate() {
        labels.extend(std::iter::repeat_n(b, size));
    }
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let mean = if labels[u] == labels[v] { w_in } else { w_out };
            let w = mean + noise.map_or(0.0, |d| d.sample(&mut rng));
            push_sample(&mut edges, u, v, w);
        }
    }
    Ok((WeightedGraph::from_edges(n, edges)?, Partition::new(labels)))
}

/// A seeded generator invocation.
#[derive(Debug, Clone, PartialEq)]
pub enum GenSpec {
    Er { n: usize, avg_degree: f64, seed: u64 },
    RingOfCliques { cliques: usize, clique_size: usize },
    /// Consecutive blocks of `sizes`, one preference per vertex.
    GsbmSample { sizes: Vec<usize>, preferences: Vec<f64>, sigma: f64, seed: u64 },
    Planted { n: usize, communities: usize, w_in: f64, w_out: f64, sigma: f64, seed: u64 },
}

impl GenSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            GenSpec::Er { .. } => "er",
            GenSpec::RingOfCliques { .. } => "ring",
            GenSpec::GsbmSample { .. } => "gsbm",
            GenSpec::Planted { .. } => "planted",
        }
    }

    /// The graph and, for kinds with planted structure, its partition.
    pub fn generate<T: Scalar>(&self) -> Result<(WeightedGraph<T>, Option<Partition>)> {
        match self {
            GenSpec::Er { n, avg_degree, seed } => Ok((gen_er(*n, *avg_degree, *seed)?, None)),
            GenSpec::RingOfCliques { cliques, clique_size } => {
                gen_ring_of_cliques(*cliques, *clique_size).map(|(g, p)| (g, Some(p)))
            }
            GenSpec::GsbmSample { sizes, preferences, sigma, seed } => {
                if sizes.is_empty() || sizes.contains(&0) {
                    return Err(Error::InvalidParameter("block sizes must be positive".into()));
                }
                let labels: Vec<usize> =
                    sizes.iter().enumerate().flat_map(|(z, &k)| std::iter::repeat_n(z, k)).collect();
                let partition = Partition::new(labels);
                let prefs: Vec<T> = preferences.iter().map(|&p| T::lit(p)).collect();
                let graph = sample_gsbm(&partition, &prefs, *sigma, *seed)?;
                Ok((graph, Some(partition)))
            }
            GenSpec::Planted { n, communities, w_in, w_out, sigma, seed } => {
                gen_planted(*n, *communities, *w_in, *w_out, *sigma, *seed).map(|(g, p)| (g, Some(p)))
            }
        }
    }
}
