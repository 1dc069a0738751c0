//! `gsbm bench`: parameter sweeps from a TOML description, one CSV row per
//! (point, graph, algorithm) followed by a mean row per (point, algorithm).
//!
//! Seeds fan out as `graph_seed = derive_seed(seed, [point, graph])`; the
//! detector of the `a`-th algorithm runs with `derive_seed(graph_seed, [1, a])`
//! and the metric with `derive_seed(graph_seed, [2])`, so any row can be
//! replayed on its own.

use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use gsbm::rng::derive_seed;
use gsbm::{DetectConfig, GenSpec, Graph, MetricConfig, Partition};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algo::{elapsed_ms, Algo, PrefUpdate};
use crate::eval::{score, Metric};
use crate::exit::{read_file, Context, Failure};

pub const COLUMNS: [&str; 13] = [
    "kind",
    "n",
    "param_name",
    "param_value",
    "graph_index",
    "algo",
    "seed",
    "communities",
    "objective",
    "metric_name",
    "metric_value",
    "wall_time_ms",
    "error",
];

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// TOML sweep description.
    #[arg(long)]
    config: PathBuf,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    threads: Option<usize>,
    /// Leave `wall_time_ms` empty so output is byte-for-byte reproducible.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Ring,
    Er,
    Planted,
    Gsbm,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct Generator {
    kind: Kind,
    n: Option<usize>,
    avg_degree: Option<f64>,
    cliques: Option<usize>,
    size: Option<usize>,
    k: Option<usize>,
    w_in: Option<f64>,
    w_out: Option<f64>,
    #[serde(default)]
    sigma: f64,
    sizes: Option<Vec<usize>>,
    #[serde(default = "one")]
    pref: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct Sweep {
    param: String,
    values: Vec<f64>,
}

/// One LFR network/community pair; `mu_t` is the swept value, the other
/// tags are carried along for reference only.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct LfrPair {
    network: PathBuf,
    community: PathBuf,
    mu_t: f64,
    #[allow(dead_code)]
    mu_w: Option<f64>,
    #[allow(dead_code)]
    beta: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct BenchConfig {
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_graphs")]
    graphs_per_point: usize,
    #[serde(default = "default_restarts")]
    restarts: usize,
    #[serde(default = "default_max_iters")]
    max_iters: usize,
    algos: Vec<Algo>,
    #[serde(default = "default_metric")]
    metric: Metric,
    #[serde(default = "default_samples")]
    samples: usize,
    mu: Option<f64>,
    #[serde(default)]
    pref_update: PrefUpdate,
    generator: Option<Generator>,
    sweep: Option<Sweep>,
    #[serde(default)]
    lfr: Vec<LfrPair>,
}

fn default_graphs() -> usize {
    1
}
fn default_restarts() -> usize {
    1
}
fn default_max_iters() -> usize {
    100
}
fn default_metric() -> Metric {
    Metric::Rrnmi
}
fn default_samples() -> usize {
    100
}

impl<'de> Deserialize<'de> for Metric {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        <Metric as clap::ValueEnum>::from_str(&s, true).map_err(serde::de::Error::custom)
    }
}

impl Generator {
    fn with_param(&self, name: &str, value: f64) -> anyhow::Result<Self> {
        let int = || -> anyhow::Result<usize> {
            anyhow::ensure!(value >= 0.0 && value.fract() == 0.0, "{name} = {value} is not a count");
            Ok(value as usize)
        };
        let mut g = self.clone();
        match name {
            "n" => g.n = Some(int()?),
            "avg_degree" => g.avg_degree = Some(value),
            "cliques" => g.cliques = Some(int()?),
            "size" => g.size = Some(int()?),
            "k" => g.k = Some(int()?),
            "w_in" => g.w_in = Some(value),
            "w_out" => g.w_out = Some(value),
            "sigma" => g.sigma = value,
            "pref" => g.pref = value,
            other => anyhow::bail!("unknown sweep parameter {other:?}"),
        }
        Ok(g)
    }

    fn spec(&self, seed: u64) -> anyhow::Result<GenSpec> {
        fn need<T: Copy>(v: Option<T>, name: &str) -> anyhow::Result<T> {
            v.ok_or_else(|| anyhow::anyhow!("generator needs {name}"))
        }
        Ok(match self.kind {
            Kind::Ring => GenSpec::RingOfCliques { cliques: need(self.cliques, "cliques")?, clique_size: self.size.unwrap_or(4) },
            Kind::Er => GenSpec::Er { n: need(self.n, "n")?, avg_degree: need(self.avg_degree, "avg_degree")?, seed },
            Kind::Planted => GenSpec::Planted {
                n: need(self.n, "n")?,
                communities: need(self.k, "k")?,
                w_in: need(self.w_in, "w_in")?,
                w_out: self.w_out.unwrap_or(0.0),
                sigma: self.sigma,
                seed,
            },
            Kind::Gsbm => {
                let sizes = self.sizes.clone().ok_or_else(|| anyhow::anyhow!("generator needs sizes"))?;
                let n = sizes.iter().sum();
                GenSpec::GsbmSample { sizes, preferences: vec![self.pref; n], sigma: self.sigma, seed }
            }
        })
    }
}

/// A swept point: the parameter value and a recipe for its graphs.
struct Point {
    kind: &'static str,
    param_name: String,
    param_value: f64,
    source: Source,
}

enum Source {
    Generated(Generator),
    Lfr(Vec<LfrPair>),
}

impl Source {
    fn graph_count(&self, per_point: usize) -> usize {
        match self {
            Source::Generated(_) => per_point,
            Source::Lfr(pairs) => pairs.len(),
        }
    }

    fn load(&self, index: usize, seed: u64) -> anyhow::Result<(Graph, Option<Partition>)> {
        match self {
            Source::Generated(g) => Ok(g.spec(seed)?.generate()?),
            Source::Lfr(pairs) => {
                let pair = &pairs[index];
                let net = std::fs::read_to_string(&pair.network)?;
                let comm = std::fs::read_to_string(&pair.community)?;
                let (g, p) = gsbm::parse_lfr(&net, &comm)?;
                Ok((g, Some(p)))
            }
        }
    }
}

fn points(config: &BenchConfig) -> anyhow::Result<Vec<Point>> {
    match (&config.generator, config.lfr.is_empty()) {
        (Some(_), false) => anyhow::bail!("give either [generator] or [[lfr]] entries, not both"),
        (None, true) => anyhow::bail!("no [generator] and no [[lfr]] entries"),
        (None, false) => {
            let mut values: Vec<f64> = Vec::new();
            for pair in &config.lfr {
                if !values.contains(&pair.mu_t) {
                    values.push(pair.mu_t);
                }
            }
            Ok(values
                .into_iter()
                .map(|v| Point {
                    kind: "lfr",
                    param_name: "mu_t".into(),
                    param_value: v,
                    source: Source::Lfr(config.lfr.iter().filter(|p| p.mu_t == v).cloned().collect()),
                })
                .collect())
        }
        (Some(generator), true) => {
            let kind = match generator.kind {
                Kind::Ring => "ring",
                Kind::Er => "er",
                Kind::Planted => "planted",
                Kind::Gsbm => "gsbm",
            };
            let sweep = config.sweep.as_ref().ok_or_else(|| anyhow::anyhow!("[sweep] is required with [generator]"))?;
            anyhow::ensure!(!sweep.values.is_empty(), "sweep has no values");
            sweep
                .values
                .iter()
                .map(|&v| {
                    Ok(Point {
                        kind,
                        param_name: sweep.param.clone(),
                        param_value: v,
                        source: Source::Generated(generator.with_param(&sweep.param, v)?),
                    })
                })
                .collect()
        }
    }
}

/// One CSV line; numbers are preformatted so integer columns stay integers
/// and floats print in shortest round-trip form.
#[derive(Debug, Clone, Serialize)]
struct Row {
    kind: String,
    n: String,
    param_name: String,
    param_value: String,
    graph_index: String,
    algo: String,
    seed: String,
    communities: String,
    objective: String,
    metric_name: String,
    metric_value: String,
    wall_time_ms: String,
    error: String,
}

/// Numeric outcome of one detection, kept for the mean rows.
#[derive(Debug, Clone, Copy)]
struct Measured {
    communities: f64,
    objective: f64,
    metric: Option<f64>,
    wall_ms: f64,
}

struct Cell {
    row: Row,
    measured: Option<Measured>,
}

fn run_graph(config: &BenchConfig, point: &Point, point_index: usize, graph_index: usize, timing: bool) -> Vec<Cell> {
    let graph_seed = derive_seed(config.seed, &[point_index as u64, graph_index as u64]);
    let blank = |algo: Algo, n: String, error: String| Row {
        kind: point.kind.into(),
        n,
        param_name: point.param_name.clone(),
        param_value: point.param_value.to_string(),
        graph_index: graph_index.to_string(),
        algo: algo.name().into(),
        seed: graph_seed.to_string(),
        communities: String::new(),
        objective: String::new(),
        metric_name: String::new(),
        metric_value: String::new(),
        wall_time_ms: String::new(),
        error,
    };
    let (graph, planted) = match point.source.load(graph_index, graph_seed) {
        Ok(loaded) => loaded,
        Err(e) => {
            return config
                .algos
                .iter()
                .map(|&a| Cell { row: blank(a, String::new(), format!("{e:#}")), measured: None })
                .collect()
        }
    };
    let metric_config = MetricConfig { samples: config.samples, seed: derive_seed(graph_seed, &[2]) };
    config
        .algos
        .iter()
        .enumerate()
        .map(|(a, &algo)| {
            let mut row = blank(algo, graph.vertex_count().to_string(), String::new());
            let detect = DetectConfig {
                seed: derive_seed(graph_seed, &[1, a as u64]),
                restarts: config.restarts,
                max_outer_iters: config.max_iters,
                preference_update: config.pref_update.into(),
                ..DetectConfig::default()
            };
            let start = Instant::now();
            let result = match algo.run(&graph, &detect, config.mu) {
                Ok(r) => r,
                Err(e) => {
                    row.error = e.to_string();
                    return Cell { row, measured: None };
                }
            };
            let wall_ms = elapsed_ms(start);
            let metric = match &planted {
                Some(truth) => match score(config.metric, truth, &result.partition, &metric_config) {
                    Ok(v) => Some(v),
                    Err(e) => {
                        row.error = e.to_string();
                        None
                    }
                },
                None => None,
            };
            row.communities = result.community_count.to_string();
            row.objective = result.objective.to_string();
            if planted.is_some() {
                row.metric_name = metric_name(config.metric).into();
            }
            row.metric_value = metric.map(|v| v.to_string()).unwrap_or_default();
            if timing {
                row.wall_time_ms = wall_ms.to_string();
            }
            let measured = row.error.is_empty().then_some(Measured {
                communities: result.community_count as f64,
                objective: result.objective,
                metric,
                wall_ms,
            });
            Cell { row, measured }
        })
        .collect()
}

fn metric_name(m: Metric) -> &'static str {
    match m {
        Metric::Nmi => "nmi",
        Metric::Rnmi => "rnmi",
        Metric::Rrnmi => "rrnmi",
    }
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (mut sum, mut count) = (0.0, 0usize);
    for v in values {
        sum += v;
        count += 1;
    }
    (count > 0).then(|| sum / count as f64)
}

fn mean_row(config: &BenchConfig, point: &Point, algo: Algo, cells: &[&Cell], timing: bool) -> Row {
    let ok: Vec<Measured> = cells.iter().filter_map(|c| c.measured).collect();
    let failed = cells.len() - ok.len();
    let fmt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let ns: Vec<&str> = cells.iter().map(|c| c.row.n.as_str()).filter(|n| !n.is_empty()).collect();
    let n = if !ns.is_empty() && ns.iter().all(|&x| x == ns[0]) { ns[0].to_string() } else { String::new() };
    let metric = mean(ok.iter().filter_map(|m| m.metric));
    Row {
        kind: point.kind.into(),
        n,
        param_name: point.param_name.clone(),
        param_value: point.param_value.to_string(),
        graph_index: "mean".into(),
        algo: algo.name().into(),
        seed: String::new(),
        communities: fmt(mean(ok.iter().map(|m| m.communities))),
        objective: fmt(mean(ok.iter().map(|m| m.objective))),
        metric_name: if metric.is_some() { metric_name(config.metric).into() } else { String::new() },
        metric_value: fmt(metric),
        wall_time_ms: if timing { fmt(mean(ok.iter().map(|m| m.wall_ms))) } else { String::new() },
        error: if failed > 0 { format!("{failed} of {} runs failed", cells.len()) } else { String::new() },
    }
}

fn rows(config: &BenchConfig, timing: bool) -> anyhow::Result<Vec<Row>> {
    anyhow::ensure!(!config.algos.is_empty(), "algos is empty");
    anyhow::ensure!(config.graphs_per_point > 0, "graphs_per_point must be at least 1");
    if config.algos.contains(&Algo::Cpm) {
        anyhow::ensure!(config.mu.is_some(), "cpm needs mu");
    }
    let points = points(config)?;
    let jobs: Vec<(usize, usize)> = points
        .iter()
        .enumerate()
        .flat_map(|(p, point)| (0..point.source.graph_count(config.graphs_per_point)).map(move |g| (p, g)))
        .collect();
    let cells: Vec<(usize, Vec<Cell>)> =
        jobs.par_iter().map(|&(p, g)| (p, run_graph(config, &points[p], p, g, timing))).collect();
    let mut out = Vec::new();
    for (p, point) in points.iter().enumerate() {
        let here: Vec<&Vec<Cell>> = cells.iter().filter(|(q, _)| *q == p).map(|(_, c)| c).collect();
        for graph_cells in &here {
            out.extend(graph_cells.iter().map(|c| c.row.clone()));
        }
        for (a, &algo) in config.algos.iter().enumerate() {
            let column: Vec<&Cell> = here.iter().map(|cells| &cells[a]).collect();
            out.push(mean_row(config, point, algo, &column, timing));
        }
    }
    Ok(out)
}

pub fn run(args: BenchArgs) -> Result<(), Failure> {
    let text = read_file(&args.config)?;
    let config: BenchConfig = toml::from_str(&text).config_context(args.config.display())?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(threads) = args.threads {
        pool = pool.num_threads(threads);
    }
    let pool = pool.build().config_context("starting worker pool")?;
    let rows = pool.install(|| rows(&config, !args.no_timing)).config_context(args.config.display())?;
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    writer.write_record(COLUMNS).config_context("writing CSV")?;
    for row in &rows {
        writer.serialize(row).config_context("writing CSV")?;
    }
    let bytes = writer.into_inner().config_context("writing CSV")?;
    match &args.output {
        Some(path) => std::fs::write(path, bytes).config_context(format!("writing {}", path.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes).config_context("writing CSV")
        }
    }
}
