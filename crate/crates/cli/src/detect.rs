//! `gsbm detect`: run one detector on one graph.

use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use gsbm::{DetectConfig, Graph};
use serde::Serialize;

use crate::algo::{elapsed_ms, Algo, PrefUpdate};
use crate::exit::{read_file, write_file, Context, Failure};

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[arg(long, value_enum, default_value = "gsbm-p")]
    algo: Algo,
    /// Edge list: `u v [w]` per line, 0-indexed, `#` comments.
    #[arg(long, required_unless_present = "lfr_net", conflicts_with_all = ["lfr_net", "lfr_comm"])]
    input: Option<PathBuf>,
    /// LFR `network.dat` (1-indexed, both directions listed).
    #[arg(long, requires = "lfr_comm")]
    lfr_net: Option<PathBuf>,
    /// LFR `community.dat`, validated against the network.
    #[arg(long, requires = "lfr_net")]
    lfr_comm: Option<PathBuf>,
    /// Partition file to write (`vertex label` per line).
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    /// Sweep cap per run.
    #[arg(long, default_value_t = 100)]
    max_iters: usize,
    /// Fixed resolution for `cpm`.
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long, value_enum, default_value = "immediate")]
    pref_update: PrefUpdate,
    /// Report `wall_time_ms` as null so output is byte-for-byte reproducible.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Debug, Serialize)]
struct Summary {
    algo: &'static str,
    n: usize,
    edges: usize,
    communities: usize,
    objective: f64,
    sigma2: Option<f64>,
    iterations: usize,
    wall_time_ms: Option<f64>,
}

fn load(args: &DetectArgs) -> Result<Graph, Failure> {
    match (&args.input, &args.lfr_net, &args.lfr_comm) {
        (Some(path), _, _) => gsbm::parse_edge_list(&read_file(path)?).config_context(path.display()),
        (None, Some(net), Some(comm)) => gsbm::parse_lfr(&read_file(net)?, &read_file(comm)?)
            .map(|(g, _)| g)
            .config_context(net.display()),
        _ => Err(Failure::config(anyhow::anyhow!("either --input or --lfr-net/--lfr-comm is required"))),
    }
}

pub fn run(args: DetectArgs) -> Result<(), Failure> {
    if args.algo == Algo::Cpm && args.mu.is_none() {
        return Err(Failure::config(anyhow::anyhow!("--algo cpm needs --mu")));
    }
    if args.algo != Algo::Cpm && args.mu.is_some() {
        return Err(Failure::config(anyhow::anyhow!("--mu only applies to --algo cpm")));
    }
    let graph = load(&args)?;
    let config = DetectConfig {
        seed: args.seed,
        restarts: args.restarts,
        max_outer_iters: args.max_iters,
        preference_update: args.pref_update.into(),
        ..DetectConfig::default()
    };
    let start = Instant::now();
    let result = args.algo.run(&graph, &config, args.mu).map_err(|e| match e {
        gsbm::Error::InvalidParameter(_) => Failure::config(e),
        e => Failure::algorithm(e),
    })?;
    let wall = elapsed_ms(start);
    if let Some(path) = &args.output {
        write_file(path, &gsbm::write_partition(&result.partition))?;
    }
    let summary = Summary {
        algo: args.algo.name(),
        n: graph.vertex_count(),
        edges: graph.edge_count(),
        communities: result.community_count,
        objective: result.objective,
        sigma2: result.sigma2,
        iterations: result.iterations,
        wall_time_ms: (!args.no_timing).then_some(wall),
    };
    println!("{}", serde_json::to_string(&summary).config_context("encoding summary")?);
    Ok(())
}
