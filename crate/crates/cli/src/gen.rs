//! `gsbm gen`: write a synthetic graph and its planted partition.

use std::path::PathBuf;

use clap::{Args, Subcommand};
use gsbm::{GenSpec, Graph};
use serde_json::{json, Value};

use crate::exit::{write_file, Failure};

#[derive(Debug, Args)]
pub struct Outputs {
    /// Edge list to write.
    #[arg(long)]
    output: PathBuf,
    /// Planted partition to write, for kinds that have one.
    #[arg(long)]
    partition: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Ring of cliques joined by single bridges.
    Ring {
        #[arg(long)]
        cliques: usize,
        #[arg(long, default_value_t = 4)]
        size: usize,
        #[command(flatten)]
        out: Outputs,
    },
    /// Erdős–Rényi G(n, p) with p = avg_degree / (n - 1).
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        avg_degree: f64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: Outputs,
    },
    /// Equal blocks with Gaussian weights around w_in inside and w_out between.
    Planted {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        win: f64,
        #[arg(long)]
        wout: f64,
        #[arg(long, default_value_t = 0.0)]
        sigma: f64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: Outputs,
    },
    /// Sample of the node-preference blockmodel with one preference for every vertex.
    Gsbm {
        /// Comma-separated block sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1.0)]
        pref: f64,
        #[arg(long, default_value_t = 0.0)]
        sigma: f64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: Outputs,
    },
}

fn spec_of(cmd: GenCommand) -> (GenSpec, Value, Outputs) {
    match cmd {
        GenCommand::Ring { cliques, size, out } => (
            GenSpec::RingOfCliques { cliques, clique_size: size },
            json!({ "cliques": cliques, "size": size }),
            out,
        ),
        GenCommand::Er { n, avg_degree, seed, out } => {
            (GenSpec::Er { n, avg_degree, seed }, json!({ "n": n, "avg_degree": avg_degree, "seed": seed }), out)
        }
        GenCommand::Planted { n, k, win, wout, sigma, seed, out } => (
            GenSpec::Planted { n, communities: k, w_in: win, w_out: wout, sigma, seed },
            json!({ "n": n, "k": k, "win": win, "wout": wout, "sigma": sigma, "seed": seed }),
            out,
        ),
        GenCommand::Gsbm { sizes, pref, sigma, seed, out } => {
            let n = sizes.iter().sum();
            let params = json!({ "sizes": sizes, "pref": pref, "sigma": sigma, "seed": seed });
            (GenSpec::GsbmSample { sizes, preferences: vec![pref; n], sigma, seed }, params, out)
        }
    }
}

pub fn run(cmd: GenCommand) -> Result<(), Failure> {
    let (spec, params, out) = spec_of(cmd);
    let (graph, planted): (Graph, _) = spec.generate().map_err(Failure::config)?;
    let partition_out = match (&out.partition, &planted) {
        (Some(_), None) => {
            return Err(Failure::config(anyhow::anyhow!("{} graphs have no planted partition", spec.kind())));
        }
        (Some(path), Some(p)) => Some((path, p)),
        (None, _) => None,
    };
    write_file(&out.output, &gsbm::write_edge_list(&graph))?;
    if let Some((path, p)) = partition_out {
        write_file(path, &gsbm::write_partition(p))?;
    }
    let communities = planted.as_ref().map(|p| p.community_count());
    let echo = json!({
        "kind": spec.kind(),
        "params": params,
        "n": graph.vertex_count(),
        "edges": graph.edge_count(),
        "communities": communities,
    });
    println!("{echo}");
    Ok(())
}
