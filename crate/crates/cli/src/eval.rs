//! `gsbm eval`: score a predicted partition against a reference.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use gsbm::MetricConfig;
use serde::Serialize;

use crate::exit::{read_file, Context, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Nmi,
    Rnmi,
    Rrnmi,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Reference partition file.
    #[arg(long)]
    truth: PathBuf,
    /// Predicted partition file.
    #[arg(long)]
    pred: PathBuf,
    #[arg(long, value_enum, default_value = "rrnmi")]
    metric: Metric,
    /// Random partitions drawn for the rNMI baseline.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Serialize)]
struct Report {
    metric: Metric,
    value: f64,
    samples: usize,
    seed: u64,
}

pub fn score(metric: Metric, truth: &gsbm::Partition, pred: &gsbm::Partition, config: &MetricConfig) -> gsbm::Result<f64> {
    match metric {
        Metric::Nmi => gsbm::nmi(truth, pred),
        Metric::Rnmi => gsbm::rnmi(truth, pred, config),
        Metric::Rrnmi => gsbm::rrnmi(truth, pred, config),
    }
}

pub fn run(args: EvalArgs) -> Result<(), Failure> {
    let truth = gsbm::parse_partition(&read_file(&args.truth)?).config_context(args.truth.display())?;
    let pred = gsbm::parse_partition(&read_file(&args.pred)?).config_context(args.pred.display())?;
    let config = MetricConfig { samples: args.samples, seed: args.seed };
    let value = score(args.metric, &truth, &pred, &config).map_err(Failure::metric)?;
    let report = Report { metric: args.metric, value, samples: args.samples, seed: args.seed };
    println!("{}", serde_json::to_string(&report).config_context("encoding report")?);
    Ok(())
}
