//! Algorithm selection shared by `detect` and `bench`.

use clap::ValueEnum;
use gsbm::{DetectConfig, DetectResult, Graph};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    /// Gaussian blockmodel with per-vertex node preferences.
    GsbmP,
    /// Constrained blockmodel, one maximum-likelihood preference per community.
    GsbmC,
    /// Constant Potts model: constrained blockmodel with a fixed `--mu`.
    Cpm,
    /// Classic label propagation.
    Lpa,
    /// Label propagation weighted by intra-community random-walk preferences.
    LpaP,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::GsbmP => "gsbm-p",
            Algo::GsbmC => "gsbm-c",
            Algo::Cpm => "cpm",
            Algo::Lpa => "lpa",
            Algo::LpaP => "lpa-p",
        }
    }

    pub fn run(self, graph: &Graph, config: &DetectConfig, mu: Option<f64>) -> gsbm::Result<DetectResult> {
        match self {
            Algo::GsbmP => gsbm::detect_gsbm_p(graph, config),
            Algo::GsbmC => gsbm::detect_constrained(graph, config, None),
            Algo::Cpm => {
                let mu = mu.ok_or_else(|| gsbm::Error::InvalidParameter("cpm needs mu".into()))?;
                gsbm::detect_constrained(graph, config, Some(mu))
            }
            Algo::Lpa => gsbm::detect_lpa(graph, config),
            Algo::LpaP => gsbm::detect_lpa_p(graph, config),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrefUpdate {
    #[default]
    Immediate,
    PerSweep,
}

impl From<PrefUpdate> for gsbm::PreferenceUpdate {
    fn from(p: PrefUpdate) -> Self {
        match p {
            PrefUpdate::Immediate => gsbm::PreferenceUpdate::Immediate,
            PrefUpdate::PerSweep => gsbm::PreferenceUpdate::PerSweep,
        }
    }
}

pub fn elapsed_ms(start: std::time::Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}
