//! Community detection with the Gaussian stochastic blockmodel with node
//! preference (GSBM-P), its constrained variant, label-propagation
//! baselines, NMI-family metrics and seeded benchmark generators.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix it to `f64`.

pub mod constrained;
pub mod datasets;
pub mod detect;
pub mod error;
pub mod generators;
pub mod graph;
pub mod gsbm_p;
pub mod io;
pub mod lpa;
pub mod metrics;
pub mod partition;
pub mod preference;
pub mod rng;
pub mod scalar;

pub use constrained::{constrained_objective, constrained_sigma2, detect_constrained};
pub use detect::{merge_small_communities, DetectConfig, DetectResult as GenericDetectResult, PreferenceUpdate};
pub use error::{Error, Result};
pub use generators::{GenSpec, gen_er, gen_planted, gen_ring_of_cliques, sample_gsbm};
pub use graph::WeightedGraph;
pub use gsbm_p::{detect_gsbm_p, gsbm_label_update, gsbm_objective, sigma2_mle};
pub use io::{parse_edge_list, parse_lfr, parse_partition, parse_partition_for, write_edge_list, write_partition};
pub use lpa::{detect_lpa, detect_lpa_from, detect_lpa_p, lpa_objective};
pub use metrics::{nmi, rnmi, rrnmi, sample_size_matched, MetricConfig};
pub use partition::Partition;
pub use preference::{
    community_preferences, power_iterate, random_walk_preferences, PowerIteration,
    PreferenceVector as GenericPreferenceVector,
};
pub use scalar::Scalar;

/// Double-precision graph.
pub type Graph = WeightedGraph<f64>;
pub type Graph32 = WeightedGraph<f32>;
pub type DetectResult = detect::DetectResult<f64>;
pub type PreferenceVector = preference::PreferenceVector<f64>;
