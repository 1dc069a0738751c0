//! Small public datasets bundled with the crate.

use crate::graph::WeightedGraph;
use crate::io::{parse_edge_list, parse_partition};
use crate::partition::Partition;
use crate::scalar::Scalar;

const KARATE_EDGES: &str = include_str!("../data/karate.txt");
const KARATE_FACTIONS: &str = include_str!("../data/karate_factions.txt");

/// Zachary's karate club (34 vertices, 78 unit edges, 0-indexed) together
/// with the two factions the club split into.
pub fn karate<T: Scalar>() -> (WeightedGraph<T>, Partition) {
    let graph = parse_edge_list(KARATE_EDGES).expect("bundled karate edge list parses");
    let factions = parse_partition(KARATE_FACTIONS).expect("bundled karate factions parse");
    (graph, factions)
}

pub fn karate_edge_list() -> &'static str {
    KARATE_EDGES
}
