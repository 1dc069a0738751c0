use thiserror::Error;

/// Errors raised by parsing, model fitting and evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("edge ({u}, {v}) listed more than once")]
    DuplicateEdge { u: usize, v: usize },
    #[error("self-loop on vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("edge ({u}, {v}) is listed in one direction only")]
    AsymmetricEdge { u: usize, v: usize },
    #[error("edge ({u}, {v}) has different weights in its two directions")]
    WeightMismatch { u: usize, v: usize },
    #[error("partition has no label for vertex {vertex}")]
    IncompletePartition { vertex: usize },
    #[error("vertex {vertex} is assigned more than once")]
    DuplicateAssignment { vertex: usize },
    #[error("vertex {vertex} out of range for {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("label {label} is not present in the partition")]
    UnknownLabel { label: usize },
    #[error("negative intra-community weight on edge ({u}, {v})")]
    NegativeWeight { u: usize, v: usize },
    #[error("inconsistent state: {0}")]
    InconsistentState(String),
    #[error("partition sizes differ: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("reference partition has zero rNMI against itself")]
    DegenerateReference,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
