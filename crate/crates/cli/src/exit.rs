//! Exit-code classification of failures.

use std::fmt::Display;

/// Bad flags, unreadable or malformed input, invalid parameters.
pub const CONFIG: u8 = 1;
/// The detector itself failed, e.g. a negative weight inside a community.
pub const ALGORITHM: u8 = 2;
/// rrNMI is undefined because the reference scores zero against itself.
pub const DEGENERATE: u8 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn config(error: impl Into<anyhow::Error>) -> Self {
        Self { code: CONFIG, error: error.into() }
    }

    pub fn algorithm(error: gsbm::Error) -> Self {
        Self { code: ALGORITHM, error: error.into() }
    }

    /// Metric failures: a degenerate reference has its own code, anything
    /// else is a problem with the inputs.
    pub fn metric(error: gsbm::Error) -> Self {
        let code = if matches!(error, gsbm::Error::DegenerateReference) { DEGENERATE } else { CONFIG };
        Self { code, error: error.into() }
    }
}

pub trait Context<T> {
    fn config_context(self, what: impl Display) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> Context<T> for Result<T, E> {
    fn config_context(self, what: impl Display) -> Result<T, Failure> {
        self.map_err(|e| Failure::config(e.into().context(what.to_string())))
    }
}

pub fn read_file(path: &std::path::Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).config_context(format!("reading {}", path.display()))
}

pub fn write_file(path: &std::path::Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).config_context(format!("writing {}", path.display()))
}
