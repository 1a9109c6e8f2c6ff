//! Benchmark harness behind the `rwsq` binary: configuration loading,
//! experiment records, the suite runner, and the time-to-target
//! crossover report.

pub mod config;
pub mod crossover;
pub mod records;
pub mod suite;

use std::fmt;

/// Errors surfaced to the binary, split by exit code: configuration
/// problems exit 2, infeasible instances exit 3, everything else 1.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Infeasible(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Infeasible(m) => write!(f, "infeasible instance: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<rwsq_core::Error> for CliError {
    fn from(e: rwsq_core::Error) -> CliError {
        use rwsq_core::Error::*;
        match e {
            InfeasibleDegree { .. }
            | SamplingExhausted { .. }
            | TooLarge { .. }
            | LightconeTooLarge { .. }
            | EmptyEdgeSet
            | ZeroOptimum
            | AboveThreshold { .. }
            | InfeasibleBudget(_) => CliError::Infeasible(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Io(e.to_string())
    }
}
