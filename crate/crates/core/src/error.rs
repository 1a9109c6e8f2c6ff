//! Error type shared by every module in the crate.

use thiserror::Error;

/// Errors reported by graph construction, simulation, and estimation.
#[derive(Debug, Error)]
pub enum Error {
    /// No simple regular graph exists for the requested parameters.
    #[error("no {degree}-regular graph on {n} vertices exists")]
    InfeasibleDegree { n: usize, degree: usize },

    /// The sampler kept producing self-loops or duplicate edges.
    #[error("regular graph sampling did not produce a simple graph in {attempts} attempts")]
    SamplingExhausted { attempts: usize },

    /// Malformed graph description (bad endpoint, self-loop, duplicate edge).
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    /// An operation received an edge that is not part of the graph.
    #[error("edge ({0}, {1}) is not in the graph")]
    EdgeNotInGraph(u32, u32),

    /// Vertex-indexed input of the wrong length.
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// The instance is too large for dense enumeration or simulation.
    #[error("{what} supports at most {cap} {unit}, got {got}")]
    TooLarge {
        what: &'static str,
        cap: usize,
        got: usize,
        unit: &'static str,
    },

    /// A depth-p lightcone exceeded the statevector capacity.
    #[error("lightcone of edge ({u}, {v}) has {size} vertices, above the cap of {cap}")]
    LightconeTooLarge { u: u32, v: u32, size: usize, cap: usize },

    /// A cut-fraction or ratio was requested on a graph without edges.
    #[error("operation undefined on a graph with no edges")]
    EmptyEdgeSet,

    /// Division by a zero optimum.
    #[error("approximation ratio undefined for a zero optimum")]
    ZeroOptimum,

    /// Parameter outside its documented domain.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Fixed-parameter lookup miss.
    #[error("no shipped schedule for degree {degree} at depth {p}")]
    MissingTableEntry { degree: usize, p: usize },

    /// Fitting was asked to draw from an empty pool.
    #[error("subgraph pool is empty")]
    EmptyPool,

    /// Physical error rate at or above the code threshold.
    #[error("physical error rate {p_phys} is not below the threshold {p_th}")]
    AboveThreshold { p_phys: f64, p_th: f64 },

    /// The fidelity target cannot be met by any budget split.
    #[error("error budget infeasible: {0}")]
    InfeasibleBudget(String),

    /// Unknown solver name at the harness boundary.
    #[error("unknown solver id: {0}")]
    UnknownSolver(String),

    /// Serialization or parsing failure for one of the file formats.
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
