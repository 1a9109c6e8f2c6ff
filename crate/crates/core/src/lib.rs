//! Max-Cut experimentation core.
//!
//! The crate bundles everything the benchmark harness needs to compare
//! warm-started QAOA against classical heuristics on unweighted Max-Cut
//! instances:
//!
//! * [`graph`]: random regular instances, cut metrics, brute force,
//!   and edge lightcones.
//! * [`warmstart`]: the regularized relaxation that produces per-qubit
//!   rotation angles for the warm start.
//! * [`qaoa`]: exact statevector simulation of the warm-started circuit
//!   and the lightcone decomposition of its expected cut.
//! * [`params`]: fixed-parameter schedules: the shipped lookup table and
//!   the fitting procedure that reproduces it.
//! * [`classical`]: Burer-Monteiro, hyperplane rounding over a rank-k
//!   relaxation, simulated bifurcation, and local-search baselines.
//! * [`resource`]: fault-tolerant footprint and fidelity estimates.
//!
//! [`numeric`] and [`rng`] hold the deterministic summation and seeding
//! conventions the rest of the crate (and the harness) relies on.

pub mod classical;
pub mod error;
pub mod graph;
pub mod numeric;
pub mod params;
pub mod qaoa;
pub mod resource;
pub mod rng;
pub mod warmstart;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
