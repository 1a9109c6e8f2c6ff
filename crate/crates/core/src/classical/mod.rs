//! Classical Max-Cut baselines: rank-2 and rank-k relaxations with
//! deterministic and hyperplane rounding, greedy and degree-3 local
//! improvement, simulated bifurcation, and a budgeted multistart harness.

mod bm;
mod hlz;
mod local_search;
mod multistart;
mod sb;
mod vector_relax;

pub use bm::{
    bm_gradient, bm_objective, bm_optimize, bm_round_deterministic, bm_sequential_perturb,
    AngleSolution,
};
pub use hlz::hlz_local_improve;
pub use local_search::{local_search, local_search_to_convergence};
pub use multistart::{parallel_multistart, MultistartOutcome, RunTrace, SolverKind};
pub use sb::{simulated_bifurcation, SbState};
pub use vector_relax::{
    default_rank, hyperplane_round, rank_k_relax, vector_objective, HyperplaneRounding,
    VectorSolution,
};

/// Shared knobs for the first-order solvers in this module.
#[derive(Debug, Clone)]
pub struct AscentConfig {
    pub max_steps: usize,
    /// Initial trial step; adapted by backtracking as the run proceeds.
    pub step_size: f64,
    /// Stop when the (projected) gradient infinity norm drops below this.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for AscentConfig {
    fn default() -> AscentConfig {
        AscentConfig { max_steps: 500, step_size: 0.2, tolerance: 1e-7, seed: 0 }
    }
}
