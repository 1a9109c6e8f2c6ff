//! Ballistic simulated bifurcation: symplectic Euler evolution of
//! position/momentum pairs under a linear pump ramp, with inelastic
//! walls at ±1. Couplings are scaled by a power-iteration estimate of
//! the adjacency spectral norm so one step size works across sizes.

use rayon::prelude::*;

use rand::Rng as _;

use crate::error::Error;
use crate::graph::{Cut, Graph};
use crate::rng::run_rng;
use crate::Result;

/// One trajectory's dynamical variables.
#[derive(Debug, Clone)]
pub struct SbState {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// Current pump amplitude, ramped 0 → 1 over the run.
    pub a: f64,
    pub dt: f64,
}

/// Largest adjacency eigenvalue, by power iteration from a positive
/// start vector (exact at d for d-regular graphs).
fn spectral_norm_estimate(g: &Graph) -> f64 {
    let n = g.n();
    if n == 0 || g.edge_count() == 0 {
        return 0.0;
    }
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut lambda = 0.0;
    for _ in 0..50 {
        let mut av = vec![0.0; n];
        for &(a, b) in g.edges() {
            av[a as usize] += v[b as usize];
            av[b as usize] += v[a as usize];
        }
        lambda = av.iter().map(|x| x * x).sum::<f64>().sqrt();
        if lambda < 1e-12 {
            return 0.0;
        }
        for (vi, avi) in v.iter_mut().zip(&av) {
            *vi = avi / lambda;
        }
    }
    lambda
}

fn evolve_agent(
    g: &Graph,
    steps: usize,
    dt: f64,
    c0: f64,
    seed: u64,
    agent: u64,
) -> Cut {
    let n = g.n();
    let mut rng = run_rng(seed, agent);
    let mut state = SbState {
        x: (0..n).map(|_| rng.random_range(-0.1..0.1)).collect(),
        y: (0..n).map(|_| rng.random_range(-0.1..0.1)).collect(),
        a: 0.0,
        dt,
    };
    let snapshot_every = (steps / 10).max(1);
    let mut best: Option<Cut> = None;
    let take_snapshot = |state: &SbState, best: &mut Option<Cut>| {
        let assignment: Vec<bool> = state.x.iter().map(|&xi| xi >= 0.0).collect();
        let cut = Cut::new(g, assignment).expect("assignment has length n");
        if best.as_ref().is_none_or(|b| cut.value > b.value) {
            *best = Some(cut);
        }
    };
    for t in 0..steps {
        state.a = t as f64 / steps as f64;
        let mut force = vec![0.0; n];
        for &(a, b) in g.edges() {
            force[a as usize] -= c0 * state.x[b as usize];
            force[b as usize] -= c0 * state.x[a as usize];
        }
        for i in 0..n {
            state.y[i] += state.dt * (-(1.0 - state.a) * state.x[i] + force[i]);
            state.x[i] += state.dt * state.y[i];
            if state.x[i].abs() > 1.0 {
                state.x[i] = state.x[i].signum();
                state.y[i] = 0.0;
            }
        }
        if (t + 1) % snapshot_every == 0 {
            take_snapshot(&state, &mut best);
        }
    }
    take_snapshot(&state, &mut best);
    best.expect("at least the final snapshot")
}

/// Best cut over `agents` independent trajectories and their snapshots;
/// deterministic given the seed, agent r seeded as run r.
pub fn simulated_bifurcation(
    g: &Graph,
    agents: usize,
    steps: usize,
    dt: f64,
    seed: u64,
) -> Result<Cut> {
    if agents == 0 {
        return Err(Error::InvalidParameter { name: "agents", reason: "need at least one".into() });
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter { name: "dt", reason: format!("need dt > 0, got {dt}") });
    }
    let rho = spectral_norm_estimate(g);
    let c0 = if rho > 1e-12 { 0.5 / rho } else { 0.0 };
    let cuts: Vec<Cut> = (0..agents as u64)
        .into_par_iter()
        .map(|agent| evolve_agent(g, steps, dt, c0, seed, agent))
        .collect();
    let mut best = 0usize;
    for i in 1..cuts.len() {
        if cuts[i].value > cuts[best].value {
            best = i;
        }
    }
    Ok(cuts.into_iter().nth(best).expect("agents >= 1"))
}
