//! Rank-2 relaxation on the unit circle: first-order ascent over vertex
//! angles, the deterministic threshold-sweep rounding, and the
//! perturb-and-reoptimize refinement loop.

use std::f64::consts::{PI, TAU};

use rand::Rng as _;
use rayon::prelude::*;

use super::AscentConfig;
use crate::error::Error;
use crate::graph::{Cut, Graph};
use crate::rng::{derive_seed, run_rng};
use crate::Result;

/// Angles on the unit circle plus the relaxation value they achieve.
#[derive(Debug, Clone)]
pub struct AngleSolution {
    /// Reduced to [0, 2π).
    pub angles: Vec<f64>,
    pub objective_value: f64,
}

/// ½ Σ_{(i,j)} (1 − cos(θ_i − θ_j)).
pub fn bm_objective(g: &Graph, angles: &[f64]) -> Result<f64> {
    if angles.len() != g.n() {
        return Err(Error::LengthMismatch { expected: g.n(), got: angles.len() });
    }
    Ok(g.edges()
        .iter()
        .map(|&(a, b)| 0.5 * (1.0 - (angles[a as usize] - angles[b as usize]).cos()))
        .sum())
}

/// Ascent gradient: component i is ½ Σ_{j∈N(i)} sin(θ_i − θ_j).
pub fn bm_gradient(g: &Graph, angles: &[f64]) -> Result<Vec<f64>> {
    if angles.len() != g.n() {
        return Err(Error::LengthMismatch { expected: g.n(), got: angles.len() });
    }
    let mut grad = vec![0.0; g.n()];
    for &(a, b) in g.edges() {
        let s = 0.5 * (angles[a as usize] - angles[b as usize]).sin();
        grad[a as usize] += s;
        grad[b as usize] -= s;
    }
    Ok(grad)
}

/// Backtracking gradient ascent from a given start. Monotone in the
/// objective; stops at `tolerance` on the gradient or when no step of
/// any tried length improves.
fn ascend_from(g: &Graph, start: Vec<f64>, cfg: &AscentConfig) -> (Vec<f64>, f64) {
    let mut x = start;
    let mut fx = bm_objective(g, &x).expect("start length checked by caller");
    let mut step = cfg.step_size;
    for _ in 0..cfg.max_steps {
        let grad = bm_gradient(g, &x).expect("length preserved");
        let gnorm2: f64 = grad.iter().map(|v| v * v).sum();
        if gnorm2.sqrt() <= cfg.tolerance {
            break;
        }
        let mut accepted = false;
        for _ in 0..40 {
            let cand: Vec<f64> =
                x.iter().zip(&grad).map(|(xi, gi)| xi + step * gi).collect();
            let fc = bm_objective(g, &cand).expect("length preserved");
            if fc >= fx + 1e-4 * step * gnorm2 {
                x = cand;
                fx = fc;
                step *= 1.5;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (x, fx)
}

/// Best-of-M gradient ascent from uniform random starts; deterministic
/// given `cfg.seed`, ties broken toward the lower run index.
pub fn bm_optimize(g: &Graph, multistarts: usize, cfg: &AscentConfig) -> Result<AngleSolution> {
    if multistarts == 0 {
        return Err(Error::InvalidParameter { name: "multistarts", reason: "need at least one run".into() });
    }
    let runs: Vec<(Vec<f64>, f64)> = (0..multistarts)
        .into_par_iter()
        .map(|run| {
            let mut rng = run_rng(cfg.seed, run as u64);
            let start: Vec<f64> = (0..g.n()).map(|_| rng.random_range(0.0..TAU)).collect();
            ascend_from(g, start, cfg)
        })
        .collect();
    let mut best = 0usize;
    for i in 1..runs.len() {
        if runs[i].1 > runs[best].1 {
            best = i;
        }
    }
    let (angles, objective_value) = runs.into_iter().nth(best).expect("at least one run");
    Ok(AngleSolution { angles: angles.iter().map(|a| a.rem_euclid(TAU)).collect(), objective_value })
}

/// Threshold sweep: x_v = +1 iff θ_v ∈ [φ, φ+π), with φ advanced through
/// the sorted θ values and the (θ−π) values of angles above π, keeping
/// the best cut seen. Purely deterministic.
pub fn bm_round_deterministic(g: &Graph, sol: &AngleSolution) -> Result<Cut> {
    if sol.angles.len() != g.n() {
        return Err(Error::LengthMismatch { expected: g.n(), got: sol.angles.len() });
    }
    let n = g.n();
    let mut sorted: Vec<f64> = sol.angles.iter().map(|a| a.rem_euclid(TAU)).collect();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("angles are finite"));
    // 1-based streams; index n+1 holds the 2π sentinel, beyond is +inf
    let theta = |idx: usize| -> f64 {
        if idx <= n {
            sorted[idx - 1]
        } else if idx == n + 1 {
            TAU
        } else {
            f64::INFINITY
        }
    };
    let cut_at = |phi: f64| -> Cut {
        let assignment: Vec<bool> = sol
            .angles
            .iter()
            .map(|a| {
                let a = a.rem_euclid(TAU);
                a >= phi && a < phi + PI
            })
            .collect();
        Cut::new(g, assignment).expect("assignment has length n")
    };
    let mut i = 1usize;
    let mut j = (1..=n).find(|&idx| theta(idx) > PI).unwrap_or(n + 1);
    let mut phi = 0.0;
    let mut best = cut_at(phi);
    loop {
        if theta(i) <= theta(j) - PI {
            phi = theta(i);
            i += 1;
        } else {
            phi = theta(j) - PI;
            j += 1;
        }
        if phi > PI {
            break;
        }
        let cand = cut_at(phi);
        if cand.value > best.value {
            best = cand;
        }
    }
    Ok(best)
}

/// K rounds of round → map bits to angles (0 or π) → add uniform noise of
/// half-width `strength` → re-optimize → re-round, keeping the running
/// best. K = 0 is the plain deterministic rounding.
pub fn bm_sequential_perturb(
    g: &Graph,
    sol: &AngleSolution,
    rounds: usize,
    strength: f64,
    cfg: &AscentConfig,
) -> Result<Cut> {
    let mut best = bm_round_deterministic(g, sol)?;
    let mut current = best.clone();
    for round in 0..rounds {
        let mut rng = run_rng(derive_seed(cfg.seed, 0x7E27), round as u64);
        let start: Vec<f64> = current
            .assignment
            .iter()
            .map(|&bit| {
                let base = if bit { 0.0 } else { PI };
                base + rng.random_range(-strength..=strength)
            })
            .collect();
        let (angles, objective_value) = ascend_from(g, start, cfg);
        let sol = AngleSolution {
            angles: angles.iter().map(|a| a.rem_euclid(TAU)).collect(),
            objective_value,
        };
        current = bm_round_deterministic(g, &sol)?;
        if current.value > best.value {
            best = current.clone();
        }
    }
    Ok(best)
}
