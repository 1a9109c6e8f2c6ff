//! Fidelity and fault-tolerant footprint estimates for the warm-started
//! circuits: a phenomenological circuit-fidelity product, a per-rotation
//! error-budget split with a grid-searched synthesis/distillation
//! trade-off, and surface-code distance, qubit-count, and runtime
//! formulas chained into one estimate.

use serde::Serialize;

use crate::error::Error;
use crate::Result;

/// Hardware rates: the SPAM and two-qubit error rates drive the fidelity
/// product, the rest parameterize the fault-tolerant stack.
#[derive(Debug, Clone)]
pub struct DeviceModel {
    /// Per-qubit state-preparation-and-measurement error.
    pub p_spam: f64,
    /// Two-qubit gate infidelity.
    pub eps_2q: f64,
    /// Physical error rate of the fault-tolerant substrate.
    pub p_ph: f64,
    /// Surface-code threshold. Calibrated so that eps_T = 1e-9 at
    /// p_ph = 1e-3 lands on distance 17; the commonly quoted 1e-2
    /// threshold gives 18 before odd rounding.
    pub p_th: f64,
    /// Seconds per code cycle.
    pub tau_cycle: f64,
    /// Concurrent magic-state factories.
    pub n_factories: u64,
    /// Code cycles to produce one magic state at distance 17; scaled
    /// linearly in d elsewhere.
    pub cycles_per_state: u64,
}

/// Distance at which `cycles_per_state` is quoted.
const CYCLES_REF_DISTANCE: u64 = 17;

impl DeviceModel {
    /// Trapped-ion rates used for the hardware fidelity estimates,
    /// combined with the default fault-tolerant stack.
    pub fn helios() -> DeviceModel {
        DeviceModel {
            p_spam: 5.3e-4,
            eps_2q: 2.0e-3,
            p_ph: 1e-3,
            p_th: 1.15e-2,
            tau_cycle: 1e-6,
            n_factories: 1200,
            cycles_per_state: 173,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, rate) in [
            ("p_spam", self.p_spam),
            ("eps_2q", self.eps_2q),
            ("p_ph", self.p_ph),
            ("p_th", self.p_th),
        ] {
            if !(0.0..1.0).contains(&rate) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("rate must lie in [0, 1), got {rate}"),
                });
            }
        }
        if !(self.tau_cycle > 0.0) {
            return Err(Error::InvalidParameter {
                name: "tau_cycle",
                reason: format!("must be positive, got {}", self.tau_cycle),
            });
        }
        Ok(())
    }
}

impl Default for DeviceModel {
    fn default() -> DeviceModel {
        DeviceModel::helios()
    }
}

/// Everything the estimator pipeline produces for one circuit.
#[derive(Debug, Clone, Serialize)]
pub struct ResourceEstimate {
    pub n_rotations: u64,
    /// Error budget allotted to each rotation.
    pub rotation_accuracy: f64,
    pub t_count_total: u64,
    pub eps_t: f64,
    pub delta_opt: f64,
    pub distance: u64,
    pub physical_qubits: u64,
    pub runtime_seconds: f64,
}

/// (1 − p_spam)^n · (1 − (5/4)·ε₂Q)^(|E|·p).
pub fn circuit_fidelity(n: usize, edges: usize, p: usize, dev: &DeviceModel) -> f64 {
    (1.0 - dev.p_spam).powi(n as i32) * (1.0 - 1.25 * dev.eps_2q).powi((edges * p) as i32)
}

/// Rotations in a depth-p warm-started circuit on a degree-d graph:
/// p·(d/2·n + n) + n, counting one rotation per edge phase, per mixer
/// qubit, and per warm-start initialization.
pub fn rotation_count(n: u64, degree: u64, p: u64) -> Result<u64> {
    if n * degree % 2 != 0 {
        return Err(Error::InfeasibleDegree { n: n as usize, degree: degree as usize });
    }
    Ok(p * (degree * n / 2 + n) + n)
}

/// T gates to synthesize one rotation to accuracy δ.
pub fn t_count_per_rotation(delta: f64, coeff: f64) -> u64 {
    (coeff * (1.0 / delta).log2()).ceil() as u64
}

/// How the per-rotation budget is divided between synthesis error δ and
/// magic-state infidelity ε_T.
#[derive(Debug, Clone, Copy)]
pub struct BudgetSplit {
    pub rotation_accuracy: f64,
    pub delta_opt: f64,
    pub eps_t: f64,
    pub t_count_total: u64,
}

/// Splits (1 − target)/n_rotations into δ + n_T(δ)·ε_T over the grid
/// δ ∈ {10^(−k/4)}, minimizing n_T·ln(1/ε_T)³. That proxy is
/// proportional to physical_qubits·runtime: qubits scale as d², runtime
/// as d·N_T, and d is proportional to ln(1/ε_T), so the argmin does not
/// depend on the device constants.
pub fn budget_split(
    n_rotations: u64,
    target_fidelity: f64,
    t_cost_coeff: f64,
) -> Result<BudgetSplit> {
    if !(target_fidelity > 0.0 && target_fidelity < 1.0) {
        return Err(Error::InvalidParameter {
            name: "target_fidelity",
            reason: format!("must lie in (0, 1), got {target_fidelity}"),
        });
    }
    let rotation_accuracy = (1.0 - target_fidelity) / n_rotations as f64;
    if !(rotation_accuracy < 1.0) {
        return Err(Error::InfeasibleBudget(format!(
            "per-rotation budget {rotation_accuracy} with {n_rotations} rotations"
        )));
    }
    let mut best: Option<(f64, f64, f64, u64)> = None; // cost, delta, eps_t, n_t
    for k in 1..=160 {
        let delta = 10f64.powf(-(k as f64) / 4.0);
        if delta >= rotation_accuracy {
            continue;
        }
        let n_t = t_count_per_rotation(delta, t_cost_coeff);
        let eps_t = (rotation_accuracy - delta) / n_t as f64;
        let cost = n_t as f64 * (1.0 / eps_t).ln().powi(3);
        if best.is_none_or(|(c, ..)| cost < c) {
            best = Some((cost, delta, eps_t, n_t));
        }
    }
    let (_, delta_opt, eps_t, n_t) = best.ok_or_else(|| {
        Error::InfeasibleBudget(format!("no feasible synthesis error below {rotation_accuracy}"))
    })?;
    Ok(BudgetSplit {
        rotation_accuracy,
        delta_opt,
        eps_t,
        t_count_total: n_rotations * n_t,
    })
}

/// d = ⌈2·log(ε_T)/log(p_ph/p_th)⌉ rounded up to odd, at least 3.
pub fn code_distance(eps_t: f64, dev: &DeviceModel) -> Result<u64> {
    if dev.p_ph >= dev.p_th {
        return Err(Error::AboveThreshold { p_phys: dev.p_ph, p_th: dev.p_th });
    }
    let raw = 2.0 * eps_t.ln() / (dev.p_ph / dev.p_th).ln();
    let mut d = raw.ceil().max(3.0) as u64;
    if d % 2 == 0 {
        d += 1;
    }
    Ok(d.max(3))
}

/// 2d²·(N + N_fac): data patches plus factory overhead.
pub fn physical_qubits(n_logical: u64, distance: u64, n_factories: u64) -> u64 {
    2 * distance * distance * (n_logical + n_factories)
}

/// Cycles to produce one magic state at distance d.
pub fn code_cycles(dev: &DeviceModel, distance: u64) -> u64 {
    (dev.cycles_per_state * distance).div_ceil(CYCLES_REF_DISTANCE)
}

/// t_q = (cycles/d)·(N_T/N_fac)·(d·τ).
pub fn quantum_runtime(t_count_total: u64, distance: u64, dev: &DeviceModel) -> f64 {
    let cycles = code_cycles(dev, distance) as f64;
    (cycles / distance as f64)
        * (t_count_total as f64 / dev.n_factories as f64)
        * (distance as f64 * dev.tau_cycle)
}

/// Full pipeline: rotation count → budget split → code distance →
/// qubit count → runtime.
pub fn estimate_full(
    n: u64,
    degree: u64,
    p: u64,
    target_fidelity: f64,
    dev: &DeviceModel,
) -> Result<ResourceEstimate> {
    let n_rotations = rotation_count(n, degree, p)?;
    let split = budget_split(n_rotations, target_fidelity, 3.0)?;
    let distance = code_distance(split.eps_t, dev)?;
    Ok(ResourceEstimate {
        n_rotations,
        rotation_accuracy: split.rotation_accuracy,
        t_count_total: split.t_count_total,
        eps_t: split.eps_t,
        delta_opt: split.delta_opt,
        distance,
        physical_qubits: physical_qubits(n, distance, dev.n_factories),
        runtime_seconds: quantum_runtime(split.t_count_total, distance, dev),
    })
}
