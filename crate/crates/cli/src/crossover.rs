//! Time-to-target analysis: how long each classical solver needs to
//! first reach a given cut fraction, minimized over multistarts and
//! aggregated per (solver, instance size).

use std::collections::BTreeMap;
use std::time::Duration;

use rwsq_core::classical::{parallel_multistart, SolverKind};
use rwsq_core::graph::{generate_random_regular, Graph};
use rwsq_core::numeric::mean_stderr;
use rwsq_core::rng::derive_seed;

use crate::config::HarnessConfig;
use crate::suite::instance_id;
use crate::CliError;

/// Best-cut improvement events for every run of one solver on one
/// instance; enough to recover time-to-target for any target after the
/// fact.
#[derive(Debug, Clone)]
pub struct ProgressRecord {
    pub instance: String,
    pub solver: String,
    pub n: usize,
    pub edges: usize,
    /// Per run: (elapsed seconds, best cut value) at each improvement.
    pub runs: Vec<Vec<(f64, u64)>>,
}

impl ProgressRecord {
    /// Minimum over runs of the first time the cut fraction reached
    /// `target`.
    pub fn time_to_target(&self, target: f64) -> Option<f64> {
        let needed = target * self.edges as f64;
        self.runs
            .iter()
            .filter_map(|events| {
                events.iter().find(|&&(_, v)| v as f64 >= needed).map(|&(t, _)| t)
            })
            .min_by(f64::total_cmp)
    }
}

#[derive(Debug, Clone)]
pub struct CrossoverRow {
    pub solver: String,
    pub n: usize,
    pub instances: usize,
    pub reached: usize,
    /// Mean and standard error of time-to-target over the instances
    /// that reached it; absent when none did.
    pub mean_s: Option<f64>,
    pub stderr_s: Option<f64>,
}

/// Aggregates per (solver, n): minimum time-to-target across
/// multistarts, then mean and standard error across instances.
pub fn crossover_report(records: &[ProgressRecord], target: f64) -> Vec<CrossoverRow> {
    let mut groups: BTreeMap<(String, usize), Vec<Option<f64>>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.solver.clone(), r.n))
            .or_default()
            .push(r.time_to_target(target));
    }
    groups
        .into_iter()
        .map(|((solver, n), times)| {
            let reached: Vec<f64> = times.iter().filter_map(|&t| t).collect();
            let (mean_s, stderr_s) = if reached.is_empty() {
                (None, None)
            } else {
                let (m, s) = mean_stderr(&reached);
                (Some(m), Some(s))
            };
            CrossoverRow { solver, n, instances: times.len(), reached: reached.len(), mean_s, stderr_s }
        })
        .collect()
}

/// CSV with one row per (solver, n); unreached groups carry the marker
/// instead of times.
pub fn crossover_csv(rows: &[CrossoverRow], target: f64) -> String {
    let mut out = String::from("solver,n,target,instances,reached,mean_time_s,stderr_time_s\n");
    for r in rows {
        let (mean, stderr) = match (r.mean_s, r.stderr_s) {
            (Some(m), Some(s)) => (format!("{m:.6}"), format!("{s:.6}")),
            _ => ("unreached".to_string(), "unreached".to_string()),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.solver, r.n, target, r.instances, r.reached, mean, stderr
        ));
    }
    out
}

/// Runs every multistart-capable roster entry on the configured family
/// and collects its improvement traces. Circuit entries are skipped:
/// expectation evaluation has no anytime trajectory.
pub fn gather_progress(
    cfg: &HarnessConfig,
    target: f64,
    multistarts: usize,
    budget: Duration,
) -> Result<Vec<ProgressRecord>, CliError> {
    cfg.validate()?;
    let fam = &cfg.instances;
    let kinds: Vec<(String, SolverKind)> = cfg
        .solvers
        .iter()
        .filter(|s| s.id != "qaoa")
        .map(|s| Ok((s.effective_label(), s.id.parse::<SolverKind>()?)))
        .collect::<Result<_, rwsq_core::Error>>()?;

    let mut records = Vec::new();
    for i in 0..fam.count {
        let gseed = derive_seed(fam.seed, i as u64);
        let g: Graph = generate_random_regular(fam.n, fam.degree, gseed)?;
        let id = instance_id(fam.seed, fam.n, fam.degree, i);
        for (label, kind) in &kinds {
            let outcome = parallel_multistart(
                &g,
                *kind,
                multistarts,
                target,
                budget,
                derive_seed(gseed, 0xC405),
            )?;
            records.push(ProgressRecord {
                instance: id.clone(),
                solver: label.clone(),
                n: fam.n,
                edges: g.edge_count(),
                runs: outcome.traces.iter().map(|t| t.events.clone()).collect(),
            });
        }
    }
    Ok(records)
}
