//! Suite runner: generates one instance family, runs every roster entry
//! on every instance in a worker pool, and appends the records to disk.
//! When the roster mixes circuit depths with classical solvers it also
//! renders a mean cut-fraction comparison table.

use std::time::Instant;

use rayon::prelude::*;

use rwsq_core::classical::{
    bm_optimize, bm_round_deterministic, bm_sequential_perturb, default_rank, hlz_local_improve,
    hyperplane_round, local_search_to_convergence, rank_k_relax, simulated_bifurcation,
    AscentConfig,
};
use rwsq_core::graph::{brute_force_maxcut, generate_random_regular, Cut, Graph};
use rwsq_core::numeric::mean_stderr;
use rwsq_core::params::{build_subgraph_pool, fit_fixed_parameters, lookup_fixed_params};
use rwsq_core::qaoa::{
    expected_cut, lightcone_expected_cut, rws_qaoa_state, sample_bitstrings, QaoaSchedule,
    STATEVECTOR_CAP,
};
use rwsq_core::rng::derive_seed;
use rwsq_core::warmstart::{default_lambda, optimize_warmstart, OptimizerConfig, WarmStart};
use rwsq_core::Error;

use crate::config::{HarnessConfig, SolverConfig};
use crate::records::{append_records, ExperimentRecord};
use crate::CliError;

/// How a depth-p schedule is chosen.
#[derive(Debug, Clone)]
pub enum ScheduleSource {
    TableS1,
    Fitted,
    Explicit(QaoaSchedule),
}

impl ScheduleSource {
    fn from_config(cfg: &SolverConfig, p: usize) -> Result<ScheduleSource, CliError> {
        match cfg.source.as_deref().unwrap_or("table_s1") {
            "table_s1" => Ok(ScheduleSource::TableS1),
            "fitted" => Ok(ScheduleSource::Fitted),
            "explicit" => {
                let gammas = cfg.gammas.clone().unwrap_or_default();
                let betas = cfg.betas.clone().unwrap_or_default();
                if gammas.len() != p || betas.len() != p {
                    return Err(CliError::Config(format!(
                        "explicit schedule needs {p} gammas and betas"
                    )));
                }
                Ok(ScheduleSource::Explicit(QaoaSchedule::new(gammas, betas)?))
            }
            other => Err(CliError::Config(format!("unknown schedule source {other:?}"))),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            ScheduleSource::TableS1 => "table_s1",
            ScheduleSource::Fitted => "fitted",
            ScheduleSource::Explicit(_) => "explicit",
        }
    }
}

fn resolve_schedule(
    g: &Graph,
    ws: &WarmStart,
    degree: usize,
    p: usize,
    source: &ScheduleSource,
    seed: u64,
) -> Result<QaoaSchedule, CliError> {
    if p == 0 {
        return Ok(QaoaSchedule::empty());
    }
    match source {
        ScheduleSource::TableS1 => Ok(lookup_fixed_params(degree, p)?.1),
        ScheduleSource::Explicit(s) => Ok(s.clone()),
        ScheduleSource::Fitted => {
            let pool = build_subgraph_pool(&[(g.clone(), ws.clone())], p)?;
            let k = pool.len().min(48);
            let init = lookup_fixed_params(degree, p).ok().map(|(_, s)| s);
            let (sched, _) = fit_fixed_parameters(&pool, k, p, seed, init.as_ref())?;
            Ok(sched)
        }
    }
}

/// Warm start, schedule lookup, exact expectation, and optional
/// sampling for one graph. The expectation uses per-edge lightcones and
/// falls back to the full statevector when a lightcone outgrows the cap
/// but the whole graph still fits.
pub fn qaoa_pipeline(
    g: &Graph,
    instance: &str,
    cfg: &SolverConfig,
    seed: u64,
    workers: usize,
    f_max: Option<u64>,
) -> Result<ExperimentRecord, CliError> {
    let start = Instant::now();
    let degree = g.regular_degree().unwrap_or(g.max_degree());
    let p = cfg.depth.unwrap_or(1);
    let lambda = match cfg.lambda.or_else(|| default_lambda(degree)) {
        Some(l) => l,
        None => {
            return Err(CliError::Config(format!(
                "no default regularization for degree {degree}; pass lambda"
            )))
        }
    };
    let source = ScheduleSource::from_config(cfg, p)?;

    let ws = optimize_warmstart(g, lambda, &OptimizerConfig { seed, ..OptimizerConfig::default() })?;
    let sched = resolve_schedule(g, &ws, degree, p, &source, seed)?;

    let expected = match lightcone_expected_cut(g, &ws.thetas, &sched, workers) {
        Ok(v) => v,
        Err(Error::LightconeTooLarge { .. }) if g.n() <= STATEVECTOR_CAP => {
            let state = rws_qaoa_state(g, &ws.thetas, &sched)?;
            expected_cut(&state, g)?
        }
        Err(e) => return Err(e.into()),
    };

    let mut sampled_best = None;
    let mut sampled_best_ls = None;
    if let Some(shots) = cfg.shots {
        if g.n() > STATEVECTOR_CAP {
            return Err(Error::TooLarge {
                what: "sampling statevector",
                cap: STATEVECTOR_CAP,
                got: g.n(),
                unit: "vertices",
            }
            .into());
        }
        let state = rws_qaoa_state(g, &ws.thetas, &sched)?;
        let samples = sample_bitstrings(&state, shots, derive_seed(seed, 0x5A3));
        let best_mask = samples
            .iter()
            .copied()
            .max_by_key(|&m| g.cut_value_mask(m))
            .ok_or_else(|| CliError::Config("shots must be positive".into()))?;
        let best = Cut::from_mask(g, best_mask);
        let improved = local_search_to_convergence(g, &best.assignment)?;
        sampled_best = Some(best.value as f64);
        sampled_best_ls = Some(improved.value as f64);
    }

    let edges = g.edge_count() as f64;
    let mut snapshot = serde_json::to_value(cfg).map_err(|e| CliError::Io(e.to_string()))?;
    snapshot["resolved_source"] = serde_json::Value::String(source.name().into());
    let ratio = f_max.map(|f| expected / f as f64);
    let record = ExperimentRecord {
        instance: instance.to_string(),
        solver: cfg.effective_label(),
        config: snapshot,
        seed,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        cut_value: expected,
        cut_fraction: expected / edges,
        approx_ratio: ratio,
        success: ratio.is_some_and(|r| (r - 1.0).abs() <= 1e-12),
        timestamp_ms: ExperimentRecord::now_ms(),
        sampled_best,
        sampled_best_ls,
    };
    record.validate()?;
    Ok(record)
}

fn classical_cut(g: &Graph, cfg: &SolverConfig, seed: u64) -> Result<Cut, CliError> {
    let ascent = AscentConfig { seed, ..AscentConfig::default() };
    let mut cut = match cfg.id.as_str() {
        "brute" => {
            let bf = brute_force_maxcut(g)?;
            Cut::from_mask(g, bf.optima[0])
        }
        "bm" => {
            let sol = bm_optimize(g, cfg.multistarts.unwrap_or(8), &ascent)?;
            let k = cfg.perturbations.unwrap_or(0);
            if k > 0 {
                bm_sequential_perturb(g, &sol, k, 0.3, &ascent)?
            } else {
                bm_round_deterministic(g, &sol)?
            }
        }
        "sb" => simulated_bifurcation(
            g,
            cfg.agents.unwrap_or(8),
            cfg.steps.unwrap_or(3000),
            cfg.dt.unwrap_or(0.25),
            seed,
        )?,
        "gw" => {
            let rank = cfg.rank.unwrap_or_else(|| default_rank(g.n()));
            let vs = rank_k_relax(g, rank, &ascent)?;
            hyperplane_round(g, &vs, cfg.rounds.unwrap_or(20), seed)?.best
        }
        "hlz-ls" => {
            let mut rng = rwsq_core::rng::run_rng(seed, 0);
            let x: Vec<bool> = (0..g.n()).map(|_| rand::Rng::random(&mut rng)).collect();
            let ls = local_search_to_convergence(g, &x)?;
            hlz_local_improve(g, &ls.assignment)?
        }
        other => return Err(CliError::Config(format!("unknown solver id {other:?}"))),
    };
    if cfg.local_search.unwrap_or(false) && cfg.id != "brute" {
        cut = local_search_to_convergence(g, &cut.assignment)?;
    }
    Ok(cut)
}

fn run_task(
    g: &Graph,
    instance: &str,
    cfg: &SolverConfig,
    seed: u64,
    workers: usize,
    f_max: Option<u64>,
) -> Result<ExperimentRecord, CliError> {
    if cfg.id == "qaoa" {
        return qaoa_pipeline(g, instance, cfg, seed, workers, f_max);
    }
    let start = Instant::now();
    let cut = classical_cut(g, cfg, seed)?;
    let ratio = f_max.map(|f| cut.value as f64 / f as f64);
    let record = ExperimentRecord {
        instance: instance.to_string(),
        solver: cfg.effective_label(),
        config: serde_json::to_value(cfg).map_err(|e| CliError::Io(e.to_string()))?,
        seed,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        cut_value: cut.value as f64,
        cut_fraction: cut.value as f64 / g.edge_count() as f64,
        approx_ratio: ratio,
        success: ratio.is_some_and(|r| (r - 1.0).abs() <= 1e-12),
        timestamp_ms: ExperimentRecord::now_ms(),
        sampled_best: None,
        sampled_best_ls: None,
    };
    record.validate()?;
    Ok(record)
}

pub fn instance_id(family_seed: u64, n: usize, degree: usize, index: usize) -> String {
    format!("rr{n}d{degree}-s{family_seed}-i{index}")
}

/// Generates the family, runs every (instance, roster entry) task on
/// the pool, and appends all records to the configured output. Task
/// order, seeds, and therefore cut values are independent of the worker
/// count.
pub fn run_suite(cfg: &HarnessConfig, workers: usize) -> Result<Vec<ExperimentRecord>, CliError> {
    cfg.validate()?;
    let fam = &cfg.instances;
    let graphs: Vec<(String, Graph, u64)> = (0..fam.count)
        .map(|i| {
            let gseed = derive_seed(fam.seed, i as u64);
            let g = generate_random_regular(fam.n, fam.degree, gseed)?;
            Ok((instance_id(fam.seed, fam.n, fam.degree, i), g, gseed))
        })
        .collect::<Result<_, Error>>()?;

    // the optimum is known exactly when brute force is on the roster
    let want_fmax = cfg.solvers.iter().any(|s| s.id == "brute");
    let f_max: Vec<Option<u64>> = graphs
        .iter()
        .map(|(_, g, _)| {
            if want_fmax {
                brute_force_maxcut(g).map(|bf| Some(bf.f_max))
            } else {
                Ok(None)
            }
        })
        .collect::<Result<_, Error>>()?;

    let tasks: Vec<(usize, usize)> = (0..graphs.len())
        .flat_map(|i| (0..cfg.solvers.len()).map(move |s| (i, s)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Io(e.to_string()))?;
    let records: Vec<ExperimentRecord> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(i, s)| {
                let (id, g, gseed) = &graphs[i];
                let seed = derive_seed(*gseed, 1000 + s as u64);
                run_task(g, id, &cfg.solvers[s], seed, workers, f_max[i])
            })
            .collect::<Result<_, CliError>>()
    })?;

    append_records(&cfg.output, &records)?;
    Ok(records)
}

/// Mean cut fraction per roster label, one row each, plus paired-margin
/// lines comparing the deepest circuit entry against every classical
/// entry.
pub fn depth_table(cfg: &HarnessConfig, records: &[ExperimentRecord]) -> String {
    if records.is_empty() {
        return String::new();
    }
    let labels: Vec<String> = cfg.solvers.iter().map(|s| s.effective_label()).collect();
    let mut out = String::new();
    out.push_str(&format!("{:<18} {:>12} {:>12} {:>10}\n", "solver", "mean_frac", "stderr", "records"));
    let fractions_of = |label: &str| -> Vec<f64> {
        records.iter().filter(|r| r.solver == label).map(|r| r.cut_fraction).collect()
    };
    for label in &labels {
        let fr = fractions_of(label);
        if fr.is_empty() {
            continue;
        }
        let (mean, stderr) = mean_stderr(&fr);
        out.push_str(&format!("{label:<18} {mean:>12.6} {stderr:>12.6} {:>10}\n", fr.len()));
    }

    let deepest = cfg
        .solvers
        .iter()
        .filter(|s| s.id == "qaoa")
        .max_by_key(|s| s.depth.unwrap_or(1))
        .map(|s| s.effective_label());
    if let Some(qlabel) = deepest {
        let qfr = fractions_of(&qlabel);
        for (s, label) in cfg.solvers.iter().zip(&labels) {
            if s.id == "qaoa" || qfr.is_empty() {
                continue;
            }
            let cfr = fractions_of(label);
            if cfr.len() != qfr.len() || cfr.is_empty() {
                continue;
            }
            let diffs: Vec<f64> = qfr.iter().zip(&cfr).map(|(a, b)| a - b).collect();
            let (mean, stderr) = mean_stderr(&diffs);
            out.push_str(&format!(
                "margin {qlabel} vs {label}: {mean:+.6} +/- {stderr:.6} (paired over {} instances)\n",
                diffs.len()
            ));
        }
    }
    out
}
