//! `rwsq`: generate Max-Cut instances, run warm starts, circuits, and
//! classical solvers on them, estimate fault-tolerant footprints, and
//! drive benchmark suites from a config file.

use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand};

use rwsq_cli::config::{HarnessConfig, SolverConfig};
use rwsq_cli::crossover::{crossover_csv, crossover_report, gather_progress};
use rwsq_cli::records::records_to_csv;
use rwsq_cli::suite::{depth_table, qaoa_pipeline, run_suite};
use rwsq_cli::CliError;

use rwsq_core::classical::{parallel_multistart, SolverKind};
use rwsq_core::graph::{generate_random_regular, Graph};
use rwsq_core::params::{build_subgraph_pool, fit_fixed_parameters, lookup_fixed_params};
use rwsq_core::qaoa::QaoaSchedule;
use rwsq_core::resource::{circuit_fidelity, estimate_full, DeviceModel};
use rwsq_core::rng::derive_seed;
use rwsq_core::warmstart::{default_lambda, optimize_warmstart, OptimizerConfig};

#[derive(Parser)]
#[command(name = "rwsq", version, about = "Warm-started circuit and classical Max-Cut benchmarks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate random regular graphs as JSON lines
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimize a regularized warm start for one graph
    Warmstart {
        #[arg(long)]
        graph: PathBuf,
        /// Line to read from a multi-graph file
        #[arg(long, default_value_t = 0)]
        index: usize,
        /// Regularization weight; defaults from the graph degree
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 8)]
        multistarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact expected cut of the warm-started circuit
    QaoaExpect {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// table_s1, fitted, or explicit
        #[arg(long, default_value = "table_s1")]
        source: String,
        /// Schedule JSON file, required with --source explicit
        #[arg(long)]
        schedule: Option<PathBuf>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample bitstrings from the circuit and report best-of-shots
    QaoaSample {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, default_value = "table_s1")]
        source: String,
        #[arg(long)]
        schedule: Option<PathBuf>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 256)]
        shots: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one classical solver with multistarts and a time budget
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        index: usize,
        /// bm, sb, gw, hlz-ls, or brute
        #[arg(long)]
        solver: String,
        #[arg(long, default_value_t = 4)]
        multistarts: usize,
        /// Cut fraction to time; omit to just report the best cut
        #[arg(long)]
        target: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        budget_ms: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit a fixed schedule on edge neighborhoods of fresh instances
    FitParams {
        #[arg(long, default_value_t = 3)]
        degree: usize,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        count: usize,
        /// Neighborhoods sampled from the pool; 0 means the whole pool
        #[arg(long, default_value_t = 64)]
        sample_k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Start the search from the shipped table entry when present
        #[arg(long, default_value_t = true)]
        table_init: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fault-tolerant resource estimates as CSV
    Resources {
        /// Problem sizes; repeatable
        #[arg(long = "n", default_values_t = vec![1000u64, 10000, 100000])]
        ns: Vec<u64>,
        #[arg(long, default_value_t = 3)]
        degree: u64,
        #[arg(long, default_value_t = 6)]
        depth: u64,
        #[arg(long, default_value_t = 0.9)]
        target_fidelity: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the configured benchmark suite and append records
    Suite {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Append bare roster entries by id; repeatable
        #[arg(long = "solver")]
        solvers: Vec<String>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        /// Also write the records as CSV next to the output file
        #[arg(long, default_value_t = false)]
        csv: bool,
    },
    /// Time-to-target table for the configured roster
    Crossover {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long = "solver")]
        solvers: Vec<String>,
        /// Cut fraction to time
        #[arg(long)]
        target: f64,
        #[arg(long, default_value_t = 4)]
        multistarts: usize,
        #[arg(long, default_value_t = 2000)]
        budget_ms: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}

fn load_graph(path: &Path, index: usize) -> Result<Graph, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let line = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .nth(index)
        .ok_or_else(|| CliError::Config(format!("{}: no graph at line {index}", path.display())))?;
    if line.trim_start().starts_with('{') {
        Ok(Graph::from_json_str(line)?)
    } else {
        Ok(Graph::parse_edge_list(&text)?)
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(path, text)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn qaoa_solver_config(
    depth: usize,
    source: &str,
    schedule: Option<&Path>,
    lambda: Option<f64>,
    shots: Option<usize>,
) -> Result<SolverConfig, CliError> {
    let mut cfg = SolverConfig::bare("qaoa");
    cfg.depth = Some(depth);
    cfg.source = Some(source.to_string());
    cfg.lambda = lambda;
    cfg.shots = shots;
    if source == "explicit" {
        let path = schedule
            .ok_or_else(|| CliError::Config("--source explicit needs --schedule".into()))?;
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let (sched, _) = QaoaSchedule::from_json_str(&text)?;
        cfg.gammas = Some(sched.gammas().to_vec());
        cfg.betas = Some(sched.betas().to_vec());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn merged_config(
    config: Option<&Path>,
    n: Option<usize>,
    degree: Option<usize>,
    count: Option<usize>,
    seed: Option<u64>,
    solvers: &[String],
    output: Option<&Path>,
    workers: Option<usize>,
) -> Result<HarnessConfig, CliError> {
    let mut cfg = match config {
        Some(path) => HarnessConfig::from_file(path)?,
        None => HarnessConfig::default(),
    };
    if let Some(n) = n {
        cfg.instances.n = n;
    }
    if let Some(d) = degree {
        cfg.instances.degree = d;
    }
    if let Some(c) = count {
        cfg.instances.count = c;
    }
    if let Some(s) = seed {
        cfg.instances.seed = s;
    }
    for id in solvers {
        cfg.solvers.push(SolverConfig::bare(id));
    }
    if let Some(o) = output {
        cfg.output = o.to_path_buf();
    }
    if let Some(w) = workers {
        cfg.workers = Some(w);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Gen { n, degree, count, seed, out } => {
            let mut text = String::new();
            for i in 0..count {
                let g = generate_random_regular(n, degree, derive_seed(seed, i as u64))?;
                text.push_str(&g.to_json_string());
                text.push('\n');
            }
            emit(out.as_deref(), &text)
        }
        Cmd::Warmstart { graph, index, lambda, multistarts, seed, out } => {
            let g = load_graph(&graph, index)?;
            let degree = g.regular_degree().unwrap_or(g.max_degree());
            let lambda = lambda.or_else(|| default_lambda(degree)).ok_or_else(|| {
                CliError::Config(format!("no default regularization for degree {degree}; pass --lambda"))
            })?;
            let cfg = OptimizerConfig { multistarts, seed, ..OptimizerConfig::default() };
            let ws = optimize_warmstart(&g, lambda, &cfg)?;
            emit(out.as_deref(), &format!("{}\n", ws.to_json_string()))
        }
        Cmd::QaoaExpect { graph, index, depth, source, schedule, lambda, seed, workers, out } => {
            let g = load_graph(&graph, index)?;
            let cfg = qaoa_solver_config(depth, &source, schedule.as_deref(), lambda, None)?;
            let w = HarnessConfig::default().effective_workers(workers)?;
            let record = qaoa_pipeline(&g, "cli", &cfg, seed, w, None)?;
            let json = serde_json::to_string(&record).map_err(|e| CliError::Io(e.to_string()))?;
            emit(out.as_deref(), &format!("{json}\n"))
        }
        Cmd::QaoaSample { graph, index, depth, source, schedule, lambda, shots, seed, out } => {
            let g = load_graph(&graph, index)?;
            let cfg =
                qaoa_solver_config(depth, &source, schedule.as_deref(), lambda, Some(shots))?;
            let record = qaoa_pipeline(&g, "cli", &cfg, seed, 1, None)?;
            let json = serde_json::to_string(&record).map_err(|e| CliError::Io(e.to_string()))?;
            emit(out.as_deref(), &format!("{json}\n"))
        }
        Cmd::Solve { graph, index, solver, multistarts, target, budget_ms, seed, out } => {
            let g = load_graph(&graph, index)?;
            let kind: SolverKind = solver.parse::<SolverKind>().map_err(CliError::from)?;
            // an unreachable fraction keeps the budget loop running for
            // pure best-cut searches
            let effective_target = target.unwrap_or(2.0);
            let outcome = parallel_multistart(
                &g,
                kind,
                multistarts,
                effective_target,
                Duration::from_millis(budget_ms),
                seed,
            )?;
            let json = serde_json::json!({
                "solver": kind.to_string(),
                "cut_value": outcome.best.value,
                "cut_fraction": outcome.best.value as f64 / g.edge_count() as f64,
                "time_to_target_s": target.and(outcome.time_to_target),
                "runs": outcome.traces.len(),
            });
            emit(out.as_deref(), &format!("{json}\n"))
        }
        Cmd::FitParams { degree, depth, n, count, sample_k, seed, table_init, out } => {
            let mut pairs = Vec::new();
            let lambda = default_lambda(degree).ok_or_else(|| {
                CliError::Config(format!("no default regularization for degree {degree}"))
            })?;
            for i in 0..count {
                let g = generate_random_regular(n, degree, derive_seed(seed, i as u64))?;
                let ws = optimize_warmstart(
                    &g,
                    lambda,
                    &OptimizerConfig { seed: derive_seed(seed, 100 + i as u64), ..OptimizerConfig::default() },
                )?;
                pairs.push((g, ws));
            }
            let pool = build_subgraph_pool(&pairs, depth)?;
            let k = if sample_k == 0 { pool.len() } else { sample_k.min(pool.len()) };
            let init = if table_init {
                lookup_fixed_params(degree, depth).ok().map(|(_, s)| s)
            } else {
                None
            };
            let (sched, energy) = fit_fixed_parameters(&pool, k, depth, seed, init.as_ref())?;
            let json = serde_json::json!({
                "schedule": serde_json::from_str::<serde_json::Value>(
                    &sched.to_json_string_with_source("fitted")
                ).map_err(|e| CliError::Io(e.to_string()))?,
                "mean_edge_energy": energy,
                "pool_size": pool.len(),
                "sampled": k,
            });
            emit(out.as_deref(), &format!("{json}\n"))
        }
        Cmd::Resources { ns, degree, depth, target_fidelity, out } => {
            let dev = DeviceModel::helios();
            let mut csv = String::from(
                "n,d,p,eps_T,delta_opt,distance,physical_qubits,t_depth,runtime_s\n",
            );
            for &n in &ns {
                let est = estimate_full(n, degree, depth, target_fidelity, &dev)?;
                let t_depth = est.t_count_total as f64 / dev.n_factories as f64;
                csv.push_str(&format!(
                    "{n},{degree},{depth},{:.6e},{:.6e},{},{},{t_depth},{:.6e}\n",
                    est.eps_t,
                    est.delta_opt,
                    est.distance,
                    est.physical_qubits,
                    est.runtime_seconds,
                ));
            }
            // edge count of a regular graph; fidelity is reported for context
            let edges = (ns.first().copied().unwrap_or(0) * degree / 2) as usize;
            if let Some(&n) = ns.first() {
                eprintln!(
                    "circuit fidelity at n={n}: {:.4}",
                    circuit_fidelity(n as usize, edges, depth as usize, &dev)
                );
            }
            emit(out.as_deref(), &csv)
        }
        Cmd::Suite { config, n, degree, count, seed, solvers, output, workers, csv } => {
            let cfg = merged_config(
                config.as_deref(),
                n,
                degree,
                count,
                seed,
                &solvers,
                output.as_deref(),
                workers,
            )?;
            let w = cfg.effective_workers(workers)?;
            let records = run_suite(&cfg, w)?;
            if csv {
                let path = cfg.output.with_extension("csv");
                emit(Some(&path), &records_to_csv(&records))?;
            }
            println!(
                "wrote {} records for {} instances to {}",
                records.len(),
                cfg.instances.count,
                cfg.output.display()
            );
            let table = depth_table(&cfg, &records);
            if !table.is_empty() {
                print!("{table}");
            }
            Ok(())
        }
        Cmd::Crossover {
            config,
            n,
            degree,
            count,
            seed,
            solvers,
            target,
            multistarts,
            budget_ms,
            out,
        } => {
            let cfg = merged_config(
                config.as_deref(),
                n,
                degree,
                count,
                seed,
                &solvers,
                None,
                None,
            )?;
            let records =
                gather_progress(&cfg, target, multistarts, Duration::from_millis(budget_ms))?;
            let rows = crossover_report(&records, target);
            emit(out.as_deref(), &crossover_csv(&rows, target))
        }
    }
}
