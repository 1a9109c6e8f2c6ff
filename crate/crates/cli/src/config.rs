//! Harness configuration: a TOML file with one instance family and a
//! solver roster. Precedence is defaults, then the config file, then
//! command-line flags; `RWSQ_WORKERS` overrides the worker count unless
//! a `--workers` flag is given.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

pub const WORKERS_ENV: &str = "RWSQ_WORKERS";

/// The random regular family every roster entry runs on.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFamily {
    pub n: usize,
    pub degree: usize,
    pub count: usize,
    #[serde(default)]
    pub seed: u64,
}

/// One roster entry: a solver id plus its parameters. Every field is
/// optional so a roster line can be as short as `id = "brute"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub id: String,
    /// Record label; defaults to the id plus parameter suffixes.
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub multistarts: Option<usize>,
    /// Sequential perturbation rounds after the initial rounding.
    #[serde(default)]
    pub perturbations: Option<usize>,
    /// Run bit-flip local search on the solver's output.
    #[serde(default)]
    pub local_search: Option<bool>,
    #[serde(default)]
    pub agents: Option<usize>,
    #[serde(default)]
    pub steps: Option<usize>,
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default)]
    pub rank: Option<usize>,
    /// Hyperplane rounding repetitions.
    #[serde(default)]
    pub rounds: Option<usize>,
    /// Circuit depth p.
    #[serde(default)]
    pub depth: Option<usize>,
    /// Schedule source: "table_s1", "fitted", or "explicit".
    #[serde(default)]
    pub source: Option<String>,
    #[serde(default)]
    pub gammas: Option<Vec<f64>>,
    #[serde(default)]
    pub betas: Option<Vec<f64>>,
    #[serde(default)]
    pub shots: Option<usize>,
    /// Warm-start regularization override.
    #[serde(default)]
    pub lambda: Option<f64>,
}

pub const SOLVER_IDS: [&str; 6] = ["bm", "sb", "gw", "hlz-ls", "brute", "qaoa"];

impl SolverConfig {
    pub fn bare(id: &str) -> SolverConfig {
        SolverConfig {
            id: id.to_string(),
            label: None,
            multistarts: None,
            perturbations: None,
            local_search: None,
            agents: None,
            steps: None,
            dt: None,
            rank: None,
            rounds: None,
            depth: None,
            source: None,
            gammas: None,
            betas: None,
            shots: None,
            lambda: None,
        }
    }

    pub fn effective_label(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        match self.id.as_str() {
            "qaoa" => format!("qaoa-p{}", self.depth.unwrap_or(1)),
            "bm" => {
                let mut l = String::from("bm");
                if self.perturbations.unwrap_or(0) > 0 {
                    l.push_str("+perturb");
                }
                if self.local_search.unwrap_or(false) {
                    l.push_str("+ls");
                }
                l
            }
            other => other.to_string(),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !SOLVER_IDS.contains(&self.id.as_str()) {
            return Err(CliError::Config(format!(
                "unknown solver id {:?}; expected one of {SOLVER_IDS:?}",
                self.id
            )));
        }
        if let Some(src) = &self.source {
            if !["table_s1", "fitted", "explicit"].contains(&src.as_str()) {
                return Err(CliError::Config(format!("unknown schedule source {src:?}")));
            }
            if src == "explicit" {
                let p = self.depth.unwrap_or(1);
                let ok = self.gammas.as_ref().is_some_and(|g| g.len() == p)
                    && self.betas.as_ref().is_some_and(|b| b.len() == p);
                if !ok {
                    return Err(CliError::Config(format!(
                        "explicit source needs gammas and betas of length {p}"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarnessConfig {
    pub instances: InstanceFamily,
    #[serde(default)]
    pub solvers: Vec<SolverConfig>,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default)]
    pub workers: Option<usize>,
}

fn default_output() -> PathBuf {
    PathBuf::from("records.ndjson")
}

impl Default for HarnessConfig {
    fn default() -> HarnessConfig {
        HarnessConfig {
            instances: InstanceFamily { n: 16, degree: 3, count: 4, seed: 1 },
            solvers: Vec::new(),
            output: default_output(),
            workers: None,
        }
    }
}

impl HarnessConfig {
    pub fn from_toml_str(text: &str) -> Result<HarnessConfig, CliError> {
        let cfg: HarnessConfig =
            toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<HarnessConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        HarnessConfig::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.instances.n == 0 {
            return Err(CliError::Config("instance size n must be positive".into()));
        }
        if self.workers == Some(0) {
            return Err(CliError::Config("worker count must be positive".into()));
        }
        for s in &self.solvers {
            s.validate()?;
        }
        Ok(())
    }

    /// Flag beats environment beats config beats the serial default.
    pub fn effective_workers(&self, flag: Option<usize>) -> Result<usize, CliError> {
        if let Some(w) = flag {
            if w == 0 {
                return Err(CliError::Config("worker count must be positive".into()));
            }
            return Ok(w);
        }
        if let Ok(raw) = std::env::var(WORKERS_ENV) {
            let w: usize = raw
                .parse()
                .map_err(|_| CliError::Config(format!("{WORKERS_ENV}={raw:?} is not a number")))?;
            if w == 0 {
                return Err(CliError::Config(format!("{WORKERS_ENV} must be positive")));
            }
            return Ok(w);
        }
        Ok(self.workers.unwrap_or(1))
    }
}
