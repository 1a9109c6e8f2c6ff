//! Fixed-parameter schedules for regular graphs.
//!
//! Ships a versioned table of optimized (λ, γ, β) values per (degree, p)
//! and implements the protocol that produces such schedules: sample edge
//! lightcones from warm-started instances, then maximize the summed
//! per-edge energy over one shared schedule. Because the energy of an
//! edge only depends on its depth-p neighborhood, schedules fitted on
//! modest pools transfer across instances of the same degree.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rand::Rng as _;
use rayon::prelude::*;
use serde::Deserialize;

use crate::error::Error;
use crate::graph::{edge_lightcone, Graph, Lightcone};
use crate::numeric::pairwise_sum;
use crate::qaoa::{lightcone_edge_term, QaoaSchedule, STATEVECTOR_CAP};
use crate::rng::Rng;
use crate::warmstart::WarmStart;
use crate::Result;

/// One sampled edge neighborhood: the lightcone, the warm-start angles
/// restricted to it, and where it came from.
#[derive(Debug, Clone)]
pub struct SubgraphSample {
    pub lightcone: Lightcone,
    /// Follows the lightcone's local vertex indexing.
    pub local_thetas: Vec<f64>,
    /// (index into the source graph list, original edge).
    pub source: (usize, (u32, u32)),
}

/// Shipped (degree, p) → (λ, schedule) table.
#[derive(Debug, Clone)]
pub struct FixedParameterTable {
    entries: BTreeMap<(usize, usize), (f64, QaoaSchedule)>,
}

#[derive(Deserialize)]
struct TableFile {
    version: u32,
    source: String,
    entries: Vec<TableEntryFile>,
}

#[derive(Deserialize)]
struct TableEntryFile {
    degree: usize,
    p: usize,
    lambda: f64,
    gammas: Vec<f64>,
    betas: Vec<f64>,
}

static SHIPPED_JSON: &str = include_str!("data/fixed_params.json");
static SHIPPED: OnceLock<FixedParameterTable> = OnceLock::new();

impl FixedParameterTable {
    /// The table embedded in the crate.
    pub fn shipped() -> &'static FixedParameterTable {
        SHIPPED.get_or_init(|| {
            FixedParameterTable::from_json_str(SHIPPED_JSON).expect("embedded table is valid")
        })
    }

    pub fn from_json_str(s: &str) -> Result<FixedParameterTable> {
        let file: TableFile = serde_json::from_str(s)?;
        if file.version != 1 {
            return Err(Error::Parse(format!("unsupported table version {}", file.version)));
        }
        if file.source != "table_s1" && file.source != "fitted" {
            return Err(Error::Parse(format!("unknown table source {:?}", file.source)));
        }
        let mut entries = BTreeMap::new();
        for e in file.entries {
            if e.gammas.len() != e.p || e.betas.len() != e.p {
                return Err(Error::Parse(format!(
                    "entry (degree {}, p {}) has wrong schedule length",
                    e.degree, e.p
                )));
            }
            let sched = QaoaSchedule::new(e.gammas, e.betas)?;
            if entries.insert((e.degree, e.p), (e.lambda, sched)).is_some() {
                return Err(Error::Parse(format!(
                    "duplicate entry (degree {}, p {})",
                    e.degree, e.p
                )));
            }
        }
        Ok(FixedParameterTable { entries })
    }

    pub fn lookup(&self, degree: usize, p: usize) -> Result<(f64, &QaoaSchedule)> {
        self.entries
            .get(&(degree, p))
            .map(|(l, s)| (*l, s))
            .ok_or(Error::MissingTableEntry { degree, p })
    }

    /// Entries in (degree, p) order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64, &QaoaSchedule)> {
        self.entries.iter().map(|(&(d, p), (l, s))| (d, p, *l, s))
    }
}

/// Shipped (λ, schedule) for a (degree, p) pair.
pub fn lookup_fixed_params(degree: usize, p: usize) -> Result<(f64, QaoaSchedule)> {
    let (lambda, sched) = FixedParameterTable::shipped().lookup(degree, p)?;
    Ok((lambda, sched.clone()))
}

/// Collects one depth-p sample per edge per graph, carrying each graph's
/// warm-start angles through the lightcone vertex maps.
pub fn build_subgraph_pool(
    graphs: &[(Graph, WarmStart)],
    p: usize,
) -> Result<Vec<SubgraphSample>> {
    let mut pool = Vec::new();
    for (gi, (g, ws)) in graphs.iter().enumerate() {
        if ws.thetas.len() != g.n() {
            return Err(Error::LengthMismatch { expected: g.n(), got: ws.thetas.len() });
        }
        for &e in g.edges() {
            let lightcone = edge_lightcone(g, e, p)?;
            let local_thetas: Vec<f64> =
                lightcone.vertex_map.iter().map(|&v| ws.thetas[v as usize]).collect();
            pool.push(SubgraphSample { lightcone, local_thetas, source: (gi, e) });
        }
    }
    Ok(pool)
}

const FD_STEP: f64 = 1e-4;

fn fd_gradient(f: &(impl Fn(&[f64]) -> f64 + Sync), x: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        probe[i] = x[i] + FD_STEP;
        let up = f(&probe);
        probe[i] = x[i] - FD_STEP;
        let down = f(&probe);
        probe[i] = x[i];
        g[i] = (up - down) / (2.0 * FD_STEP);
    }
    g
}

fn clamp_to_box(x: &mut [f64], lo: &[f64], hi: &[f64]) {
    for i in 0..x.len() {
        x[i] = x[i].clamp(lo[i], hi[i]);
    }
}

/// Box-constrained ascent: an adaptive-moment phase to get near a
/// maximizer, then monotone backtracking steps along the projected
/// finite-difference gradient.
fn ascend_box(
    f: &(impl Fn(&[f64]) -> f64 + Sync),
    x0: &[f64],
    lo: &[f64],
    hi: &[f64],
) -> (Vec<f64>, f64) {
    let dim = x0.len();
    let (b1, b2, eps): (f64, f64, f64) = (0.9, 0.999, 1e-8);
    let lr = 0.08;
    let mut x = x0.to_vec();
    clamp_to_box(&mut x, lo, hi);
    let mut best_x = x.clone();
    let mut best_f = f(&x);
    let mut m = vec![0.0; dim];
    let mut v = vec![0.0; dim];
    for step in 1..=120 {
        let g = fd_gradient(f, &x);
        for i in 0..dim {
            m[i] = b1 * m[i] + (1.0 - b1) * g[i];
            v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
            let mh = m[i] / (1.0 - b1.powi(step));
            let vh = v[i] / (1.0 - b2.powi(step));
            x[i] += lr * mh / (vh.sqrt() + eps);
        }
        clamp_to_box(&mut x, lo, hi);
        let fx = f(&x);
        if fx > best_f {
            best_f = fx;
            best_x.copy_from_slice(&x);
        }
    }

    x.copy_from_slice(&best_x);
    let mut fx = best_f;
    for _ in 0..40 {
        let mut g = fd_gradient(f, &x);
        for i in 0..dim {
            // project: drop components pushing out of the box
            if (x[i] <= lo[i] + 1e-12 && g[i] < 0.0) || (x[i] >= hi[i] - 1e-12 && g[i] > 0.0) {
                g[i] = 0.0;
            }
        }
        let gnorm2: f64 = g.iter().map(|v| v * v).sum();
        if gnorm2.sqrt() < 1e-7 {
            break;
        }
        let mut step = 0.1;
        let mut accepted = false;
        for _ in 0..30 {
            let mut cand = x.clone();
            for i in 0..dim {
                cand[i] += step * g[i];
            }
            clamp_to_box(&mut cand, lo, hi);
            let fc = f(&cand);
            if fc >= fx + 1e-4 * step * gnorm2 {
                x = cand;
                fx = fc;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if fx > best_f {
        (x, fx)
    } else {
        (best_x, best_f)
    }
}

fn ramp_start(p: usize) -> Vec<f64> {
    let mut x = Vec::with_capacity(2 * p);
    for t in 0..p {
        x.push(2.4 * (t + 1) as f64 / (p + 1) as f64);
    }
    for t in 0..p {
        x.push(1.2 * (1.0 - (t + 1) as f64 / (p + 1) as f64));
    }
    x
}

/// Fits one depth-p schedule to K subgraphs sampled uniformly without
/// replacement from the pool, maximizing the summed edge energies over
/// γ_t ∈ [0, π], β_t ∈ [0, π/2]. Restarts (8 random points, a linear
/// ramp, and `init` if given) are deliberately decoupled from `seed`:
/// with K = pool size the fit has no randomness at all. Returns the
/// schedule and the achieved mean per-edge energy.
pub fn fit_fixed_parameters(
    pool: &[SubgraphSample],
    k: usize,
    p: usize,
    seed: u64,
    init: Option<&QaoaSchedule>,
) -> Result<(QaoaSchedule, f64)> {
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    if k == 0 || k > pool.len() {
        return Err(Error::InvalidParameter {
            name: "k",
            reason: format!("need 1 ≤ k ≤ pool size {}, got {}", pool.len(), k),
        });
    }
    if let Some(s) = init {
        if s.p() != p {
            return Err(Error::InvalidParameter {
                name: "init",
                reason: format!("schedule has p={}, fit wants p={}", s.p(), p),
            });
        }
    }

    use rand_chacha::rand_core::SeedableRng;
    let mut rng = Rng::seed_from_u64(seed);
    let mut indices = rand::seq::index::sample(&mut rng, pool.len(), k).into_vec();
    indices.sort_unstable();
    let chosen: Vec<&SubgraphSample> = indices.iter().map(|&i| &pool[i]).collect();
    for s in &chosen {
        let size = s.lightcone.subgraph.n();
        if size > STATEVECTOR_CAP {
            let (u, v) = s.source.1;
            return Err(Error::LightconeTooLarge { u, v, size, cap: STATEVECTOR_CAP });
        }
        if s.local_thetas.len() != size {
            return Err(Error::LengthMismatch { expected: size, got: s.local_thetas.len() });
        }
    }

    let objective = |gb: &[f64]| -> f64 {
        let sched = QaoaSchedule::new(gb[..p].to_vec(), gb[p..].to_vec())
            .expect("gamma and beta halves have equal length");
        let terms: Vec<f64> = chosen
            .par_iter()
            .map(|s| {
                lightcone_edge_term(&s.lightcone, &s.local_thetas, &sched)
                    .expect("samples validated against the cap")
            })
            .collect();
        pairwise_sum(&terms)
    };

    let lo = vec![0.0; 2 * p];
    let hi: Vec<f64> = (0..2 * p)
        .map(|i| if i < p { std::f64::consts::PI } else { std::f64::consts::FRAC_PI_2 })
        .collect();

    let mut starts: Vec<Vec<f64>> = Vec::new();
    let mut start_rng = Rng::seed_from_u64(0xF17_5EED);
    for _ in 0..8 {
        starts.push((0..2 * p).map(|i| start_rng.random_range(lo[i]..=hi[i])).collect());
    }
    starts.push(ramp_start(p));
    if let Some(s) = init {
        let mut x = s.gammas().to_vec();
        x.extend_from_slice(s.betas());
        starts.push(x);
    }

    let results: Vec<(Vec<f64>, f64)> = starts
        .par_iter()
        .map(|x0| ascend_box(&objective, x0, &lo, &hi))
        .collect();
    let mut best = 0usize;
    for i in 1..results.len() {
        if results[i].1 > results[best].1 {
            best = i;
        }
    }
    let (x, value) = &results[best];
    let sched = QaoaSchedule::new(x[..p].to_vec(), x[p..].to_vec())?;
    Ok((sched, value / k as f64))
}

/// Mean per-edge energy of a schedule over a sample pool, the quantity
/// `fit_fixed_parameters` maximizes.
pub fn mean_pool_energy(pool: &[SubgraphSample], sched: &QaoaSchedule) -> Result<f64> {
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    let terms: Vec<f64> = pool
        .par_iter()
        .map(|s| lightcone_edge_term(&s.lightcone, &s.local_thetas, sched))
        .collect::<Result<_>>()?;
    Ok(pairwise_sum(&terms) / pool.len() as f64)
}
