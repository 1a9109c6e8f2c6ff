//! Exact simulation of warm-started QAOA.
//!
//! Small instances run on a dense statevector. Past the qubit cap, the
//! expected cut is evaluated edge by edge on depth-p lightcones: the
//! observable ½(1−Z_iZ_j) after p layers only depends on vertices within
//! distance p of the edge, so simulating the induced subgraph with the
//! restricted warm-start angles reproduces each term exactly.

use num_complex::Complex64;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::{edge_lightcone, Graph, Lightcone};
use crate::numeric::pairwise_sum;
use crate::rng::Rng;
use crate::Result;

/// Dense simulation limit: 2^26 complex doubles is 1 GiB.
pub const STATEVECTOR_CAP: usize = 26;

/// Depth-p parameter schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct QaoaSchedule {
    gammas: Vec<f64>,
    betas: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ScheduleFile {
    p: usize,
    gammas: Vec<f64>,
    betas: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    source: Option<String>,
}

impl QaoaSchedule {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<QaoaSchedule> {
        if gammas.len() != betas.len() {
            return Err(Error::LengthMismatch { expected: gammas.len(), got: betas.len() });
        }
        Ok(QaoaSchedule { gammas, betas })
    }

    /// Depth-0 schedule: the bare warm state.
    pub fn empty() -> QaoaSchedule {
        QaoaSchedule { gammas: Vec::new(), betas: Vec::new() }
    }

    pub fn p(&self) -> usize {
        self.gammas.len()
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn to_json_string(&self) -> String {
        self.json(None)
    }

    /// Serializes with a provenance marker ("fitted" or "table_s1").
    pub fn to_json_string_with_source(&self, source: &str) -> String {
        self.json(Some(source.to_string()))
    }

    fn json(&self, source: Option<String>) -> String {
        serde_json::to_string(&ScheduleFile {
            p: self.p(),
            gammas: self.gammas.clone(),
            betas: self.betas.clone(),
            source,
        })
        .expect("schedule serialization cannot fail")
    }

    /// Parses the schedule format, returning the optional provenance.
    pub fn from_json_str(s: &str) -> Result<(QaoaSchedule, Option<String>)> {
        let file: ScheduleFile = serde_json::from_str(s)?;
        if file.gammas.len() != file.p || file.betas.len() != file.p {
            return Err(Error::Parse(format!(
                "schedule claims p={} but has {} gammas and {} betas",
                file.p,
                file.gammas.len(),
                file.betas.len()
            )));
        }
        Ok((QaoaSchedule { gammas: file.gammas, betas: file.betas }, file.source))
    }
}

/// Dense n-qubit state; basis index bit i is qubit i.
#[derive(Debug, Clone)]
pub struct Statevector {
    n: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    /// Computational basis state |idx⟩, mainly for tests.
    pub fn basis(n: usize, idx: u64) -> Result<Statevector> {
        check_qubits(n)?;
        let mut amps = vec![Complex64::ZERO; 1 << n];
        amps[idx as usize] = Complex64::ONE;
        Ok(Statevector { n, amps })
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n > STATEVECTOR_CAP {
        return Err(Error::TooLarge {
            what: "statevector",
            cap: STATEVECTOR_CAP,
            got: n,
            unit: "qubits",
        });
    }
    Ok(())
}

fn check_state_len(s: &Statevector, n: usize) -> Result<()> {
    if s.n != n {
        return Err(Error::LengthMismatch { expected: n, got: s.n });
    }
    Ok(())
}

/// Product state ⊗_i (cos(θ_i/2)|0⟩ + sin(θ_i/2)|1⟩).
pub fn prepare_warm_state(thetas: &[f64]) -> Result<Statevector> {
    let n = thetas.len();
    check_qubits(n)?;
    let mut amps = vec![Complex64::ZERO; 1 << n];
    amps[0] = Complex64::ONE;
    let mut filled = 1usize;
    for (i, &t) in thetas.iter().enumerate() {
        let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
        let bit = 1usize << i;
        for k in 0..filled {
            let a = amps[k];
            amps[k] = a * c;
            amps[k | bit] = a * s;
        }
        filled <<= 1;
    }
    Ok(Statevector { n, amps })
}

/// Phases every basis state by e^{−i(γ/2)·cut(x)}, applied edge by edge.
/// γ is the per-edge ZZ rotation angle, i.e. the layer is e^{−i(γ/2)H_C}
/// with H_C = Σ ½(1−Z_iZ_j); the shipped fixed-parameter tables quote γ in
/// this convention. The constant part of H_C only shifts the global phase
/// and is irrelevant to every observable this crate computes.
pub fn apply_cost_layer(s: &mut Statevector, g: &Graph, gamma: f64) -> Result<()> {
    check_state_len(s, g.n())?;
    let phase = Complex64::from_polar(1.0, -gamma / 2.0);
    for &(a, b) in g.edges() {
        let (pa, pb) = (1usize << a, 1usize << b);
        for k in 0..s.amps.len() {
            if (k & pa == 0) != (k & pb == 0) {
                s.amps[k] *= phase;
            }
        }
    }
    Ok(())
}

/// Applies ⊗_i e^{−iβ(sinθ_i·X + cosθ_i·Z)} using the closed form
/// cos(β)·I − i·sin(β)·(sinθ_i·X + cosθ_i·Z) per qubit.
pub fn apply_mixer_layer(s: &mut Statevector, thetas: &[f64], beta: f64) -> Result<()> {
    check_state_len(s, thetas.len())?;
    let (cb, sb) = (beta.cos(), beta.sin());
    for (i, &t) in thetas.iter().enumerate() {
        let u00 = Complex64::new(cb, -sb * t.cos());
        let u11 = Complex64::new(cb, sb * t.cos());
        let u01 = Complex64::new(0.0, -sb * t.sin());
        let bit = 1usize << i;
        let mut base = 0usize;
        while base < s.amps.len() {
            for k in base..base + bit {
                let a0 = s.amps[k];
                let a1 = s.amps[k | bit];
                s.amps[k] = u00 * a0 + u01 * a1;
                s.amps[k | bit] = u01 * a0 + u11 * a1;
            }
            base += bit << 1;
        }
    }
    Ok(())
}

/// The depth-p warm-started QAOA state: p alternating cost and mixer
/// layers applied to the warm product state.
pub fn rws_qaoa_state(g: &Graph, thetas: &[f64], sched: &QaoaSchedule) -> Result<Statevector> {
    if thetas.len() != g.n() {
        return Err(Error::LengthMismatch { expected: g.n(), got: thetas.len() });
    }
    let mut s = prepare_warm_state(thetas)?;
    for t in 0..sched.p() {
        apply_cost_layer(&mut s, g, sched.gammas[t])?;
        apply_mixer_layer(&mut s, thetas, sched.betas[t])?;
    }
    Ok(s)
}

/// ⟨½(1 − Z_a Z_b)⟩ for one edge, by amplitude accumulation.
pub fn expected_edge_cut(s: &Statevector, edge: (u32, u32)) -> f64 {
    let (pa, pb) = (1usize << edge.0, 1usize << edge.1);
    let mut zz = 0.0;
    for (k, a) in s.amps.iter().enumerate() {
        let w = a.norm_sqr();
        if (k & pa == 0) == (k & pb == 0) {
            zz += w;
        } else {
            zz -= w;
        }
    }
    0.5 * (1.0 - zz)
}

/// Expected cut Σ_{(i,j)} ⟨½(1 − Z_iZ_j)⟩ of a state.
pub fn expected_cut(s: &Statevector, g: &Graph) -> Result<f64> {
    check_state_len(s, g.n())?;
    let terms: Vec<f64> = g.edges().iter().map(|&(a, b)| expected_edge_cut(s, (a, b))).collect();
    Ok(pairwise_sum(&terms))
}

/// Draws `shots` basis-state samples (bit i = qubit i) from |a_x|²;
/// deterministic given the seed.
pub fn sample_bitstrings(s: &Statevector, shots: usize, seed: u64) -> Vec<u64> {
    use rand_chacha::rand_core::SeedableRng;
    let mut prefix = Vec::with_capacity(s.amps.len());
    let mut acc = 0.0;
    for a in &s.amps {
        acc += a.norm_sqr();
        prefix.push(acc);
    }
    let total = acc;
    let mut rng = Rng::seed_from_u64(seed);
    (0..shots)
        .map(|_| {
            let r = rng.random_range(0.0..total);
            prefix.partition_point(|&c| c <= r).min(s.amps.len() - 1) as u64
        })
        .collect()
}

/// One edge's cut term evaluated on its lightcone with the restricted
/// angles. `local_thetas` follows the lightcone's local indexing.
pub fn lightcone_edge_term(
    lc: &Lightcone,
    local_thetas: &[f64],
    sched: &QaoaSchedule,
) -> Result<f64> {
    let s = rws_qaoa_state(&lc.subgraph, local_thetas, sched)?;
    Ok(expected_edge_cut(&s, lc.center))
}

fn edge_term(g: &Graph, e: (u32, u32), thetas: &[f64], sched: &QaoaSchedule) -> Result<f64> {
    let lc = edge_lightcone(g, e, sched.p())?;
    if lc.subgraph.n() > STATEVECTOR_CAP {
        return Err(Error::LightconeTooLarge {
            u: e.0,
            v: e.1,
            size: lc.subgraph.n(),
            cap: STATEVECTOR_CAP,
        });
    }
    let local: Vec<f64> = lc.vertex_map.iter().map(|&v| thetas[v as usize]).collect();
    lightcone_edge_term(&lc, &local, sched)
}

/// Exact expected cut of the depth-p state, evaluated as a sum of
/// per-edge lightcone terms so it scales past the statevector cap.
///
/// Terms are computed in parallel on `worker_count` threads but summed
/// in edge order with pairwise summation, so the result is bit-identical
/// for any worker count.
pub fn lightcone_expected_cut(
    g: &Graph,
    thetas: &[f64],
    sched: &QaoaSchedule,
    worker_count: usize,
) -> Result<f64> {
    if thetas.len() != g.n() {
        return Err(Error::LengthMismatch { expected: g.n(), got: thetas.len() });
    }
    let terms: Vec<f64> = if worker_count <= 1 {
        g.edges()
            .iter()
            .map(|&e| edge_term(g, e, thetas, sched))
            .collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(worker_count)
            .build()
            .map_err(|e| Error::InvalidParameter {
                name: "worker_count",
                reason: e.to_string(),
            })?;
        pool.install(|| {
            g.edges()
                .par_iter()
                .map(|&e| edge_term(g, e, thetas, sched))
                .collect::<Result<_>>()
        })?
    };
    Ok(pairwise_sum(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate_random_regular;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn uniform_thetas(n: usize) -> Vec<f64> {
        vec![FRAC_PI_2; n]
    }

    fn random_thetas(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = crate::rng::run_rng(seed, 0);
        (0..n).map(|_| rng.random_range(0.0..PI)).collect()
    }

    #[test]
    fn warm_state_examples() {
        let s = prepare_warm_state(&uniform_thetas(4)).unwrap();
        for a in s.amplitudes() {
            assert_abs_diff_eq!(a.re, 0.25, epsilon = 1e-12);
            assert_eq!(a.im, 0.0);
        }
        let s = prepare_warm_state(&[0.0, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[0].re, 1.0, epsilon = 1e-12);
        let s = prepare_warm_state(&[PI / 3.0]).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[0].re, 3f64.sqrt() / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.amplitudes()[1].re, 0.5, epsilon = 1e-12);
        assert!(prepare_warm_state(&vec![0.0; 30]).is_err());
    }

    #[test]
    fn cost_layer_examples() {
        let single = Graph::new(2, vec![(0, 1)]).unwrap();
        // (|00⟩+|01⟩)/√2: basis 1 has qubit0=1, qubit1=0, a cut edge
        let mut s = Statevector {
            n: 2,
            amps: vec![
                Complex64::new(1.0 / 2f64.sqrt(), 0.0),
                Complex64::new(1.0 / 2f64.sqrt(), 0.0),
                Complex64::ZERO,
                Complex64::ZERO,
            ],
        };
        // γ is the per-edge rotation angle: a cut edge picks up e^{−iγ/2},
        // so γ=π maps a cut basis state to −i times an uncut one
        apply_cost_layer(&mut s, &single, PI).unwrap();
        let ratio = s.amplitudes()[1] / s.amplitudes()[0];
        assert_abs_diff_eq!(ratio.re, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ratio.im, -1.0, epsilon = 1e-12);
        apply_cost_layer(&mut s, &single, PI).unwrap();
        let ratio = s.amplitudes()[1] / s.amplitudes()[0];
        assert_abs_diff_eq!(ratio.re, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ratio.im, 0.0, epsilon = 1e-12);

        let g = generate_random_regular(8, 3, 1).unwrap();
        let thetas = random_thetas(8, 4);
        let base = prepare_warm_state(&thetas).unwrap();
        for gamma in [0.0, 4.0 * PI] {
            let mut s = base.clone();
            apply_cost_layer(&mut s, &g, gamma).unwrap();
            for (a, b) in s.amplitudes().iter().zip(base.amplitudes()) {
                assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn mixer_layer_examples() {
        let thetas = random_thetas(6, 9);
        let base = prepare_warm_state(&thetas).unwrap();

        let mut s = base.clone();
        apply_mixer_layer(&mut s, &thetas, 0.0).unwrap();
        for (a, b) in s.amplitudes().iter().zip(base.amplitudes()) {
            assert_eq!(a, b);
        }

        // warm state is the +1 eigenstate of every per-qubit mixer term,
        // so a mixer layer only contributes the global phase e^{-i n β}
        let beta = 0.733;
        let mut s = base.clone();
        apply_mixer_layer(&mut s, &thetas, beta).unwrap();
        let phase = Complex64::from_polar(1.0, -6.0 * beta);
        for (a, b) in s.amplitudes().iter().zip(base.amplitudes()) {
            assert_abs_diff_eq!((a - phase * b).norm(), 0.0, epsilon = 1e-10);
        }

        // θ=π/2 reduces to the transverse-field mixer e^{-iβX}
        let mut s = Statevector::basis(1, 0).unwrap();
        apply_mixer_layer(&mut s, &[FRAC_PI_2], beta).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[0].re, beta.cos(), epsilon = 1e-12);
        assert_abs_diff_eq!(s.amplitudes()[1].im, -beta.sin(), epsilon = 1e-12);
    }

    #[test]
    fn depth_zero_and_zero_parameters_keep_the_warm_state() {
        let g = generate_random_regular(8, 3, 2).unwrap();
        let thetas = random_thetas(8, 5);
        let warm = prepare_warm_state(&thetas).unwrap();
        let s0 = rws_qaoa_state(&g, &thetas, &QaoaSchedule::empty()).unwrap();
        let zeros = QaoaSchedule::new(vec![0.0; 2], vec![0.0; 2]).unwrap();
        let sz = rws_qaoa_state(&g, &thetas, &zeros).unwrap();
        for (a, b) in s0.amplitudes().iter().zip(warm.amplitudes()) {
            assert_eq!(a, b);
        }
        for (a, b) in sz.amplitudes().iter().zip(warm.amplitudes()) {
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn expected_cut_examples() {
        let g = generate_random_regular(10, 3, 3).unwrap();
        let uniform = prepare_warm_state(&uniform_thetas(10)).unwrap();
        assert_abs_diff_eq!(
            expected_cut(&uniform, &g).unwrap(),
            g.edge_count() as f64 / 2.0,
            epsilon = 1e-10
        );

        let mask = 0b1011001110u64;
        let basis = Statevector::basis(10, mask).unwrap();
        assert_abs_diff_eq!(
            expected_cut(&basis, &g).unwrap(),
            g.cut_value_mask(mask) as f64,
            epsilon = 1e-12
        );

        // p=0 expectation equals the (negated) energy term of the
        // relaxed objective at p_i = sin²(θ_i/2)
        let thetas = random_thetas(10, 6);
        let probs = crate::warmstart::probs_from_thetas(&thetas);
        let q = crate::graph::laplacian_qubo(&g);
        let energy = crate::warmstart::rws_objective(&q, &probs, 0.0, false).unwrap();
        let s = prepare_warm_state(&thetas).unwrap();
        assert_abs_diff_eq!(expected_cut(&s, &g).unwrap(), -energy, epsilon = 1e-10);
    }

    #[test]
    fn mixer_only_evolution_keeps_the_expected_cut() {
        let g = generate_random_regular(8, 3, 7).unwrap();
        let thetas = random_thetas(8, 8);
        let p0 = expected_cut(&prepare_warm_state(&thetas).unwrap(), &g).unwrap();
        for beta in [0.2, 0.9, 2.3] {
            let sched = QaoaSchedule::new(vec![0.0, 0.0], vec![beta, -beta / 2.0]).unwrap();
            let s = rws_qaoa_state(&g, &thetas, &sched).unwrap();
            assert_abs_diff_eq!(expected_cut(&s, &g).unwrap(), p0, epsilon = 1e-10);
        }
    }

    /// Independent reference: standard QAOA expectation with the
    /// textbook transverse-field mixer, real/imag pairs instead of
    /// complex numbers, cut phases computed per basis state, and the
    /// expectation taken as Σ_x |a_x|² cut(x).
    fn standard_qaoa_expectation(g: &Graph, sched: &QaoaSchedule) -> f64 {
        let n = g.n();
        let dim = 1usize << n;
        let amp = 1.0 / (dim as f64).sqrt();
        let mut re = vec![amp; dim];
        let mut im = vec![0.0; dim];
        let cuts: Vec<f64> = (0..dim).map(|x| g.cut_value_mask(x as u64) as f64).collect();
        for t in 0..sched.p() {
            for x in 0..dim {
                // same rotation-angle convention: e^{−i(γ/2)·cut(x)}
                let ph = -0.5 * sched.gammas()[t] * cuts[x];
                let (sin, cos) = ph.sin_cos();
                let (r, i) = (re[x], im[x]);
                re[x] = r * cos - i * sin;
                im[x] = r * sin + i * cos;
            }
            let (cb, sb) = (sched.betas()[t].cos(), sched.betas()[t].sin());
            for q in 0..n {
                let bit = 1usize << q;
                for x in 0..dim {
                    if x & bit == 0 {
                        let (r0, i0) = (re[x], im[x]);
                        let (r1, i1) = (re[x | bit], im[x | bit]);
                        // e^{-iβX} = cosβ·I − i·sinβ·X
                        re[x] = cb * r0 + sb * i1;
                        im[x] = cb * i0 - sb * r1;
                        re[x | bit] = cb * r1 + sb * i0;
                        im[x | bit] = cb * i1 - sb * r0;
                    }
                }
            }
        }
        (0..dim).map(|x| (re[x] * re[x] + im[x] * im[x]) * cuts[x]).sum()
    }

    #[test]
    fn reduces_to_standard_qaoa_at_theta_half_pi() {
        for seed in 0..4 {
            let g = generate_random_regular(8, 3, seed).unwrap();
            let sched = QaoaSchedule::new(vec![0.9945, 0.31], vec![0.4332, 0.8]).unwrap();
            let s = rws_qaoa_state(&g, &uniform_thetas(8), &sched).unwrap();
            let ours = expected_cut(&s, &g).unwrap();
            let reference = standard_qaoa_expectation(&g, &sched);
            assert_abs_diff_eq!(ours, reference, epsilon = 1e-10);
        }
    }

    #[test]
    fn sampling_examples() {
        let basis = Statevector::basis(3, 0b101).unwrap();
        assert!(sample_bitstrings(&basis, 50, 1).iter().all(|&m| m == 0b101));

        let s = prepare_warm_state(&uniform_thetas(2)).unwrap();
        let shots = 100_000;
        let samples = sample_bitstrings(&s, shots, 7);
        let mut counts = [0usize; 4];
        for &m in &samples {
            counts[m as usize] += 1;
        }
        for c in counts {
            assert_abs_diff_eq!(c as f64 / shots as f64, 0.25, epsilon = 0.01);
        }
        assert_eq!(samples, sample_bitstrings(&s, shots, 7));

        let polarized = prepare_warm_state(&[PI, 0.0]).unwrap();
        assert!(sample_bitstrings(&polarized, 100, 3).iter().all(|&m| m == 0b01));
    }

    #[test]
    fn lightcone_matches_full_statevector() {
        for seed in 0..5 {
            let g = generate_random_regular(12, 3, seed).unwrap();
            let thetas = random_thetas(12, seed + 20);
            for p in 0..3 {
                let sched = QaoaSchedule::new(
                    (0..p).map(|t| 0.4 + 0.3 * t as f64).collect(),
                    (0..p).map(|t| 0.7 - 0.2 * t as f64).collect(),
                )
                .unwrap();
                let full =
                    expected_cut(&rws_qaoa_state(&g, &thetas, &sched).unwrap(), &g).unwrap();
                for workers in [1, 4] {
                    let lc = lightcone_expected_cut(&g, &thetas, &sched, workers).unwrap();
                    assert_abs_diff_eq!(lc, full, epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn lightcone_on_triangle_matches_three_qubit_oracle() {
        let tri = Graph::cycle(3);
        let sched = QaoaSchedule::new(vec![0.9945], vec![0.4332]).unwrap();
        let thetas = uniform_thetas(3);
        let direct = expected_cut(&rws_qaoa_state(&tri, &thetas, &sched).unwrap(), &tri).unwrap();
        let lc = lightcone_expected_cut(&tri, &thetas, &sched, 1).unwrap();
        assert_abs_diff_eq!(lc, direct, epsilon = 1e-12);
    }

    #[test]
    fn lightcone_term_ignores_thetas_outside_the_cone() {
        let g = Graph::path(6);
        let sched = QaoaSchedule::new(vec![0.8], vec![0.5]).unwrap();
        let mut thetas = random_thetas(6, 11);
        let lc = edge_lightcone(&g, (0, 1), 1).unwrap();
        let restrict = |ts: &[f64]| -> Vec<f64> {
            lc.vertex_map.iter().map(|&v| ts[v as usize]).collect()
        };
        let before = lightcone_edge_term(&lc, &restrict(&thetas), &sched).unwrap();
        thetas[4] += 1.1;
        thetas[5] -= 0.7;
        let after = lightcone_edge_term(&lc, &restrict(&thetas), &sched).unwrap();
        assert_eq!(before, after);
    }

    #[test]
    fn worker_counts_are_bit_identical() {
        let g = generate_random_regular(40, 3, 17).unwrap();
        let thetas = random_thetas(40, 30);
        let sched = QaoaSchedule::new(vec![0.99, 2.15], vec![0.46, 0.25]).unwrap();
        let r1 = lightcone_expected_cut(&g, &thetas, &sched, 1).unwrap();
        let r4 = lightcone_expected_cut(&g, &thetas, &sched, 4).unwrap();
        let r8 = lightcone_expected_cut(&g, &thetas, &sched, 8).unwrap();
        assert_eq!(r1.to_bits(), r4.to_bits());
        assert_eq!(r1.to_bits(), r8.to_bits());
    }

    #[test]
    fn schedule_json_round_trip() {
        let sched = QaoaSchedule::new(vec![0.1, 0.2], vec![0.3, 0.4]).unwrap();
        let (back, src) = QaoaSchedule::from_json_str(&sched.to_json_string()).unwrap();
        assert_eq!(back, sched);
        assert_eq!(src, None);
        let (back, src) =
            QaoaSchedule::from_json_str(&sched.to_json_string_with_source("table_s1")).unwrap();
        assert_eq!(back, sched);
        assert_eq!(src.as_deref(), Some("table_s1"));
        assert!(QaoaSchedule::from_json_str(r#"{"p":2,"gammas":[0.1],"betas":[0.2,0.3]}"#).is_err());
        assert!(QaoaSchedule::new(vec![0.0], vec![]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn layers_preserve_norm(seed in 0u64..200, gamma in -3.2f64..3.2, beta in -3.2f64..3.2) {
            let g = generate_random_regular(8, 3, seed).unwrap();
            let thetas = random_thetas(8, seed + 1000);
            let mut s = prepare_warm_state(&thetas).unwrap();
            apply_cost_layer(&mut s, &g, gamma).unwrap();
            apply_mixer_layer(&mut s, &thetas, beta).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
        }

        #[test]
        fn expected_cut_stays_in_range(seed in 0u64..100) {
            let g = generate_random_regular(10, 3, seed).unwrap();
            let thetas = random_thetas(10, seed);
            let sched = QaoaSchedule::new(vec![0.7], vec![0.4]).unwrap();
            let s = rws_qaoa_state(&g, &thetas, &sched).unwrap();
            let f = expected_cut(&s, &g).unwrap();
            prop_assert!(f >= 0.0 && f <= g.edge_count() as f64);
        }
    }
}
