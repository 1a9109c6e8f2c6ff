//! Small numeric helpers shared across modules.

/// Pairwise (cascade) summation.
///
/// The reduction tree depends only on the slice length, so sums over
/// per-edge contributions are bit-identical no matter how many worker
/// threads produced the inputs.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        let mut acc = 0.0;
        for &x in xs {
            acc += x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Mean and standard error of the mean.
///
/// Returns `(mean, stderr)`; the standard error is 0 for fewer than two
/// samples.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, 0.0);
    }
    let mean = pairwise_sum(xs) / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    let var = ss / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_sequential_on_exact_values() {
        let xs: Vec<f64> = (0..100).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 4950.0);
    }

    #[test]
    fn pairwise_is_length_stable() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 * 0.37).sin() * 1e-3).collect();
        let once = pairwise_sum(&xs);
        let twice = pairwise_sum(&xs);
        assert_eq!(once.to_bits(), twice.to_bits());
    }

    #[test]
    fn mean_stderr_basics() {
        let (m, se) = mean_stderr(&[1.0, 1.0, 1.0]);
        assert_eq!(m, 1.0);
        assert_eq!(se, 0.0);
        let (m, se) = mean_stderr(&[0.0, 2.0]);
        assert_eq!(m, 1.0);
        assert!((se - (2.0f64 / 2.0).sqrt()).abs() < 1e-12);
    }
}
