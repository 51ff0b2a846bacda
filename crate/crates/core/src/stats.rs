//! Deterministic reductions and the statistical test helpers used by the
//! self-test command and the integration suites.
//!
//! All reductions are fixed-shape pairwise trees over index order, so the
//! same inputs produce bit-identical outputs regardless of how many rayon
//! workers produced them.

/// Pairwise (cascade) summation over a slice, in index order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

/// Sample mean and standard error of the mean, via pairwise sums.
///
/// Returns `(mean, stderr)`; `stderr` is 0 for constant samples and for a
/// single observation.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = pairwise_sum(xs) / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let sq: Vec<f64> = xs.iter().map(|&x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&sq) / (n as f64 - 1.0);
    (mean, (var / n as f64).sqrt())
}

/// One-sample Kolmogorov–Smirnov statistic `sup |F̂ - F|`.
///
/// `samples` must be sorted ascending; `cdf` is the hypothesized CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let n = samples.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max(((i as f64 + 1.0) / n - f).abs());
    }
    d
}

/// Two-sample Kolmogorov–Smirnov statistic. Both slices must be sorted.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let (mut i, mut j) = (0usize, 0usize);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Pearson chi-square statistic for observed counts against expected counts.
pub fn chi_square_stat(observed: &[u64], expected: &[f64]) -> f64 {
    assert_eq!(observed.len(), expected.len());
    observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| {
            let diff = o as f64 - e;
            diff * diff / e
        })
        .sum()
}

/// Wilson–Hilferty approximation to the chi-square quantile.
///
/// Accurate to ≲0.1% for the degrees of freedom used here; `z` is the
/// standard normal quantile of the target probability.
pub fn chi_square_quantile(df: f64, z: f64) -> f64 {
    let a = 2.0 / (9.0 * df);
    df * (1.0 - a + z * a.sqrt()).powi(3)
}

/// Standard normal quantile (Acklam's rational approximation, |ε| < 1.2e-9).
pub fn inv_normal_cdf(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile argument must be in (0,1)");
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -inv_normal_cdf(1.0 - p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_sum_matches_naive_on_small_inputs() {
        let xs = [1.5, -2.25, 3.0, 0.125, 7.0];
        assert_eq!(pairwise_sum(&xs), 9.375);
        assert_eq!(pairwise_sum(&[]), 0.0);
        assert_eq!(pairwise_sum(&[42.0]), 42.0);
    }

    #[test]
    fn mean_stderr_basics() {
        let (m, s) = mean_stderr(&[2.0, 4.0, 6.0, 8.0]);
        assert_eq!(m, 5.0);
        // sample variance 20/3, stderr = sqrt(20/3/4)
        assert!((s - (20.0 / 3.0 / 4.0f64).sqrt()).abs() < 1e-15);
        let (m1, s1) = mean_stderr(&[3.0, 3.0, 3.0]);
        assert_eq!((m1, s1), (3.0, 0.0));
    }

    #[test]
    fn ks_statistic_uniform_exact() {
        // Empirical CDF of {0.25, 0.75} against U(0,1): D = 0.25.
        let d = ks_statistic(&[0.25, 0.75], |x| x);
        assert!((d - 0.25).abs() < 1e-15);
    }

    #[test]
    fn ks_two_sample_disjoint() {
        let d = ks_two_sample(&[1.0, 2.0], &[3.0, 4.0]);
        assert_eq!(d, 1.0);
    }

    #[test]
    fn chi_square_helpers() {
        let stat = chi_square_stat(&[8, 12], &[10.0, 10.0]);
        assert!((stat - 0.8).abs() < 1e-12);
        // χ²(0.99, 239) = 292.78 (reference value); Wilson–Hilferty is within 0.1%.
        let q = chi_square_quantile(239.0, inv_normal_cdf(0.99));
        assert!((q - 292.78175984974627).abs() / 292.78 < 1e-3, "q = {q}");
    }

    #[test]
    fn inv_normal_cdf_known_points() {
        assert!(inv_normal_cdf(0.5).abs() < 1e-9);
        assert!((inv_normal_cdf(0.975) - 1.959963984540054).abs() < 1e-7);
        assert!((inv_normal_cdf(0.01) + 2.326347874040841).abs() < 1e-7);
    }

    proptest::proptest! {
        #[test]
        fn pairwise_sum_close_to_kahan(xs in proptest::collection::vec(-1e6f64..1e6, 0..200)) {
            let mut sum = 0.0f64;
            let mut c = 0.0f64;
            for &x in &xs {
                let y = x - c;
                let t = sum + y;
                c = (t - sum) - y;
                sum = t;
            }
            let pw = pairwise_sum(&xs);
            proptest::prop_assert!((pw - sum).abs() <= 1e-6 * sum.abs().max(1.0));
        }
    }
}
