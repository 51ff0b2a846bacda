//! Numerical finite-vs-divergent decision for integrals singular at zero.
//!
//! The probe integrates `f` over `(ε_k, upper)` for a decreasing cutoff
//! sequence and classifies the partial-integral trajectory. The same
//! decision rule is reused by the accessibility classifier, which feeds it
//! Monte Carlo shell sums instead of quadrature values.

use serde::Serialize;

use super::quad::adaptive_quad;
use crate::{Error, Result};

/// Decision reached by the probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ProbeOutcome {
    /// The integral converges; `value` includes a geometric tail estimate.
    Finite { value: f64 },
    /// The partial integrals keep growing; `growth_exponent` is the fitted
    /// slope of the partial integrals against `ln(1/ε)` (≈ 1 for a `1/t`
    /// singularity).
    Divergent { growth_exponent: f64 },
    /// The trajectory is not yet conclusive at this budget.
    Undetermined,
}

/// Probe verdict together with the `(cutoff, partial integral)` trace.
#[derive(Debug, Clone, Serialize)]
pub struct DivergenceVerdict {
    pub outcome: ProbeOutcome,
    /// Strictly decreasing in cutoff, nondecreasing in partial integral.
    pub probe_values: Vec<(f64, f64)>,
}

impl DivergenceVerdict {
    pub fn is_finite(&self) -> bool {
        matches!(self.outcome, ProbeOutcome::Finite { .. })
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self.outcome, ProbeOutcome::Divergent { .. })
    }
}

/// Geometric cutoff ladder `start · ratio^k`, `k = 0..count`.
pub fn geometric_cutoffs(start: f64, ratio: f64, count: usize) -> Vec<f64> {
    assert!(start > 0.0 && ratio > 0.0 && ratio < 1.0);
    (0..count).map(|k| start * ratio.powi(k as i32)).collect()
}

/// Classify `∫_0^upper f` for a nonnegative integrand singular only at 0.
///
/// `cutoffs` must be strictly decreasing inside `(0, upper)`; at least four
/// are needed for a decision. `ratio_threshold` (default 0.5) controls the
/// divergence rule: the last three increments must each exceed
/// `ratio_threshold ×` the first increment. `tol` controls the finite rule:
/// the last three increments must each fall below `tol ×` the running total
/// and be decreasing.
pub fn divergence_probe<F: Fn(f64) -> f64>(
    f: F,
    upper: f64,
    cutoffs: &[f64],
    ratio_threshold: f64,
    tol: f64,
) -> Result<DivergenceVerdict> {
    if !(upper > 0.0) || !upper.is_finite() {
        return Err(Error::domain(format!("upper limit must be positive: {upper}")));
    }
    if cutoffs.len() < 4 {
        return Err(Error::domain(
            "divergence_probe needs at least 4 cutoffs".to_string(),
        ));
    }
    for w in cutoffs.windows(2) {
        if !(w[1] < w[0]) {
            return Err(Error::domain(
                "cutoffs must be strictly decreasing".to_string(),
            ));
        }
    }
    if !(cutoffs[0] < upper) || !(cutoffs[cutoffs.len() - 1] > 0.0) {
        return Err(Error::domain(
            "cutoffs must lie strictly inside (0, upper)".to_string(),
        ));
    }

    let quad_tol = 1e-10;
    let mut partials = Vec::with_capacity(cutoffs.len());
    let mut total = adaptive_quad(&f, cutoffs[0], upper, quad_tol)?.value;
    partials.push((cutoffs[0], total));
    for k in 1..cutoffs.len() {
        let inc = adaptive_quad(&f, cutoffs[k], cutoffs[k - 1], quad_tol)?.value;
        if inc < -1e-9 * total.abs().max(1.0) {
            return Err(Error::domain(
                "divergence_probe requires a nonnegative integrand".to_string(),
            ));
        }
        total += inc.max(0.0);
        partials.push((cutoffs[k], total));
    }
    verdict_from_partials(&partials, ratio_threshold, tol)
}

/// Decision rule on a precomputed `(cutoff, partial integral)` trajectory.
///
/// Exposed so that Monte Carlo shell decompositions can reuse it.
pub fn verdict_from_partials(
    partials: &[(f64, f64)],
    ratio_threshold: f64,
    tol: f64,
) -> Result<DivergenceVerdict> {
    if partials.len() < 4 {
        return Err(Error::domain(
            "need at least 4 partial integrals".to_string(),
        ));
    }
    if !(ratio_threshold > 0.0) || !(tol > 0.0 && tol < 1.0) {
        return Err(Error::domain(format!(
            "bad thresholds: ratio_threshold = {ratio_threshold}, tol = {tol}"
        )));
    }
    let n = partials.len();
    let increments: Vec<f64> = (1..n).map(|k| partials[k].1 - partials[k - 1].1).collect();
    let total = partials[n - 1].1;
    let first_inc = increments[0];
    let last3 = &increments[increments.len() - 3..];

    let outcome = if last3.iter().all(|&d| d < tol * total.abs().max(f64::MIN_POSITIVE))
        && last3[2] <= last3[1]
        && last3[1] <= last3[0]
    {
        // Converged: add a geometric tail extrapolation when the decay ratio
        // is stable (exact for power-law integrable singularities).
        let (d_prev, d_last) = (last3[1], last3[2]);
        let mut value = total;
        if d_prev > 0.0 {
            let rho = d_last / d_prev;
            if rho > 0.0 && rho < 0.95 {
                value += d_last * rho / (1.0 - rho);
            }
        }
        ProbeOutcome::Finite { value }
    } else {
        let (slope, slope_se) = fit_growth_slope(partials);
        let sustained = last3.iter().all(|&d| d > ratio_threshold * first_inc) && first_inc > 0.0;
        // Slope backstop for noisy trajectories: significantly positive
        // growth per ln(1/ε) that outruns the finite-rule allowance. A
        // decay guard keeps slowly *converging* trajectories (increments
        // shrinking geometrically, yet still visible at this tol) from
        // being mistaken for divergence: genuine divergence cannot have
        // the trailing increments collapse relative to the leading ones.
        let lambda = mean_log_spacing(partials);
        let growing = slope > 2.0 * slope_se
            && slope * lambda > tol * total.abs()
            && !increments_decay(&increments);
        if sustained || growing {
            ProbeOutcome::Divergent {
                growth_exponent: slope,
            }
        } else {
            ProbeOutcome::Undetermined
        }
    };

    Ok(DivergenceVerdict {
        outcome,
        probe_values: partials.to_vec(),
    })
}

/// Least-squares slope (and its standard error) of the partial integrals
/// against `ln(1/ε)` over the trailing half of the trajectory.
fn fit_growth_slope(partials: &[(f64, f64)]) -> (f64, f64) {
    let n = partials.len();
    let start = n / 2;
    let pts: Vec<(f64, f64)> = partials[start.min(n - 4)..]
        .iter()
        .map(|&(eps, p)| ((1.0 / eps).ln(), p))
        .collect();
    let m = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return (0.0, f64::INFINITY);
    }
    let slope = sxy / sxx;
    let dof = (pts.len() as f64 - 2.0).max(1.0);
    let ss_res: f64 = pts
        .iter()
        .map(|p| (p.1 - mean_y - slope * (p.0 - mean_x)).powi(2))
        .sum();
    let se = (ss_res / dof / sxx).sqrt();
    (slope, se)
}

fn mean_log_spacing(partials: &[(f64, f64)]) -> f64 {
    let n = partials.len();
    let first = partials[0].0;
    let last = partials[n - 1].0;
    (first / last).ln() / (n - 1) as f64
}

/// True when the trailing-half increments have collapsed to less than half
/// of the leading-half increments — the signature of a converging tail.
fn increments_decay(increments: &[f64]) -> bool {
    let n = increments.len();
    if n < 2 {
        return false;
    }
    let split = n.div_ceil(2);
    let lead = increments[..split].iter().sum::<f64>() / split as f64;
    let trail = increments[split..].iter().sum::<f64>() / (n - split) as f64;
    trail < 0.5 * lead
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrable_singularity_is_finite() {
        // ∫_0^1 t^{-1/2} dt = 2.
        let cutoffs = geometric_cutoffs(0.5, 0.5, 40);
        let v = divergence_probe(|t| t.powf(-0.5), 1.0, &cutoffs, 0.5, 1e-6).unwrap();
        match v.outcome {
            ProbeOutcome::Finite { value } => {
                assert!((value - 2.0).abs() < 1e-5, "value = {value}")
            }
            other => panic!("expected Finite, got {other:?}"),
        }
    }

    #[test]
    fn harmonic_singularity_is_divergent_with_unit_slope() {
        // ∫_0^1 t^{-1} dt diverges; partials grow linearly in ln(1/ε).
        let cutoffs = geometric_cutoffs(0.5, 0.5, 40);
        let v = divergence_probe(|t| 1.0 / t, 1.0, &cutoffs, 0.5, 1e-6).unwrap();
        match v.outcome {
            ProbeOutcome::Divergent { growth_exponent } => {
                assert!((growth_exponent - 1.0).abs() < 0.05, "slope = {growth_exponent}")
            }
            other => panic!("expected Divergent, got {other:?}"),
        }
    }

    #[test]
    fn bounded_integrand_is_finite_with_exact_value() {
        // ∫_0^3 t dt = 4.5.
        let cutoffs = geometric_cutoffs(1.0, 0.5, 30);
        let v = divergence_probe(|t| t, 3.0, &cutoffs, 0.5, 1e-6).unwrap();
        match v.outcome {
            ProbeOutcome::Finite { value } => assert!((value - 4.5).abs() < 1e-7),
            other => panic!("expected Finite, got {other:?}"),
        }
    }

    #[test]
    fn strong_power_divergence() {
        let cutoffs = geometric_cutoffs(0.5, 0.5, 25);
        let v = divergence_probe(|t| t.powf(-1.7), 1.0, &cutoffs, 0.5, 1e-6).unwrap();
        assert!(v.is_divergent());
    }

    #[test]
    fn verdict_scale_invariance() {
        // c·f must classify identically for c > 0 (all rules are relative).
        let cutoffs = geometric_cutoffs(0.5, 0.5, 30);
        for c in [1e-6, 1.0, 1e6] {
            let fin = divergence_probe(|t| c * t.powf(-0.3), 1.0, &cutoffs, 0.5, 1e-6).unwrap();
            assert!(fin.is_finite(), "c = {c}");
            let div = divergence_probe(|t| c / t, 1.0, &cutoffs, 0.5, 1e-6).unwrap();
            assert!(div.is_divergent(), "c = {c}");
        }
    }

    #[test]
    fn trace_is_monotone() {
        let cutoffs = geometric_cutoffs(0.5, 0.5, 20);
        let v = divergence_probe(|t| t.powf(-0.9), 1.0, &cutoffs, 0.5, 1e-6).unwrap();
        for w in v.probe_values.windows(2) {
            assert!(w[1].0 < w[0].0);
            assert!(w[1].1 >= w[0].1);
        }
    }

    #[test]
    fn short_ladders_are_rejected() {
        let cutoffs = geometric_cutoffs(0.5, 0.5, 3);
        assert!(divergence_probe(|t| 1.0 / t, 1.0, &cutoffs, 0.5, 1e-6).is_err());
        assert!(verdict_from_partials(&[(0.5, 1.0), (0.25, 2.0)], 0.5, 1e-6).is_err());
    }

    #[test]
    fn shallow_ladder_still_flags_clean_log_divergence() {
        // Even 5 shallow cutoffs suffice for an exact 1/t trajectory: the
        // fitted growth per ln(1/ε) is 1 with essentially zero residual, so
        // the slope backstop fires despite a hostile ratio threshold.
        let cutoffs = geometric_cutoffs(0.4, 0.8, 5);
        let v = divergence_probe(|t| 1.0 / t, 1.0, &cutoffs, 10.0, 1e-9).unwrap();
        match v.outcome {
            ProbeOutcome::Divergent { growth_exponent } => {
                assert!((growth_exponent - 1.0).abs() < 1e-6, "slope = {growth_exponent}")
            }
            other => panic!("expected Divergent, got {other:?}"),
        }
    }

    #[test]
    fn slow_geometric_convergence_is_not_divergent() {
        // Increments shrinking by 0.9 per rung: far from settled at this
        // tol, but the decay guard must keep the slope backstop from
        // declaring divergence.
        let mut partials = Vec::new();
        let mut total = 0.0;
        for k in 0..30 {
            total += 0.9f64.powi(k);
            partials.push((0.5 * 0.5f64.powi(k), total));
        }
        let v = verdict_from_partials(&partials, 0.5, 1e-9).unwrap();
        assert!(
            !v.is_divergent(),
            "slowly converging tail misread as divergent: {:?}",
            v.outcome
        );
    }

    #[test]
    fn late_burst_is_undetermined() {
        // A single jump after a flat stretch is not evidence either way:
        // the increments neither settle (the last one is large) nor grow
        // consistently, and the slope fit is swamped by its own residual.
        let partials = [
            (0.4, 1.0),
            (0.32, 1.5),
            (0.256, 1.5),
            (0.2048, 1.5),
            (0.16384, 2.5),
        ];
        let v = verdict_from_partials(&partials, 0.5, 1e-6).unwrap();
        assert_eq!(v.outcome, ProbeOutcome::Undetermined);
    }
}
