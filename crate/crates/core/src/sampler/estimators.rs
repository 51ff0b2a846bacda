//! Monte Carlo estimators driven by the exact walk: harmonic extension,
//! expected exit time, Poisson kernel (collision sum) and Green function
//! (enclosing-ball subtraction).
//!
//! Determinism: walk `i` always uses `rng.substream(i)`, the per-walk values
//! are collected in index order, and the reduction is a fixed pairwise tree,
//! so estimates are bit-identical across rayon pool sizes.

use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{DomainSpec, Point};
use crate::kernels::{self, StableParams};
use crate::sampler::{run_walk_coords, RngStream, WalkConfig};
use crate::stats::mean_stderr;
use crate::{Error, Result};

/// A Monte Carlo estimate with its sampling error and censoring diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MCEstimate {
    pub mean: f64,
    /// Standard error of the mean (0 for degenerate, zero-variance cases).
    pub stderr: f64,
    /// Number of walks, including censored ones.
    pub n: u64,
    /// Fraction of walks stopped by the step budget or minimum radius;
    /// censored walks contribute their partial value.
    pub censored_fraction: f64,
}

impl MCEstimate {
    /// An estimate is healthy when censoring cannot plausibly bias it:
    /// at most 1 walk in 1000 was cut short.
    pub fn healthy(&self) -> bool {
        self.censored_fraction <= 1e-3
    }
}

/// Run `walks` independent walks in parallel and reduce deterministically.
pub(crate) fn run_parallel<F>(walks: u64, rng: &RngStream, per_walk: F) -> MCEstimate
where
    F: Fn(&mut RngStream) -> (f64, bool) + Sync,
{
    let results: Vec<(f64, bool)> = (0..walks as usize)
        .into_par_iter()
        .map(|i| {
            let mut r = rng.substream(i as u64);
            per_walk(&mut r)
        })
        .collect();
    let values: Vec<f64> = results.iter().map(|(v, _)| *v).collect();
    let censored = results.iter().filter(|(_, c)| *c).count();
    let (mean, stderr) = mean_stderr(&values);
    MCEstimate {
        mean,
        stderr,
        n: walks,
        censored_fraction: censored as f64 / walks as f64,
    }
}

fn check_common(p: &StableParams, domain: &DomainSpec, x: &Point, walks: u64) -> Result<()> {
    domain.validate(p.d())?;
    if x.dim() != p.d() {
        return Err(Error::DimensionMismatch {
            expected: p.d(),
            got: x.dim(),
        });
    }
    if walks == 0 {
        return Err(Error::InvalidParams(
            "at least one walk is required".to_string(),
        ));
    }
    Ok(())
}

/// Estimate the harmonic extension `E^x[payoff(X_τ)]` of a payoff defined on
/// the domain complement. Censored walks evaluate the payoff at their last
/// interior point.
pub fn estimate_harmonic_expectation<F>(
    p: &StableParams,
    domain: &DomainSpec,
    x: &Point,
    payoff: F,
    walks: u64,
    cfg: &WalkConfig,
    rng: &RngStream,
) -> Result<MCEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    check_common(p, domain, x, walks)?;
    Ok(run_parallel(walks, rng, |r| {
        let raw = run_walk_coords(p, domain, x.coords(), cfg, r, |_, _| {});
        (payoff(&raw.pos), !raw.exited)
    }))
}

/// Estimate the expected exit time `E^x τ_D` as the sum of per-step mean
/// exit times of the inscribed balls.
pub fn estimate_exit_time(
    p: &StableParams,
    domain: &DomainSpec,
    x: &Point,
    walks: u64,
    cfg: &WalkConfig,
    rng: &RngStream,
) -> Result<MCEstimate> {
    check_common(p, domain, x, walks)?;
    Ok(run_parallel(walks, rng, |r| {
        let raw = run_walk_coords(p, domain, x.coords(), cfg, r, |_, _| {});
        (raw.exit_time, !raw.exited)
    }))
}

/// Estimate the Poisson kernel `P_D(x, y)` for a target `y` with certified
/// positive distance from the domain, as the collision sum
/// `E^x[Σ_k P_{B_k}(x_k, y)]` over the walk's step balls.
pub fn estimate_poisson_kernel(
    p: &StableParams,
    domain: &DomainSpec,
    x: &Point,
    y: &Point,
    walks: u64,
    cfg: &WalkConfig,
    rng: &RngStream,
) -> Result<MCEstimate> {
    check_common(p, domain, x, walks)?;
    if y.dim() != p.d() {
        return Err(Error::DimensionMismatch {
            expected: p.d(),
            got: y.dim(),
        });
    }
    if !(domain.exterior_clearance(y) > 0.0) {
        return Err(Error::precondition(
            "poisson-kernel target must have certified positive distance from the domain",
        ));
    }
    Ok(run_parallel(walks, rng, |r| {
        let mut acc = 0.0;
        let raw = run_walk_coords(p, domain, x.coords(), cfg, r, |center, radius| {
            acc += kernels::ball_poisson_unchecked(p, center, radius, center, y.coords());
        });
        (acc, !raw.exited)
    }))
}

/// Estimate the Green function `G_D(x, v)` of a bounded domain by
/// enclosing-ball subtraction: `G_D(x, v) = G_B(x, v) - E^x[G_B(X_τ, v)]`
/// for any ball `B ⊇ D`, by the strong Markov property.
pub fn estimate_green(
    p: &StableParams,
    domain: &DomainSpec,
    x: &Point,
    v: &Point,
    walks: u64,
    cfg: &WalkConfig,
    rng: &RngStream,
) -> Result<MCEstimate> {
    check_common(p, domain, x, walks)?;
    if v.dim() != p.d() {
        return Err(Error::DimensionMismatch {
            expected: p.d(),
            got: v.dim(),
        });
    }
    let enclosing = domain.bounding_ball(p.d()).ok_or_else(|| {
        Error::Unbounded("green estimator requires a bounded domain".to_string())
    })?;
    if !domain.contains(v) {
        return Err(Error::precondition(
            "green pole v must lie inside the domain",
        ));
    }
    if x == v {
        return Err(Error::precondition(
            "green estimator needs distinct x and v (the diagonal is a pole)",
        ));
    }
    let g0 = kernels::ball_green(p, &enclosing, x, v);
    let est = run_parallel(walks, rng, |r| {
        let raw = run_walk_coords(p, domain, x.coords(), cfg, r, |_, _| {});
        let correction = kernels::ball_green(p, &enclosing, &Point::new(raw.pos), v);
        (-correction, !raw.exited)
    });
    Ok(MCEstimate {
        mean: g0 + est.mean,
        ..est
    })
}
