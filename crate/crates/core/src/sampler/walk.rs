//! The exact walk-on-spheres step and walk driver.
//!
//! One step of the walk sits at an interior point, inscribes a certified
//! ball, and jumps straight to a draw from the *exact* exit distribution of
//! the α-stable process from that ball. Because the process leaves a ball by
//! a jump, the exit point is strictly outside the ball and the walk escapes
//! the domain in finitely many steps almost surely; no boundary-layer
//! truncation is involved.

use serde::Serialize;

use crate::geometry::{BallSpec, DomainSpec, Point};
use crate::kernels::{self, StableParams};
use crate::sampler::RngStream;

/// Walk tuning knobs.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WalkConfig {
    /// Fraction of the certified inradius used as the step-ball radius,
    /// in `(0, 1]`. The walk is unbiased for any value; 1.0 is fastest.
    pub shrink: f64,
    /// Step budget before a walk is censored.
    pub max_steps: u64,
    /// Censor when the certified step radius falls below this.
    pub min_radius: f64,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            shrink: 1.0,
            max_steps: 1_000_000,
            min_radius: 1e-12,
        }
    }
}

/// Result of a single walk.
#[derive(Debug, Clone)]
pub struct WalkOutcome {
    /// Exit position (a draw from the exit distribution), or `None` if the
    /// walk was censored by the step budget or the minimum radius.
    pub exit: Option<Point>,
    /// Accumulated mean-exit-time increments `Σ_k (C_{d,α}/A_{d,-α}) r_k^α`;
    /// an unbiased estimate of the expected exit time for completed walks.
    pub exit_time: f64,
    pub steps: u64,
    /// Final position: the exit point, or the last interior point for
    /// censored walks.
    pub final_position: Point,
}

impl WalkOutcome {
    pub fn censored(&self) -> bool {
        self.exit.is_none()
    }
}

pub(crate) struct RawOutcome {
    pub exited: bool,
    pub pos: Vec<f64>,
    pub exit_time: f64,
    pub steps: u64,
}

/// Exit radius (relative to the ball radius) of the α-stable process leaving
/// a ball from its center. `V = R^{-2}` is Beta(α/2, 1-α/2); sampled in log
/// space through a ratio of gamma variables so that small shapes cannot
/// underflow, and the measure-zero rounding event `R = 1` is resampled so
/// the documented invariant `R > 1` holds exactly.
pub fn sample_ball_exit_radius(rng: &mut RngStream, alpha: f64) -> f64 {
    debug_assert!(alpha > 0.0 && alpha < 2.0);
    let a = 0.5 * alpha;
    let b = 1.0 - 0.5 * alpha;
    loop {
        let lg_a = sample_ln_gamma(rng, a);
        let lg_b = sample_ln_gamma(rng, b);
        // R = V^{-1/2} = sqrt(1 + G_b/G_a).
        let r = (1.0 + (lg_b - lg_a).exp()).sqrt();
        if r > 1.0 && r.is_finite() {
            return r;
        }
    }
}

/// ln of a Gamma(shape, 1) draw; the shape < 1 case uses the boost
/// `G = G' · U^{1/shape}` with `G' ~ Gamma(shape+1)`, applied in log space.
fn sample_ln_gamma(rng: &mut RngStream, shape: f64) -> f64 {
    if shape < 1.0 {
        sample_ln_gamma_mt(rng, shape + 1.0) + rng.uniform_open().ln() / shape
    } else {
        sample_ln_gamma_mt(rng, shape)
    }
}

/// Marsaglia–Tsang rejection sampler, shape ≥ 1, returning ln of the draw.
fn sample_ln_gamma_mt(rng: &mut RngStream, shape: f64) -> f64 {
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = rng.normal();
        let t = 1.0 + c * x;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u = rng.uniform_open();
        if u.ln() < 0.5 * x * x + d - d * v + d * v.ln() {
            return d.ln() + 3.0 * t.ln();
        }
    }
}

/// In-place exact exit step from `B(pos, radius)` started at the center.
fn step_ball_exit(rng: &mut RngStream, alpha: f64, pos: &mut [f64], radius: f64, dir: &mut [f64]) {
    let r = sample_ball_exit_radius(rng, alpha);
    rng.unit_vector_into(dir);
    for (p, u) in pos.iter_mut().zip(dir.iter()) {
        *p += radius * r * u;
    }
}

/// One draw from the exact exit distribution of `ball` started at its
/// center.
pub fn sample_ball_exit(rng: &mut RngStream, p: &StableParams, ball: &BallSpec) -> Point {
    assert_eq!(ball.center.dim(), p.d(), "sample_ball_exit: wrong dimension");
    let mut pos = ball.center.coords().to_vec();
    let mut dir = vec![0.0; p.d()];
    step_ball_exit(rng, p.alpha(), &mut pos, ball.radius, &mut dir);
    Point::new(pos)
}

/// Walk driver with a per-step visitor `visit(center, radius)`, called just
/// before each ball-exit jump. Estimators that accumulate along the path
/// (the Poisson-kernel collision sum) hook in here.
pub(crate) fn run_walk_coords<V: FnMut(&[f64], f64)>(
    p: &StableParams,
    domain: &DomainSpec,
    start: &[f64],
    cfg: &WalkConfig,
    rng: &mut RngStream,
    mut visit: V,
) -> RawOutcome {
    assert!(
        cfg.shrink > 0.0 && cfg.shrink <= 1.0,
        "walk shrink factor must be in (0, 1]"
    );
    let etc = kernels::exit_time_const(p);
    let alpha = p.alpha();
    let mut pos = start.to_vec();
    let mut dir = vec![0.0; p.d()];
    let mut exit_time = 0.0;
    let mut steps = 0u64;
    loop {
        if !domain.contains_coords(&pos) {
            return RawOutcome {
                exited: true,
                pos,
                exit_time,
                steps,
            };
        }
        if steps >= cfg.max_steps {
            return RawOutcome {
                exited: false,
                pos,
                exit_time,
                steps,
            };
        }
        let radius = domain.dist_lower_bound_coords(&pos).radius * cfg.shrink;
        if !(radius > cfg.min_radius) {
            return RawOutcome {
                exited: false,
                pos,
                exit_time,
                steps,
            };
        }
        visit(&pos, radius);
        exit_time += etc * radius.powf(alpha);
        steps += 1;
        step_ball_exit(rng, alpha, &mut pos, radius, &mut dir);
    }
}

/// Run one walk from `start` until it leaves `domain` (or is censored).
///
/// A start outside the domain exits immediately at itself with zero exit
/// time, matching the exit distribution of an exterior starting point.
pub fn run_walk(
    p: &StableParams,
    domain: &DomainSpec,
    start: &Point,
    cfg: &WalkConfig,
    rng: &mut RngStream,
) -> WalkOutcome {
    assert_eq!(start.dim(), p.d(), "run_walk: wrong start dimension");
    let raw = run_walk_coords(p, domain, start.coords(), cfg, rng, |_, _| {});
    let final_position = Point::new(raw.pos);
    WalkOutcome {
        exit: raw.exited.then(|| final_position.clone()),
        exit_time: raw.exit_time,
        steps: raw.steps,
        final_position,
    }
}
