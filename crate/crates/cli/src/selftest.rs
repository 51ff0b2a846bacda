//! `selftest`: the deterministic closed-form acceptance checks plus a
//! reduced statistical suite, printed as a pass/fail table.
//!
//! `--quick` runs only the deterministic half (seconds). The statistical
//! half uses reduced walk budgets with 4σ bands, so a healthy build fails
//! any single check with probability ≲ 1e-4.
//!
//! The hidden `--perturb-poisson-const` flag scales the integrand of the
//! normalization check, emulating a corrupted kernel constant; any factor
//! outside `1 ± 1e-6` must flip that check to FAIL (exit 2).

use std::f64::consts::PI;

use stablepot::analysis::{
    classify_boundary_point, estimate_martin_kernel, markov_audit, kelvin_exit_time_check,
    kelvin_green_check, thorn_integral_test, ShellBudget, Verdict,
};
use stablepot::geometry::{BallSpec, DomainSpec};
use stablepot::kernels::{ball_exit_time, ball_green, ball_martin, ball_poisson, poisson_const};
use stablepot::numerics::{adaptive_quad_singular, reg_inc_beta};
use stablepot::sampler::{
    estimate_exit_time, estimate_green, estimate_poisson_kernel, sample_ball_exit_radius,
};
use stablepot::stats::ks_statistic;
use stablepot::{Point, RngStream, StableParams, WalkConfig};

use crate::CliError;

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check {
        name,
        passed,
        detail,
    }
}

fn params(d: usize, alpha: f64) -> StableParams {
    StableParams::new(d, alpha).expect("selftest parameters are valid")
}

fn pt(coords: &[f64]) -> Point {
    Point::new(coords.to_vec())
}

/// Surface area of the unit sphere `S^{d-1}` for the dimensions the
/// normalization check covers.
fn sphere_area(d: usize) -> f64 {
    match d {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => unreachable!("normalization grid stops at d = 3"),
    }
}

/// Normalization of the exit law: the Poisson kernel from the ball center
/// integrates to 1 over the exterior. `perturb` scales the integrand
/// (mutation hook).
///
/// The radial reduction `σ_{d-1} C_{d,α} ∫_1^∞ (r²-1)^{-α/2} r^{-1} dr` is
/// integrated in singularity-exact variables (offsets `t = r - 1` near the
/// boundary, `u = 1/r` in the tail); a moderate-radius grid ties the
/// closed radial form back to the `ball_poisson` evaluation path.
fn normalization_checks(perturb: f64) -> Vec<Check> {
    let mut worst_norm: f64 = 0.0;
    let mut worst_kernel: f64 = 0.0;
    for d in [1usize, 2, 3] {
        for alpha in [0.5, 1.0, 1.5] {
            let p = params(d, alpha);
            let c = poisson_const(&p);
            // (1, 2]: boundary singularity, r = 1 + t, r²-1 = t(t+2).
            let near = adaptive_quad_singular(
                |t| (t * (t + 2.0)).powf(-0.5 * alpha) / (1.0 + t),
                1.0,
                1e-12,
                0.5 * alpha,
            )
            .expect("normalization quadrature (near field)");
            // (2, ∞): u = 1/r turns the tail into u^{α-1} (1-u²)^{-α/2}.
            let far = adaptive_quad_singular(
                |u| u.powf(alpha - 1.0) * (1.0 - u * u).powf(-0.5 * alpha),
                0.5,
                1e-12,
                (1.0 - alpha).clamp(0.0, 0.8),
            )
            .expect("normalization quadrature (far field)");
            let total = perturb * sphere_area(d) * c * (near.value + far.value);
            worst_norm = worst_norm.max((total - 1.0).abs());

            // The closed radial form must be what ball_poisson evaluates.
            let spec = BallSpec::unit(d);
            let origin = Point::zeros(d);
            for r in [1.5, 2.0, 3.0] {
                let mut y = vec![0.0; d];
                y[0] = r;
                let kernel = ball_poisson(&p, &spec, &origin, &Point::new(y))
                    .expect("exterior target");
                let closed = c * (r * r - 1.0).powf(-0.5 * alpha) * r.powf(-(d as f64));
                worst_kernel = worst_kernel.max((kernel / closed - 1.0).abs());
            }
        }
    }
    vec![check(
        "exit-law normalization (9 parameter pairs)",
        worst_norm <= 1e-6 && worst_kernel <= 1e-12,
        format!(
            "worst |integral - 1| = {worst_norm:.3e}, kernel vs radial form = {worst_kernel:.3e}"
        ),
    )]
}

/// Expected exit time of the unit ball at the center against frozen
/// closed-form values `2^{-α} Γ(d/2) / (Γ((d+α)/2) Γ(1+α/2))`.
fn exit_time_table_check() -> Check {
    let table = [
        (1usize, 0.5, 1.128_379_167_095_512_6),
        (1, 1.0, 1.0),
        (1, 1.5, 0.752_252_778_063_675),
        (2, 0.5, 0.860_682_226_634_146_1),
        (2, 1.0, 0.636_619_772_367_581_3),
        (2, 1.5, 0.418_566_906_863_888_4),
        (3, 0.5, 0.752_252_778_063_675),
        (3, 1.0, 0.5),
        (3, 1.5, 0.300_901_111_225_470_03),
    ];
    let mut worst: f64 = 0.0;
    for (d, alpha, expected) in table {
        let p = params(d, alpha);
        let got = ball_exit_time(&p, &BallSpec::unit(d), &Point::zeros(d));
        worst = worst.max((got / expected - 1.0).abs());
    }
    check(
        "exit-time closed form (9 parameter pairs)",
        worst <= 1e-12,
        format!("worst relative deviation = {worst:.3e}"),
    )
}

fn kelvin_checks() -> Vec<Check> {
    let green = kelvin_green_check(
        &params(2, 1.0),
        &BallSpec::new(pt(&[3.0, 0.0]), 1.0).expect("valid ball"),
        100,
        1e-9,
    );
    let time = kelvin_exit_time_check(
        &params(3, 1.0),
        &BallSpec::new(pt(&[4.0, 0.0, 0.0]), 1.0).expect("valid ball"),
        2,
        1e-6,
    );
    vec![
        match green {
            Ok(r) => check(
                "inversion identity: Green function",
                r.passed,
                format!("worst relative deviation = {:.3e}", r.worst_ratio),
            ),
            Err(e) => check("inversion identity: Green function", false, e.to_string()),
        },
        match time {
            Ok(r) => check(
                "inversion identity: exit time",
                r.passed,
                format!("worst relative deviation = {:.3e}", r.worst_ratio),
            ),
            Err(e) => check("inversion identity: exit time", false, e.to_string()),
        },
    ]
}

/// Thorn/cusp accessibility dichotomy across the analytic threshold.
fn dichotomy_check() -> Check {
    let rng = RngStream::new(0, 0);
    let budget = ShellBudget::default();
    let mut failures = Vec::new();
    for k in 1..=8u32 {
        let gamma = 0.25 * k as f64;
        for alpha in [0.5, 1.0, 1.5] {
            let p = params(2, alpha);
            let expected = if gamma > 1.0 {
                Verdict::Inaccessible
            } else {
                Verdict::Accessible
            };
            let got = thorn_integral_test(&p, gamma, 1.0).verdict;
            if got != expected {
                failures.push(format!("thorn gamma={gamma} alpha={alpha}: {got:?}"));
            }
        }
    }
    // Cusp apex: inaccessible exactly when gamma < 1 (inverse profile).
    for (gamma, expected) in [(0.5, Verdict::Inaccessible), (1.5, Verdict::Accessible)] {
        let p = params(2, 1.0);
        let domain = DomainSpec::cusp(gamma);
        match classify_boundary_point(&p, &domain, &Point::zeros(2), &budget, &rng) {
            Ok(c) if c.verdict == expected => {}
            Ok(c) => failures.push(format!("cusp gamma={gamma}: {:?}", c.verdict)),
            Err(e) => failures.push(format!("cusp gamma={gamma}: {e}")),
        }
    }
    check(
        "accessibility dichotomy (thorn grid + cusp)",
        failures.is_empty(),
        if failures.is_empty() {
            "26 verdicts match the analytic threshold".to_string()
        } else {
            failures.join("; ")
        },
    )
}

/// Closed-form scaling relations at k = 2: kernels, exit time, Martin.
fn scaling_check() -> Check {
    let p = params(2, 1.0);
    let k = 2.0;
    let b1 = BallSpec::unit(2);
    let b2 = BallSpec::new(Point::zeros(2), k).expect("valid ball");
    let x = pt(&[0.3, 0.1]);
    let v = pt(&[-0.2, 0.4]);
    let y = pt(&[2.0, 0.5]);
    let yb = pt(&[0.6, 0.8]);
    let (kx, kv, ky, kyb) = (x.scale(k), v.scale(k), y.scale(k), yb.scale(k));

    let rels = [
        (
            "poisson",
            ball_poisson(&p, &b2, &kx, &ky).expect("exterior target")
                / (k.powi(-2) * ball_poisson(&p, &b1, &x, &y).expect("exterior target")),
        ),
        (
            "exit-time",
            ball_exit_time(&p, &b2, &kx) / (k * ball_exit_time(&p, &b1, &x)),
        ),
        (
            "green",
            ball_green(&p, &b2, &kx, &kv) / (k.powi(-1) * ball_green(&p, &b1, &x, &v)),
        ),
        (
            "martin",
            ball_martin(&p, k, &kx, &kyb).expect("boundary target")
                / ball_martin(&p, 1.0, &x, &yb).expect("boundary target"),
        ),
    ];
    let worst = rels
        .iter()
        .map(|(_, r)| (r - 1.0).abs())
        .fold(0.0f64, f64::max);
    check(
        "scaling equivariance at k = 2 (closed forms)",
        worst <= 1e-12,
        format!("worst relative deviation = {worst:.3e}"),
    )
}

/// Interior Harnack bound `((1+r/s)/(1-r/s))^d` on closed-form kernel
/// ratios, r/s = 1/2 in the unit ball.
fn harnack_grid_check() -> Check {
    let p = params(2, 1.0);
    let spec = BallSpec::unit(2);
    let y = pt(&[2.0, 0.0]);
    let mut kernels = Vec::new();
    for i in -2i32..=2 {
        for j in -2i32..=2 {
            let x = pt(&[0.08 * i as f64, 0.08 * j as f64]);
            kernels.push(ball_poisson(&p, &spec, &x, &y).expect("exterior target"));
        }
    }
    let max = kernels.iter().fold(f64::MIN, |a, &b| a.max(b));
    let min = kernels.iter().fold(f64::MAX, |a, &b| a.min(b));
    let worst = max / min;
    check(
        "interior Harnack bound (closed-form grid)",
        worst <= 9.0 && worst > 1.0,
        format!("worst ratio = {worst:.6} against bound 9"),
    )
}

/// Boundary-Harnack cross-ratio symmetry: swapping the charges inverts the
/// closed-form ρ exactly.
fn bhp_swap_check() -> Check {
    let p = params(2, 1.0);
    let spec = BallSpec::unit(2);
    let (x1, x2) = (pt(&[0.2, 0.1]), pt(&[-0.3, 0.2]));
    let (y1, y2) = (pt(&[1.5, 0.0]), pt(&[-1.2, 0.8]));
    let cf = |x: &Point, y: &Point| ball_poisson(&p, &spec, x, y).expect("exterior target");
    let rho = cf(&x1, &y1) * cf(&x2, &y2) / (cf(&x1, &y2) * cf(&x2, &y1));
    let swapped = cf(&x1, &y2) * cf(&x2, &y1) / (cf(&x1, &y1) * cf(&x2, &y2));
    let dev = (rho * swapped - 1.0).abs();
    check(
        "boundary-Harnack cross-ratio swap symmetry",
        dev <= 1e-12,
        format!("|rho * rho_swapped - 1| = {dev:.3e}"),
    )
}

/// Monte Carlo exit time at the ball center against the closed form.
fn mc_exit_time_check(cfg: &WalkConfig) -> Check {
    let p = params(2, 1.0);
    let est = estimate_exit_time(
        &p,
        &DomainSpec::unit_ball(2),
        &Point::zeros(2),
        20_000,
        cfg,
        &RngStream::new(101, 0),
    )
    .expect("valid configuration");
    let oracle = ball_exit_time(&p, &BallSpec::unit(2), &Point::zeros(2));
    let dev = (est.mean - oracle).abs();
    check(
        "sampled exit time vs closed form",
        est.healthy() && dev <= 4.0 * est.stderr,
        format!("|{:.6} - {oracle:.6}| = {dev:.2e} vs 4 stderr = {:.2e}", est.mean, 4.0 * est.stderr),
    )
}

/// Monte Carlo Poisson kernel against the closed form.
fn mc_poisson_check(cfg: &WalkConfig) -> Check {
    let p = params(2, 1.0);
    let x = pt(&[0.3, 0.0]);
    let y = pt(&[2.0, 0.0]);
    let est = estimate_poisson_kernel(
        &p,
        &DomainSpec::unit_ball(2),
        &x,
        &y,
        20_000,
        cfg,
        &RngStream::new(102, 0),
    )
    .expect("valid configuration");
    let oracle = ball_poisson(&p, &BallSpec::unit(2), &x, &y).expect("exterior target");
    let dev = (est.mean - oracle).abs();
    check(
        "sampled Poisson kernel vs closed form",
        est.healthy() && dev <= 4.0 * est.stderr,
        format!("|{:.6} - {oracle:.6}| = {dev:.2e} vs 4 stderr = {:.2e}", est.mean, 4.0 * est.stderr),
    )
}

/// Kolmogorov–Smirnov test of the exit-radius law, per α, plus the frozen
/// tail probability P(R > 2) = 1/3 at α = 1.
fn exit_radius_check() -> Check {
    let n = 10_000usize;
    let band = 1.63 / (n as f64).sqrt();
    let mut details = Vec::new();
    let mut ok = true;
    for (stream, alpha) in [(0u64, 0.5f64), (1, 1.0), (2, 1.5)] {
        let mut rng = RngStream::new(103, stream);
        let mut xs: Vec<f64> = (0..n)
            .map(|_| sample_ball_exit_radius(&mut rng, alpha))
            .collect();
        xs.sort_by(f64::total_cmp);
        let d = ks_statistic(&xs, |r| {
            1.0 - reg_inc_beta(0.5 * alpha, 1.0 - 0.5 * alpha, 1.0 / (r * r))
                .expect("valid beta arguments")
        });
        ok &= d < band;
        details.push(format!("alpha={alpha}: KS={d:.4}"));
        if alpha == 1.0 {
            let tail = xs.iter().filter(|&&r| r > 2.0).count() as f64 / n as f64;
            let sigma = ( (1.0 / 3.0) * (2.0 / 3.0) / n as f64 ).sqrt();
            let tail_ok = (tail - 1.0 / 3.0).abs() <= 4.0 * sigma;
            ok &= tail_ok;
            details.push(format!("P(R>2)={tail:.4}"));
        }
    }
    check(
        "exit-radius law (KS + tail probability)",
        ok,
        format!("{} vs band {band:.4}", details.join(", ")),
    )
}

/// Green symmetry G(x,v) = G(v,x) on the half-ball, Monte Carlo.
fn green_symmetry_check(cfg: &WalkConfig) -> Check {
    let p = params(2, 1.0);
    let half_ball = DomainSpec::intersection(vec![
        DomainSpec::unit_ball(2),
        DomainSpec::half_space(pt(&[1.0, 0.0]), 0.0).expect("unit normal"),
    ]);
    let x = pt(&[-0.3, 0.1]);
    let v = pt(&[-0.5, -0.2]);
    let a = estimate_green(&p, &half_ball, &x, &v, 20_000, cfg, &RngStream::new(104, 0))
        .expect("valid configuration");
    let b = estimate_green(&p, &half_ball, &v, &x, 20_000, cfg, &RngStream::new(104, 1))
        .expect("valid configuration");
    let dev = (a.mean - b.mean).abs();
    let band = 4.0 * a.stderr.hypot(b.stderr);
    check(
        "sampled Green symmetry on the half-ball",
        a.healthy() && b.healthy() && dev <= band,
        format!("|{:.6} - {:.6}| = {dev:.2e} vs {band:.2e}", a.mean, b.mean),
    )
}

/// Martin kernel ladder on the unit ball against the closed-form value.
fn martin_check(cfg: &WalkConfig) -> Check {
    let p = params(2, 1.0);
    let oracle = 2.0 * 3.0f64.sqrt();
    let est = estimate_martin_kernel(
        &p,
        &DomainSpec::unit_ball(2),
        &pt(&[0.5, 0.0]),
        &Point::zeros(2),
        &pt(&[1.0, 0.0]),
        &[0.2, 0.1, 0.05],
        15_000,
        cfg,
        &RngStream::new(105, 0),
    )
    .expect("valid configuration");
    let dev = (est.value - oracle).abs();
    let band = 4.0 * est.uncertainty;
    check(
        "Martin kernel ladder vs closed form",
        dev <= band,
        format!("|{:.4} - {oracle:.4}| = {dev:.2e} vs {band:.2e}", est.value),
    )
}

/// Strong Markov consistency of the sampler.
fn markov_check(_cfg: &WalkConfig) -> Check {
    let p = params(2, 1.0);
    match markov_audit(
        &p,
        &DomainSpec::unit_ball(2),
        &pt(&[0.2, 0.1]),
        0.5,
        20_000,
        &RngStream::new(106, 0),
    ) {
        Ok(r) => check(
            "strong Markov two-stage consistency",
            r.passed,
            format!("worst z = {:.3} vs 3", r.worst_ratio),
        ),
        Err(e) => check("strong Markov two-stage consistency", false, e.to_string()),
    }
}

/// Runs the suite and prints the table. Exit 0 iff everything passed.
pub fn run(quick: bool, perturb_poisson_const: Option<f64>) -> Result<i32, CliError> {
    let cfg = WalkConfig::default();
    let mut checks = Vec::new();
    checks.extend(normalization_checks(perturb_poisson_const.unwrap_or(1.0)));
    checks.push(exit_time_table_check());
    checks.extend(kelvin_checks());
    checks.push(dichotomy_check());
    checks.push(scaling_check());
    checks.push(harnack_grid_check());
    checks.push(bhp_swap_check());
    if !quick {
        checks.push(mc_exit_time_check(&cfg));
        checks.push(mc_poisson_check(&cfg));
        checks.push(exit_radius_check());
        checks.push(green_symmetry_check(&cfg));
        checks.push(martin_check(&cfg));
        checks.push(markov_check(&cfg));
    }

    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut failures = 0;
    for c in &checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        println!("{status}  {:width$}  {}", c.name, c.detail);
        failures += usize::from(!c.passed);
    }
    println!(
        "{} of {} checks passed{}",
        checks.len() - failures,
        checks.len(),
        if quick { " (quick subset)" } else { "" }
    );
    Ok(if failures == 0 { 0 } else { 2 })
}
