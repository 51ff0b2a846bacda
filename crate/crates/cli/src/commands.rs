//! One function per subcommand. Each validates every precondition against
//! the parsed document before the first walk (fail fast), runs the
//! corresponding library operation, and renders the output; no arithmetic
//! happens here beyond formatting.

use serde_json::json;
use stablepot::analysis::{
    bhp_audit, classify_boundary_point, classify_infinity, estimate_martin_kernel,
    factorization_audit, harnack_audit, kelvin_exit_time_check, kelvin_green_check, markov_audit,
    AuditReport, Verdict,
};
use stablepot::geometry::BallSpec;
use stablepot::sampler::{
    estimate_exit_time, estimate_green, estimate_harmonic_expectation, estimate_poisson_kernel,
    MCEstimate,
};
use stablepot::{Point, RngStream, StableParams, WalkConfig};

use crate::config::{ConfigDoc, TargetSpec};
use crate::output::{csv_row, estimate_cells, Meta, Rendered};
use crate::CliError;

/// Exit statuses the commands distinguish beyond success.
pub const EXIT_OK: i32 = 0;
pub const EXIT_UNHEALTHY: i32 = 2;
pub const EXIT_UNDETERMINED: i32 = 3;

/// Everything a command needs: the parsed document, resolved run plumbing,
/// and the output controls.
pub struct RunContext {
    pub doc: ConfigDoc,
    pub params: StableParams,
    pub seed: u64,
    /// `--walks` / config override; commands apply their own defaults.
    pub walks: Option<u64>,
    pub out: Option<std::path::PathBuf>,
    pub json: bool,
    pub walk_cfg: WalkConfig,
}

impl RunContext {
    fn rng(&self) -> RngStream {
        RngStream::new(self.seed, 0)
    }

    fn walks_or(&self, default: u64) -> u64 {
        self.walks.unwrap_or(default)
    }
}

fn point_columns(d: usize) -> Vec<String> {
    (0..d).map(|i| format!("x{i}")).collect()
}

/// Renders per-start-point estimate rows and returns the health-based exit
/// code.
fn emit_point_estimates(
    ctx: &RunContext,
    meta: Meta,
    points: &[Point],
    estimates: &[MCEstimate],
) -> Result<i32, CliError> {
    let d = ctx.params.d();
    let mut header = point_columns(d);
    header.extend(["mean", "stderr", "n", "censored_fraction"].map(String::from));
    let rows = points
        .iter()
        .zip(estimates)
        .map(|(x, est)| {
            let mut cells: Vec<String> = x.coords().iter().map(|c| c.to_string()).collect();
            cells.extend(estimate_cells(est));
            csv_row(&cells)
        })
        .collect();
    let body = serde_json::to_value(
        points
            .iter()
            .zip(estimates)
            .map(|(x, est)| json!({ "x": x.coords(), "estimate": est }))
            .collect::<Vec<_>>(),
    )
    .expect("rows serialize");
    let rendered = Rendered {
        meta,
        header: csv_row(&header),
        rows,
        trailers: vec![],
        body,
    };
    rendered.emit(ctx.out.as_ref(), ctx.json)?;
    let healthy = estimates.iter().all(MCEstimate::healthy);
    Ok(if healthy { EXIT_OK } else { EXIT_UNHEALTHY })
}

/// `solve`: harmonic extension of a payoff at each start point.
pub fn solve(ctx: &RunContext) -> Result<i32, CliError> {
    let d = ctx.params.d();
    let points = ctx.doc.start_points(d)?;
    let payoff_spec = ctx
        .doc
        .payoff
        .as_ref()
        .ok_or_else(|| CliError::config("config field `payoff` is required"))?;
    let payoff = payoff_spec.build(&ctx.params)?;
    let walks = ctx.walks_or(100_000);
    let rng = ctx.rng();

    let estimates = points
        .iter()
        .enumerate()
        .map(|(i, x)| {
            estimate_harmonic_expectation(
                &ctx.params,
                &ctx.doc.domain,
                x,
                &*payoff,
                walks,
                &ctx.walk_cfg,
                &rng.substream(i as u64),
            )
            .map_err(CliError::from)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let meta = Meta::new(
        "solve",
        &ctx.params,
        &ctx.doc.domain,
        ctx.seed,
        walks,
        json!({ "points": points.len() }),
    );
    emit_point_estimates(ctx, meta, &points, &estimates)
}

/// `pkernel`: Poisson kernel `P_D(x, y)` at each start point.
pub fn pkernel(ctx: &RunContext) -> Result<i32, CliError> {
    let d = ctx.params.d();
    let points = ctx.doc.start_points(d)?;
    let y = match &ctx.doc.target {
        Some(TargetSpec::Point(coords)) if coords.len() == d => Point::new(coords.clone()),
        Some(TargetSpec::Point(coords)) => {
            return Err(CliError::config(format!(
                "config node `target`: expected {d} coordinates, got {}",
                coords.len()
            )))
        }
        _ => return Err(CliError::config("config field `target` (a point) is required")),
    };
    if !(ctx.doc.domain.exterior_clearance(&y) > 0.0) {
        return Err(CliError::config(
            "config node `target`: must have certified positive distance from the domain",
        ));
    }
    let walks = ctx.walks_or(100_000);
    let rng = ctx.rng();

    let estimates = points
        .iter()
        .enumerate()
        .map(|(i, x)| {
            estimate_poisson_kernel(
                &ctx.params,
                &ctx.doc.domain,
                x,
                &y,
                walks,
                &ctx.walk_cfg,
                &rng.substream(i as u64),
            )
            .map_err(CliError::from)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let meta = Meta::new(
        "pkernel",
        &ctx.params,
        &ctx.doc.domain,
        ctx.seed,
        walks,
        json!({ "target": y.coords() }),
    );
    emit_point_estimates(ctx, meta, &points, &estimates)
}

/// `exit-time`: expected exit time at each start point.
pub fn exit_time(ctx: &RunContext) -> Result<i32, CliError> {
    let d = ctx.params.d();
    let points = ctx.doc.start_points(d)?;
    let walks = ctx.walks_or(100_000);
    let rng = ctx.rng();

    let estimates = points
        .iter()
        .enumerate()
        .map(|(i, x)| {
            estimate_exit_time(
                &ctx.params,
                &ctx.doc.domain,
                x,
                walks,
                &ctx.walk_cfg,
                &rng.substream(i as u64),
            )
            .map_err(CliError::from)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let meta = Meta::new(
        "exit-time",
        &ctx.params,
        &ctx.doc.domain,
        ctx.seed,
        walks,
        json!({ "points": points.len() }),
    );
    emit_point_estimates(ctx, meta, &points, &estimates)
}

/// `green`: Green function `G_D(x, v)` against a fixed pole at each start
/// point.
pub fn green(ctx: &RunContext) -> Result<i32, CliError> {
    let d = ctx.params.d();
    let points = ctx.doc.start_points(d)?;
    let pole = ctx.doc.point("pole", d)?;
    if !ctx.doc.domain.contains(&pole) {
        return Err(CliError::config(
            "config node `pole`: must lie inside the domain",
        ));
    }
    if let Some(x) = points.iter().find(|x| **x == pole) {
        return Err(CliError::config(format!(
            "config node `points`: start {:?} coincides with the pole",
            x.coords()
        )));
    }
    let walks = ctx.walks_or(100_000);
    let rng = ctx.rng();

    let estimates = points
        .iter()
        .enumerate()
        .map(|(i, x)| {
            estimate_green(
                &ctx.params,
                &ctx.doc.domain,
                x,
                &pole,
                walks,
                &ctx.walk_cfg,
                &rng.substream(i as u64),
            )
            .map_err(CliError::from)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let meta = Meta::new(
        "green",
        &ctx.params,
        &ctx.doc.domain,
        ctx.seed,
        walks,
        json!({ "pole": pole.coords() }),
    );
    emit_point_estimates(ctx, meta, &points, &estimates)
}

/// `martin`: Martin kernel ratio ladder toward a boundary point.
pub fn martin(ctx: &RunContext) -> Result<i32, CliError> {
    let d = ctx.params.d();
    let x = ctx.doc.point("x", d)?;
    let x0 = ctx.doc.point("x0", d)?;
    let y = ctx.doc.point("boundary_point", d)?;
    let radii = ctx
        .doc
        .radii
        .clone()
        .unwrap_or_else(|| vec![0.2, 0.1, 0.05, 0.025]);
    let walks = ctx.walks_or(30_000);

    let estimate = estimate_martin_kernel(
        &ctx.params,
        &ctx.doc.domain,
        &x,
        &x0,
        &y,
        &radii,
        walks,
        &ctx.walk_cfg,
        &ctx.rng(),
    )?;

    let meta = Meta::new(
        "martin",
        &ctx.params,
        &ctx.doc.domain,
        ctx.seed,
        walks,
        json!({
            "x": x.coords(),
            "x0": x0.coords(),
            "boundary_point": y.coords(),
            "radii": radii,
        }),
    );
    let rows = estimate
        .levels
        .iter()
        .map(|level| {
            let mut cells = vec![level.radius.to_string()];
            cells.extend(estimate_cells(&level.ratio));
            csv_row(&cells)
        })
        .collect();
    let rendered = Rendered {
        meta,
        header: "radius,mean,stderr,n,censored_fraction".to_string(),
        rows,
        trailers: vec![json!({
            "value": estimate.value,
            "uncertainty": estimate.uncertainty,
            "skipped_radii": estimate.skipped_radii,
        })],
        body: serde_json::to_value(&estimate).expect("estimate serializes"),
    };
    rendered.emit(ctx.out.as_ref(), ctx.json)?;
    let healthy = estimate.levels.iter().all(|level| level.ratio.healthy());
    Ok(if healthy { EXIT_OK } else { EXIT_UNHEALTHY })
}

/// `classify`: accessibility of a boundary point or of infinity. Always
/// emits JSON (the evidence is structured); exit 3 on `Undetermined`.
pub fn classify(ctx: &RunContext) -> Result<i32, CliError> {
    let d = ctx.params.d();
    let rng = ctx.rng();
    let (classification, budget_json) = match &ctx.doc.target {
        Some(TargetSpec::Point(coords)) => {
            if coords.len() != d {
                return Err(CliError::config(format!(
                    "config node `target`: expected {d} coordinates, got {}",
                    coords.len()
                )));
            }
            let budget = ctx
                .doc
                .shell_budget
                .clone()
                .unwrap_or_default()
                .build(ctx.walks);
            let y = Point::new(coords.clone());
            let c = classify_boundary_point(&ctx.params, &ctx.doc.domain, &y, &budget, &rng)?;
            (c, serde_json::to_value(budget).expect("budget serializes"))
        }
        Some(TargetSpec::Named(name)) if name == "infinity" => {
            let probe = ctx.doc.point("probe", d)?;
            let budget = ctx
                .doc
                .ladder_budget
                .clone()
                .unwrap_or_default()
                .build(ctx.walks);
            let c = classify_infinity(&ctx.params, &ctx.doc.domain, &probe, &budget, &rng)?;
            (c, serde_json::to_value(budget).expect("budget serializes"))
        }
        Some(TargetSpec::Named(name)) => {
            return Err(CliError::config(format!(
                "config node `target`: expected a point or \"infinity\", got \"{name}\""
            )))
        }
        None => return Err(CliError::config("config field `target` is required")),
    };

    let meta = Meta::new(
        "classify",
        &ctx.params,
        &ctx.doc.domain,
        ctx.seed,
        ctx.walks.unwrap_or(0),
        json!({ "budget": budget_json }),
    );
    let rendered = Rendered {
        meta,
        header: String::new(),
        rows: vec![],
        trailers: vec![],
        body: serde_json::to_value(&classification).expect("classification serializes"),
    };
    rendered.emit(ctx.out.as_ref(), true)?;
    Ok(match classification.verdict {
        Verdict::Accessible | Verdict::Inaccessible => EXIT_OK,
        Verdict::Undetermined => EXIT_UNDETERMINED,
    })
}

/// Audit subcommand selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum AuditKind {
    Bhp,
    Factorization,
    Harnack,
    KelvinGreen,
    KelvinExitTime,
    Markov,
}

fn ball_from_doc(ctx: &RunContext) -> Result<BallSpec, CliError> {
    let doc = ctx
        .doc
        .ball
        .as_ref()
        .ok_or_else(|| CliError::config("config field `ball` is required"))?;
    BallSpec::new(Point::new(doc.center.clone()), doc.radius)
        .map_err(|e| CliError::config(format!("config node `ball`: {e}")))
}

/// `audit <kind>`: runs one audit and reports pass/fail via the exit code.
pub fn audit(ctx: &RunContext, kind: AuditKind) -> Result<i32, CliError> {
    let d = ctx.params.d();
    let rng = ctx.rng();
    let (report, walks, args): (AuditReport, u64, serde_json::Value) = match kind {
        AuditKind::Bhp => {
            let r = ctx.doc.radius.unwrap_or(1.0);
            let configs = ctx.doc.configs.unwrap_or(3);
            let walks = ctx.walks_or(2_000);
            let report = bhp_audit(&ctx.params, &ctx.doc.domain, r, configs, walks, &rng)?;
            (report, walks, json!({ "radius": r, "configs": configs }))
        }
        AuditKind::Factorization => {
            let y = match &ctx.doc.target {
                Some(TargetSpec::Point(coords)) if coords.len() == d => {
                    Point::new(coords.clone())
                }
                _ => {
                    return Err(CliError::config(
                        "config field `target` (the exterior charge) is required",
                    ))
                }
            };
            let cut = ctx.doc.cut.unwrap_or(0.5);
            let sample_points = ctx.doc.sample_points.unwrap_or(3);
            let walks = ctx.walks_or(700);
            let report = factorization_audit(
                &ctx.params,
                &ctx.doc.domain,
                &y,
                cut,
                sample_points,
                walks,
                &rng,
            )?;
            (
                report,
                walks,
                json!({ "target": y.coords(), "cut": cut, "sample_points": sample_points }),
            )
        }
        AuditKind::Harnack => {
            let center = ctx.doc.point("center", d)?;
            let r = ctx.doc.require("inner_radius", ctx.doc.inner_radius)?;
            let s = ctx.doc.require("outer_radius", ctx.doc.outer_radius)?;
            let charge = ctx.doc.point("charge", d)?;
            let pairs = ctx.doc.pairs.unwrap_or(4);
            let walks = ctx.walks_or(4_000);
            let report = harnack_audit(
                &ctx.params,
                &ctx.doc.domain,
                &center,
                r,
                s,
                &charge,
                pairs,
                walks,
                &rng,
            )?;
            (
                report,
                walks,
                json!({
                    "center": center.coords(),
                    "inner_radius": r,
                    "outer_radius": s,
                    "charge": charge.coords(),
                    "pairs": pairs,
                }),
            )
        }
        AuditKind::KelvinGreen => {
            let ball = ball_from_doc(ctx)?;
            let pairs = ctx.doc.pairs.unwrap_or(100);
            let tol = ctx.doc.tolerance.unwrap_or(1e-9);
            let report = kelvin_green_check(&ctx.params, &ball, pairs, tol)?;
            (
                report,
                0,
                json!({ "ball": { "center": ball.center.coords(), "radius": ball.radius },
                        "pairs": pairs, "tolerance": tol }),
            )
        }
        AuditKind::KelvinExitTime => {
            let ball = ball_from_doc(ctx)?;
            let sample_points = ctx.doc.sample_points.unwrap_or(3);
            let tol = ctx.doc.tolerance.unwrap_or(1e-6);
            let report = kelvin_exit_time_check(&ctx.params, &ball, sample_points, tol)?;
            (
                report,
                0,
                json!({ "ball": { "center": ball.center.coords(), "radius": ball.radius },
                        "sample_points": sample_points, "tolerance": tol }),
            )
        }
        AuditKind::Markov => {
            let x = ctx.doc.point("x", d)?;
            let split = ctx.doc.require("split_radius", ctx.doc.split_radius)?;
            let walks = ctx.walks_or(25_000);
            let report = markov_audit(&ctx.params, &ctx.doc.domain, &x, split, walks, &rng)?;
            (
                report,
                walks,
                json!({ "x": x.coords(), "split_radius": split }),
            )
        }
    };

    let meta = Meta::new(
        &format!("audit {}", report.name),
        &ctx.params,
        &ctx.doc.domain,
        ctx.seed,
        walks,
        args,
    );
    let rows = report
        .samples
        .iter()
        .map(|s| {
            csv_row(&[
                s.label.clone(),
                s.lhs.to_string(),
                s.rhs.to_string(),
                s.ratio.to_string(),
            ])
        })
        .collect();
    let rendered = Rendered {
        meta,
        header: "label,lhs,rhs,ratio".to_string(),
        rows,
        trailers: vec![json!({
            "worst_ratio": report.worst_ratio,
            "tolerance": report.tolerance,
            "passed": report.passed,
        })],
        body: serde_json::to_value(&report).expect("report serializes"),
    };
    rendered.emit(ctx.out.as_ref(), ctx.json)?;
    Ok(if report.passed { EXIT_OK } else { EXIT_UNHEALTHY })
}
