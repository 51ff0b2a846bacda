//! Martin-kernel estimation along a shrinking probe sequence.
//!
//! The Martin kernel `M_D(x,y) = lim_{v→y} G_D(x,v)/G_D(x0,v)` is estimated
//! by evaluating the Green ratio at probe points `v_j = y + r_j·u` marching
//! toward `y` along the inward direction `u = (x0-y)/|x0-y|`. Each level is
//! an independent pair of Green estimates combined by the delta method; the
//! reported value is the ratio at the finest usable level, with an
//! uncertainty that folds in the trend from the previous level so an
//! unconverged sequence carries an honest error bar.

use serde::Serialize;

use crate::geometry::{DomainSpec, Point};
use crate::kernels::StableParams;
use crate::sampler::{estimate_green, MCEstimate, RngStream, WalkConfig};
use crate::{Error, Result};

/// One probe level: the Green-ratio estimate at distance `radius` from the
/// target along the inward direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MartinLevel {
    pub radius: f64,
    /// `G_D(x,v)/G_D(x0,v)` with delta-method standard error.
    pub ratio: MCEstimate,
}

/// Martin-kernel estimate with its full level trail.
#[derive(Debug, Clone, Serialize)]
pub struct MartinEstimate {
    /// Kept levels, in the order of the supplied radii (coarse to fine).
    pub levels: Vec<MartinLevel>,
    /// Radii whose probe point fell outside the domain, collided with an
    /// endpoint, or produced a degenerate Green estimate.
    pub skipped_radii: Vec<f64>,
    /// Ratio at the finest kept level.
    pub value: f64,
    /// Standard error at the finest level combined with the step from the
    /// previous level.
    pub uncertainty: f64,
}

/// Estimate `M_D(x,y)` on a bounded domain by Green ratios at probe points
/// `y + r_j·(x0-y)/|x0-y|` for the supplied strictly decreasing radii.
///
/// Levels whose probe point is unusable are skipped and recorded; it is an
/// error for every level to be skipped. When `x == x0` the ratio is `1` by
/// definition at every level; the estimator still runs one Green estimate
/// per level (so probe-point checks behave identically) and reports the
/// exact ratio with zero standard error.
#[allow(clippy::too_many_arguments)]
pub fn estimate_martin_kernel(
    p: &StableParams,
    domain: &DomainSpec,
    x: &Point,
    x0: &Point,
    y: &Point,
    radii: &[f64],
    walks_per_level: u64,
    cfg: &WalkConfig,
    rng: &RngStream,
) -> Result<MartinEstimate> {
    domain.validate(p.d())?;
    for pt in [x, x0, y] {
        if pt.dim() != p.d() {
            return Err(Error::DimensionMismatch {
                expected: p.d(),
                got: pt.dim(),
            });
        }
    }
    if domain.bounding_ball(p.d()).is_none() {
        return Err(Error::Unbounded(
            "martin estimation requires a bounded domain".to_string(),
        ));
    }
    if !domain.contains(x) || !domain.contains(x0) {
        return Err(Error::precondition(
            "martin endpoints must lie inside the domain",
        ));
    }
    if domain.contains(y) {
        return Err(Error::precondition(
            "martin target must lie outside the open domain",
        ));
    }
    if radii.is_empty()
        || radii.iter().any(|r| !(r > &0.0) || !r.is_finite())
        || radii.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(Error::InvalidParams(
            "probe radii must be a nonempty, strictly decreasing, positive sequence".to_string(),
        ));
    }
    let gap = x0.sub(y);
    let gap_norm = gap.norm();
    if !(gap_norm > 0.0) {
        return Err(Error::precondition(
            "martin target must be distinct from the reference point",
        ));
    }
    let inward = gap.scale(1.0 / gap_norm);
    let same_endpoint = x.coords() == x0.coords();

    let mut levels = Vec::with_capacity(radii.len());
    let mut skipped_radii = Vec::new();
    for (j, &r) in radii.iter().enumerate() {
        let v = y.add(&inward.scale(r));
        if !domain.contains(&v) || v.coords() == x.coords() || v.coords() == x0.coords() {
            skipped_radii.push(r);
            continue;
        }
        let level_rng = rng.substream(j as u64);
        let den = estimate_green(p, domain, x0, &v, walks_per_level, cfg, &level_rng)?;
        let num = if same_endpoint {
            den
        } else {
            estimate_green(
                p,
                domain,
                x,
                &v,
                walks_per_level,
                cfg,
                &level_rng.substream(1),
            )?
        };
        if !(num.mean > 0.0) || !(den.mean > 0.0) || !num.mean.is_finite() || !den.mean.is_finite()
        {
            skipped_radii.push(r);
            continue;
        }
        let mean = num.mean / den.mean;
        let stderr = if same_endpoint {
            // Numerator and denominator are the same estimate: the ratio is
            // exactly 1 with no sampling error.
            0.0
        } else {
            mean.abs() * (num.stderr / num.mean).hypot(den.stderr / den.mean)
        };
        levels.push(MartinLevel {
            radius: r,
            ratio: MCEstimate {
                mean,
                stderr,
                n: num.n.min(den.n),
                censored_fraction: num.censored_fraction.max(den.censored_fraction),
            },
        });
    }

    let Some(last) = levels.last() else {
        return Err(Error::precondition(
            "every probe level was skipped; no usable Martin ratio",
        ));
    };
    let trend = if levels.len() >= 2 {
        (last.ratio.mean - levels[levels.len() - 2].ratio.mean).abs()
    } else {
        0.0
    };
    Ok(MartinEstimate {
        value: last.ratio.mean,
        uncertainty: last.ratio.stderr.hypot(trend),
        levels,
        skipped_radii,
    })
}
