//! Closed-form kernels for the isotropic α-stable process: jump density,
//! Riesz kernels, and the Poisson kernel, Green function, expected exit time
//! and Martin kernel of a ball.
//!
//! Conventions for degenerate inputs are part of the contract of each
//! function: precondition violations return errors, while values that are
//! genuinely infinite (poles, on-diagonal kernels) return `f64::INFINITY`.

use serde::Serialize;

use crate::geometry::{self, BallSpec, Point};
use crate::numerics::{self, adaptive_quad};
use crate::{Error, Result};

/// Index and stability order of the process: dimension `d ≥ 1` and
/// `0 < α < 2`. Normalizing constants are cached at construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StableParams {
    d: usize,
    alpha: f64,
    levy_c: f64,
    poisson_c: f64,
    green_c: f64,
}

impl StableParams {
    pub fn new(d: usize, alpha: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParams("dimension must be ≥ 1".to_string()));
        }
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::InvalidParams(format!(
                "stability order must satisfy 0 < alpha < 2, got {alpha}"
            )));
        }
        let levy_c = riesz_const(d, -alpha)?;
        let df = d as f64;
        // C_{d,α} = Γ(d/2) π^{-1-d/2} sin(πα/2)
        let poisson_c = (numerics::ln_gamma(df / 2.0)?
            - (1.0 + df / 2.0) * std::f64::consts::PI.ln())
        .exp()
            * (std::f64::consts::FRAC_PI_2 * alpha).sin();
        // B_{d,α} = Γ(d/2) / (2^α π^{d/2} Γ(α/2)²)
        let green_c = (numerics::ln_gamma(df / 2.0)?
            - alpha * std::f64::consts::LN_2
            - (df / 2.0) * std::f64::consts::PI.ln()
            - 2.0 * numerics::ln_gamma(alpha / 2.0)?)
        .exp();
        Ok(StableParams {
            d,
            alpha,
            levy_c,
            poisson_c,
            green_c,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn check_dim(&self, x: &Point) -> Result<()> {
        if x.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: x.dim(),
            });
        }
        Ok(())
    }
}

/// Riesz-kernel normalizing constant
/// `A_{d,γ} = Γ((d-γ)/2) / (2^γ π^{d/2} |Γ(γ/2)|)` for `-2 < γ < 2`, `γ ≠ 0`.
///
/// The value is negative when `γ > d` (only possible for `d = 1`) and the
/// pole at `γ = d` returns `+∞`.
pub fn riesz_const(d: usize, gamma: f64) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidParams("dimension must be ≥ 1".to_string()));
    }
    if !(gamma > -2.0 && gamma < 2.0) || gamma == 0.0 {
        return Err(Error::InvalidParams(format!(
            "riesz_const needs -2 < gamma < 2, gamma ≠ 0; got {gamma}"
        )));
    }
    let df = d as f64;
    let z = (df - gamma) / 2.0;
    if z == 0.0 {
        return Ok(f64::INFINITY);
    }
    // z > -1/2 always, so the numerator gamma function is negative exactly
    // on z ∈ (-1/2, 0).
    let sign = if z < 0.0 { -1.0 } else { 1.0 };
    let ln = numerics::ln_abs_gamma(z)?
        - gamma * std::f64::consts::LN_2
        - (df / 2.0) * std::f64::consts::PI.ln()
        - numerics::ln_abs_gamma(gamma / 2.0)?;
    Ok(sign * ln.exp())
}

/// Jump density `ν(x, y) = A_{d,-α} |y-x|^{-d-α}`; `+∞` on the diagonal.
pub fn levy_density(p: &StableParams, x: &Point, y: &Point) -> f64 {
    assert_eq!(x.dim(), p.d, "levy_density: x has wrong dimension");
    assert_eq!(y.dim(), p.d, "levy_density: y has wrong dimension");
    levy_density_coords(p, x.coords(), y.coords())
}

pub(crate) fn levy_density_coords(p: &StableParams, x: &[f64], y: &[f64]) -> f64 {
    let r = geometry::dist(x, y);
    if r == 0.0 {
        return f64::INFINITY;
    }
    p.levy_c * r.powf(-(p.d as f64) - p.alpha)
}

/// Poisson-kernel constant `C_{d,α} = Γ(d/2) π^{-1-d/2} sin(πα/2)`.
pub fn poisson_const(p: &StableParams) -> f64 {
    p.poisson_c
}

/// Green-function constant `B_{d,α} = Γ(d/2) / (2^α π^{d/2} Γ(α/2)²)`.
pub fn green_const(p: &StableParams) -> f64 {
    p.green_c
}

/// Expected-exit-time constant `C_{d,α} / A_{d,-α}`, so that the mean exit
/// time of `B(c, r)` started at `x` is `exit_time_const · (r² - |x-c|²)^{α/2}`.
pub(crate) fn exit_time_const(p: &StableParams) -> f64 {
    p.poisson_c / p.levy_c
}

/// Poisson kernel of the ball: density at `y` (strictly outside the closed
/// ball) of the exit distribution started at `x` (inside the open ball).
///
/// Errors if `x` is not interior or `y` is interior; returns `+∞` for `y`
/// exactly on the sphere (the exit law of a ball puts no mass there, but the
/// kernel blows up).
pub fn ball_poisson(p: &StableParams, ball: &BallSpec, x: &Point, y: &Point) -> Result<f64> {
    p.check_dim(x)?;
    p.check_dim(y)?;
    p.check_dim(&ball.center)?;
    let dx = x.dist(&ball.center);
    let dy = y.dist(&ball.center);
    if dx >= ball.radius {
        return Err(Error::domain(
            "ball_poisson: x must lie in the open ball",
        ));
    }
    if dy < ball.radius {
        return Err(Error::domain(
            "ball_poisson: y must lie outside the closed ball",
        ));
    }
    if dy == ball.radius {
        return Ok(f64::INFINITY);
    }
    Ok(ball_poisson_unchecked(
        p,
        ball.center.coords(),
        ball.radius,
        x.coords(),
        y.coords(),
    ))
}

/// Hot-path Poisson kernel; assumes `|x-c| < r < |y-c|`.
pub(crate) fn ball_poisson_unchecked(
    p: &StableParams,
    center: &[f64],
    radius: f64,
    x: &[f64],
    y: &[f64],
) -> f64 {
    let dx2 = geometry::dist_sq(x, center);
    let dy2 = geometry::dist_sq(y, center);
    let r2 = radius * radius;
    let ratio = (r2 - dx2) / (dy2 - r2);
    p.poisson_c * ratio.powf(0.5 * p.alpha) * geometry::dist(x, y).powf(-(p.d as f64))
}

/// Green function of the ball.
///
/// Evaluates `B_{d,α} |x-v|^{α-d} ∫₀^w s^{α/2-1}(1+s)^{-d/2} ds` with the
/// scale-invariant argument `w = (r² - |x-c|²)(r² - |v-c|²)/(r²|x-v|²)`,
/// which satisfies the dilation law `G_{kB}(kx, kv) = k^{α-d} G_B(x, v)`.
///
/// Total on all inputs: zero when either argument is outside the open ball,
/// `+∞` on the diagonal for `α ≤ d`, and the finite diagonal value
/// `B_{d,α} (2/(α-1)) ((r² - |x-c|²)/r)^{α-1}` for `α > d` (i.e. `d = 1 < α`).
///
/// # Panics
///
/// Panics if the internal quadrature for the `d = 1 < α` case exhausts its
/// subdivision budget, which does not happen for representable inputs.
pub fn ball_green(p: &StableParams, ball: &BallSpec, x: &Point, v: &Point) -> f64 {
    assert_eq!(x.dim(), p.d, "ball_green: x has wrong dimension");
    assert_eq!(v.dim(), p.d, "ball_green: v has wrong dimension");
    let r = ball.radius;
    let dx2 = geometry::dist_sq(x.coords(), ball.center.coords());
    let dv2 = geometry::dist_sq(v.coords(), ball.center.coords());
    let r2 = r * r;
    if dx2 >= r2 || dv2 >= r2 {
        return 0.0;
    }
    let df = p.d as f64;
    let sep2 = geometry::dist_sq(x.coords(), v.coords());
    if sep2 == 0.0 {
        if p.alpha > df {
            // d = 1 < α: the Green function is continuous up to the diagonal.
            return p.green_c * (2.0 / (p.alpha - 1.0)) * ((r2 - dx2) / r).powf(p.alpha - 1.0);
        }
        return f64::INFINITY;
    }
    let w = (r2 - dx2) * (r2 - dv2) / (r2 * sep2);
    if p.alpha < df {
        // B_{d,α} |x-v|^{α-d} ∫₀^w s^{α/2-1}(1+s)^{-d/2} ds reduces exactly
        // to the Riesz kernel times a regularized incomplete beta in
        // u = w/(1+w).
        let u = w / (1.0 + w);
        let beta = numerics::reg_inc_beta(0.5 * p.alpha, 0.5 * (df - p.alpha), u)
            .expect("incomplete-beta arguments are valid for alpha < d");
        let riesz = riesz_const(p.d, p.alpha).expect("alpha is a valid Riesz order");
        return riesz * sep2.powf(0.5 * (p.alpha - df)) * beta;
    }
    if p.alpha == df {
        // d = α = 1: the compensated integral has the closed form
        // 2·asinh(√w), and B_{1,1} = 1/(2π).
        return p.green_c * 2.0 * w.sqrt().asinh();
    }
    // d = 1 < α < 2: no elementary closed form; integrate directly.
    let a = 0.5 * p.alpha;
    let tol = 1e-12 * (2.0 / p.alpha) * w.powf(a);
    let integral = adaptive_quad(&|s: f64| s.powf(a - 1.0) / (1.0 + s).sqrt(), 0.0, w, tol)
        .expect("ball_green quadrature exhausted its subdivision budget");
    p.green_c * sep2.powf(0.5 * (p.alpha - 1.0)) * integral.value
}

/// Expected exit time of the ball started at `x`:
/// `(C_{d,α}/A_{d,-α}) (r² - |x-c|²)^{α/2}`, clamped to zero outside.
pub fn ball_exit_time(p: &StableParams, ball: &BallSpec, x: &Point) -> f64 {
    assert_eq!(x.dim(), p.d, "ball_exit_time: x has wrong dimension");
    let gap = ball.radius * ball.radius - geometry::dist_sq(x.coords(), ball.center.coords());
    if gap <= 0.0 {
        return 0.0;
    }
    exit_time_const(p) * gap.powf(0.5 * p.alpha)
}

/// Martin kernel of the centered ball `B(0, radius)` with reference point at
/// the origin: `M(x, y) = r^{d-α} (r² - |x|²)^{α/2} / |x-y|^d` for `x` in the
/// open ball and `y` on the sphere. Normalized so `M(0, y) = 1`.
pub fn ball_martin(p: &StableParams, radius: f64, x: &Point, y: &Point) -> Result<f64> {
    p.check_dim(x)?;
    p.check_dim(y)?;
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::domain("ball_martin: radius must be positive"));
    }
    let nx = x.norm();
    if nx >= radius {
        return Err(Error::domain("ball_martin: x must lie in the open ball"));
    }
    if (y.norm() - radius).abs() > 1e-9 * radius {
        return Err(Error::domain("ball_martin: y must lie on the sphere"));
    }
    let df = p.d as f64;
    let r2 = radius * radius;
    Ok(radius.powf(df - p.alpha) * (r2 - nx * nx).powf(0.5 * p.alpha)
        / x.dist(y).powf(df))
}

/// Riesz kernel `A_{d,α} |y-x|^{α-d}`, defined for `α < d`; `+∞` on the
/// diagonal.
pub fn riesz_kernel(p: &StableParams, x: &Point, y: &Point) -> Result<f64> {
    p.check_dim(x)?;
    p.check_dim(y)?;
    if p.alpha >= p.d as f64 {
        return Err(Error::InvalidParams(format!(
            "riesz_kernel requires alpha < d, got alpha = {}, d = {}",
            p.alpha, p.d
        )));
    }
    let r = x.dist(y);
    if r == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(riesz_const(p.d, p.alpha)? * r.powf(p.alpha - p.d as f64))
}

/// Surface area of the unit sphere in `R^d`: `2 π^{d/2} / Γ(d/2)`.
pub(crate) fn sphere_area(d: usize) -> f64 {
    let df = d as f64;
    (std::f64::consts::PI.ln() * (df / 2.0) + std::f64::consts::LN_2
        - numerics::ln_gamma(df / 2.0).expect("d/2 > 0"))
    .exp()
}
