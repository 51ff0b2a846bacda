//! Special functions and numerical integration support.
//!
//! Everything downstream (kernel constants, incomplete-beta Green values,
//! accessibility probes) routes through this module, so the tolerances here
//! are the tightest in the crate: `ln_gamma` is good to 1e-12 relative on
//! `[0.5, 20]` and `reg_inc_beta` to 1e-10 absolute.

mod divergence;
mod quad;

pub use divergence::{
    divergence_probe, geometric_cutoffs, verdict_from_partials, DivergenceVerdict, ProbeOutcome,
};
pub use quad::{adaptive_quad, adaptive_quad_singular, adaptive_quad_to_inf, QuadResult};

use crate::{Error, Result};

/// Natural logarithm of the gamma function for positive arguments.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    Ok(statrs::function::gamma::ln_gamma(x))
}

/// `ln |Γ(x)|` for any non-pole argument; negative `x` goes through the
/// reflection formula `Γ(x)Γ(1-x) = π / sin(πx)`.
pub(crate) fn ln_abs_gamma(x: f64) -> Result<f64> {
    if x > 0.0 {
        return ln_gamma(x);
    }
    if x == x.floor() {
        return Err(Error::domain(format!("gamma pole at x = {x}")));
    }
    let s = (std::f64::consts::PI * x).sin().abs();
    Ok(std::f64::consts::PI.ln() - s.ln() - statrs::function::gamma::ln_gamma(1.0 - x))
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn reg_inc_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::domain(format!(
            "reg_inc_beta requires a, b > 0, got a = {a}, b = {b}"
        )));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!(
            "reg_inc_beta requires x in [0, 1], got {x}"
        )));
    }
    Ok(statrs::function::beta::beta_reg(a, b, x))
}
