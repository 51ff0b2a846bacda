//! Exact walk-on-spheres sampling for the isotropic α-stable process and the
//! Monte Carlo estimators built on it.
//!
//! The walk is *exact*: each step draws the true exit position of the
//! process from a ball inscribed in the domain, so the only approximations
//! in any estimate are Monte Carlo error and (tracked) censoring of walks
//! that exhaust their step budget. All estimators are deterministic for a
//! fixed seed, independent of the rayon worker count.

mod estimators;
mod rng;
mod walk;

pub use estimators::{
    estimate_exit_time, estimate_green, estimate_harmonic_expectation, estimate_poisson_kernel,
    MCEstimate,
};
pub use rng::RngStream;
pub use walk::{run_walk, sample_ball_exit, sample_ball_exit_radius, WalkConfig, WalkOutcome};

pub(crate) use estimators::run_parallel;
pub(crate) use walk::run_walk_coords;
