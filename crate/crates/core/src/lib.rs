//! Potential theory of the fractional Laplacian `(-Δ)^{α/2}`, `0 < α < 2`.
//!
//! The crate evaluates the closed-form kernels of the isotropic α-stable
//! process on balls (Poisson kernel, Green function, expected exit time,
//! Martin kernel), runs an *exact* walk-on-spheres sampler for harmonic
//! measure on constructive-solid-geometry domains, and builds boundary
//! diagnostics on top: accessibility classification of boundary points and
//! of the point at infinity, Martin kernel estimation, and audits of the
//! boundary Harnack principle, the Poisson kernel factorization, and the
//! Kelvin transform identities.
//!
//! Layout:
//! - [`numerics`] — special functions, adaptive quadrature, divergence probe;
//! - [`kernels`] — closed-form constants and ball kernels;
//! - [`geometry`] — domain trees, membership, certified inradius bounds;
//! - [`sampler`] — counter-based RNG, exact exit sampling, estimators;
//! - [`analysis`] — classification, Martin estimation, inequality audits;
//! - [`stats`] — deterministic reductions and test statistics.
//!
//! Every estimator is deterministic given `(seed, stream_index)` and the
//! walk configuration, independently of the rayon worker count.

pub mod analysis;
mod error;
pub mod geometry;
pub mod kernels;
pub mod numerics;
pub mod sampler;
pub mod stats;

pub use error::Error;
pub use geometry::{BallSpec, DomainSpec, InradiusBound, Point};
pub use kernels::StableParams;
pub use numerics::{DivergenceVerdict, QuadResult};
pub use sampler::{MCEstimate, RngStream, WalkConfig, WalkOutcome};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
