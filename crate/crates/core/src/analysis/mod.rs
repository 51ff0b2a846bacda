//! Boundary analysis built on the sampler: accessibility classification,
//! Martin-kernel estimation, and inequality audits (boundary Harnack,
//! kernel factorization, interior Harnack, inversion identities).

pub mod audits;
pub mod classify;
pub mod martin;

mod lattice;

pub use audits::{
    bhp_audit, factorization_audit, harnack_audit, kelvin_exit_time_check, kelvin_green_check,
    markov_audit, AuditReport, AuditSample,
};

pub use classify::{
    classify_boundary_point, classify_infinity, thorn_integral_test, BoundaryTarget,
    Classification, Evidence, LadderBudget, LadderRung, ShellBudget, Verdict,
};
pub use martin::{estimate_martin_kernel, MartinEstimate, MartinLevel};
