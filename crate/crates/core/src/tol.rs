//! Numerical tolerances used across the crate.

/// Determinant tolerance for matrices promised to lie in SL(2,C).
pub const TOL_DET: f64 = 1e-9;
/// General-purpose comparison tolerance for geometric identities.
pub const TOL_GENERAL: f64 = 1e-8;
/// Relative tolerance band for tangency classification.
pub const TOL_TANG: f64 = 1e-9;
/// Exclusion radius around node centers for plane-chart field evaluation.
pub const R_MIN: f64 = 1e-3;
/// Largest neck parameter the first-order model accepts.
pub const TAU_MAX: f64 = 1e-2;
/// Per-segment Richardson target for geometry transports.
pub const TOL_ODE: f64 = 1e-10;
/// Per-segment Richardson target for monodromy-residual transports.
///
/// Tighter than [`TOL_ODE`] because the residual rescales monodromy entries
/// by 1/(τs); loop transports additionally run in deviation form so the
/// error stays proportional to the O(τ) deviation itself.
pub const TOL_ODE_RESIDUAL: f64 = 1e-13;
/// Seam-coincidence tolerance for meshes, half-space coordinates.
pub const TOL_GEO: f64 = 1e-7;
/// Smallest singular value the residual Jacobian must keep at t = 0.
pub const SIGMA_MIN: f64 = 1e-3;
/// Degenerate-triangle area threshold (euclidean half-space coordinates).
pub const TOL_AREA: f64 = 1e-14;
/// Minimum separation enforced between node points in one plane chart
/// (unit disks disjoint needs 2; margin leaves room for path detours).
pub const NODE_SEPARATION: f64 = 2.6;
