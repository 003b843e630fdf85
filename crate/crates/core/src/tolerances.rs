//! Centralized numerical tolerances.
//!
//! Every threshold used by the solvers, validators, and bound evaluators is
//! defined here so there are no ad-hoc magic numbers scattered through the
//! crate. Comparisons that scale with the data say so in their doc comment;
//! everything else is absolute.

/// Max-abs elementwise change between successive fixed-point iterates below
/// which a Riccati/Lyapunov iteration is considered stationary.
pub const FIXED_POINT_CHANGE_TOL: f64 = 1e-12;

/// Max-abs elementwise residual of the Riccati fixed-point equation required
/// of a returned steady-state covariance.
pub const DARE_RESIDUAL_TOL: f64 = 1e-9;

/// Max-abs elementwise residual of the discrete Lyapunov equation required of
/// a returned no-sensor covariance.
pub const LYAPUNOV_RESIDUAL_TOL: f64 = 1e-12;

/// Iteration cap for fixed-point solvers.
pub const MAX_SOLVER_ITERATIONS: usize = 100_000;

/// Spectral-radius slack: a system counts as stable only when
/// `rho(A) < 1 - STABILITY_MARGIN`.
pub const STABILITY_MARGIN: f64 = 1e-9;

/// Eigenvalue slack for positive semidefiniteness, relative to the matrix
/// spectral norm (with a floor of 1 for near-zero matrices).
pub const PSD_TOL: f64 = 1e-10;

/// Eigenvalue threshold for positive definiteness, relative to the matrix
/// spectral norm (with a floor of 1).
pub const PD_TOL: f64 = 1e-10;

/// Symmetry slack: `|m_ij - m_ji| <= SYMMETRY_TOL * max(1, max_abs(M))`.
pub const SYMMETRY_TOL: f64 = 1e-9;

/// Rank-one inverse updates reject denominators `|1 + trace(C^-1 B)|` at or
/// below this threshold.
pub const SINGULAR_UPDATE_TOL: f64 = 1e-12;

/// Singular-value ratio below which a dynamics matrix counts as singular:
/// `sigma_min(A) <= SINGULAR_MATRIX_TOL * sigma_max(A)`.
pub const SINGULAR_MATRIX_TOL: f64 = 1e-12;

/// Relative singular-value threshold for rank decisions in PBH
/// detectability/stabilizability tests.
pub const PBH_RANK_TOL: f64 = 1e-8;

/// Sine-of-angle threshold under which two measurement rows count as
/// colinear for the optimality certificate.
pub const COLINEARITY_TOL: f64 = 1e-9;

/// Largest number of subsets an exhaustive enumeration (brute-force optimum,
/// exact spectral maxima over budgeted subsets) will walk.
pub const ENUMERATION_CAP: u64 = 50_000;

/// Slack used when counting performance-ratio bound violations in campaign
/// statistics and audits.
pub const RATIO_VIOLATION_TOL: f64 = 1e-6;
