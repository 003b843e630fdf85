//! Dense small-matrix numerical core.
//!
//! Everything downstream runs on the machinery in this module: validated
//! matrix types, spectral summaries, discrete Lyapunov and Riccati
//! fixed-point solvers, rank-one inverse updates, the positive-semidefinite
//! order relation, and PBH feasibility tests. Matrices here are small
//! (n up to ~20) and dense; there is no attempt to compete with a BLAS.

mod feasibility;
mod ordering;
mod solvers;
mod spectral;
mod types;
mod update;

pub use feasibility::{pbh_detectable, pbh_stabilizable};
pub use ordering::{psd_compare, PsdOrdering};
pub use solvers::{
    lyapunov_residual, solve_dare, solve_dare_with, solve_discrete_lyapunov,
    solve_discrete_lyapunov_with,
};
pub use spectral::{spectral_radius, spectral_summary, stabilizing_transform, symmetric_sqrt};
pub use types::{
    max_abs, max_abs_diff, DareMethod, SolveDiagnostics, SolverOptions, SpectralSummary,
    SquareMatrix, SymmetricPsdMatrix,
};
pub use update::miller_rank_one_update;

pub(crate) use solvers::{dare_iterate, DareOperands, DareWorkspace};
pub(crate) use types::symmetrize;

use thiserror::Error;

/// Which half of the Lemma 1 feasibility pre-check failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FeasibilityFailure {
    /// `(A, C_z)` fails the PBH detectability test.
    #[error("(A, C) is not detectable")]
    Undetectable,
    /// `(A, W^{1/2})` fails the PBH stabilizability test.
    #[error("(A, W^(1/2)) is not stabilizable")]
    Unstabilizable,
}

/// Errors produced by the matrix kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not symmetric (max asymmetry {max_asymmetry:.3e})")]
    NotSymmetric { max_asymmetry: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {lambda_min:.3e})")]
    NotPositiveSemidefinite { lambda_min: f64 },
    #[error("matrix is not positive definite (min eigenvalue {lambda_min:.3e})")]
    NotPositiveDefinite { lambda_min: f64 },
    #[error("spectral radius {spectral_radius} is not strictly inside the unit circle")]
    Unstable { spectral_radius: f64 },
    #[error("no convergence after {iterations} iterations (last residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("infeasible problem: {0}")]
    Infeasible(FeasibilityFailure),
    #[error("covariance iterate lost positive definiteness at iteration {iteration}")]
    SingularCovariance { iteration: usize },
    #[error("rank-one update denominator {denominator:.3e} is numerically singular")]
    SingularUpdate { denominator: f64 },
}
