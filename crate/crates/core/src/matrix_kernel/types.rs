//! Validated matrix newtypes and solver diagnostics.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::KernelError;
use crate::tolerances::{
    DARE_RESIDUAL_TOL, FIXED_POINT_CHANGE_TOL, MAX_SOLVER_ITERATIONS, PSD_TOL, SYMMETRY_TOL,
};

/// Largest absolute entry of a matrix (0 for empty matrices).
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, &x| acc.max(x.abs()))
}

/// Largest absolute elementwise difference between two equally sized matrices.
pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (&x, &y)| acc.max((x - y).abs()))
}

pub(crate) fn all_finite(m: &DMatrix<f64>) -> bool {
    m.iter().all(|x| x.is_finite())
}

/// Overwrite `m` with its symmetric part `(m + m^T)/2`.
pub(crate) fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let s = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = s;
            m[(j, i)] = s;
        }
    }
}

pub(crate) fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// A real square matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    inner: DMatrix<f64>,
}

impl SquareMatrix {
    /// Validates squareness and finiteness.
    pub fn new(m: DMatrix<f64>) -> Result<Self, KernelError> {
        if m.nrows() != m.ncols() {
            return Err(KernelError::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if !all_finite(&m) {
            return Err(KernelError::NonFinite);
        }
        Ok(Self { inner: m })
    }

    /// Builds an `n`-by-`n` matrix from row-major entries.
    pub fn from_row_major(n: usize, entries: &[f64]) -> Result<Self, KernelError> {
        if entries.len() != n * n {
            return Err(KernelError::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(n, n, entries))
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: DMatrix::identity(n, n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            inner: DMatrix::zeros(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.inner
    }

    pub fn trace(&self) -> f64 {
        self.inner.trace()
    }
}

/// A real symmetric positive-semidefinite matrix.
///
/// Construction checks symmetry against `SYMMETRY_TOL` (relative to the
/// largest entry magnitude, floored at 1) and the smallest eigenvalue
/// against `-PSD_TOL` (relative to the largest eigenvalue magnitude,
/// floored at 1), then stores the exactly symmetrized part. The extreme
/// eigenvalues found during validation are kept for cheap reuse.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricPsdMatrix {
    inner: DMatrix<f64>,
    lambda_min: f64,
    lambda_max: f64,
}

impl SymmetricPsdMatrix {
    pub fn new(mut m: DMatrix<f64>) -> Result<Self, KernelError> {
        if m.nrows() != m.ncols() {
            return Err(KernelError::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if !all_finite(&m) {
            return Err(KernelError::NonFinite);
        }
        let asym = max_asymmetry(&m);
        if asym > SYMMETRY_TOL * max_abs(&m).max(1.0) {
            return Err(KernelError::NotSymmetric {
                max_asymmetry: asym,
            });
        }
        symmetrize(&mut m);
        let (lambda_min, lambda_max) = extreme_symmetric_eigenvalues(&m);
        let scale = lambda_max.abs().max(lambda_min.abs()).max(1.0);
        if lambda_min < -PSD_TOL * scale {
            return Err(KernelError::NotPositiveSemidefinite { lambda_min });
        }
        Ok(Self {
            inner: m,
            lambda_min,
            lambda_max,
        })
    }

    /// Builds an `n`-by-`n` matrix from row-major entries.
    pub fn from_row_major(n: usize, entries: &[f64]) -> Result<Self, KernelError> {
        if entries.len() != n * n {
            return Err(KernelError::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(n, n, entries))
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            inner: DMatrix::zeros(n, n),
            lambda_min: 0.0,
            lambda_max: 0.0,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: DMatrix::identity(n, n),
            lambda_min: 1.0,
            lambda_max: 1.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.inner
    }

    pub fn trace(&self) -> f64 {
        self.inner.trace()
    }

    /// Smallest eigenvalue, as found at construction.
    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    /// Largest eigenvalue, as found at construction.
    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    /// Whether the smallest eigenvalue clears a positive-definiteness
    /// threshold relative to the spectral scale (floored at 1).
    pub fn is_positive_definite(&self, pd_tol: f64) -> bool {
        let scale = self.lambda_max.abs().max(1.0);
        self.lambda_min > pd_tol * scale
    }
}

pub(crate) fn extreme_symmetric_eigenvalues(m: &DMatrix<f64>) -> (f64, f64) {
    if m.nrows() == 0 {
        return (0.0, 0.0);
    }
    let eigs = m.clone().symmetric_eigenvalues();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &e in eigs.iter() {
        lo = lo.min(e);
        hi = hi.max(e);
    }
    (lo, hi)
}

/// Singular-value and (for symmetric inputs) eigenvalue extremes of a matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummary {
    /// Largest singular value.
    pub sigma_max: f64,
    /// Smallest singular value.
    pub sigma_min: f64,
    /// Largest eigenvalue; present only for symmetric inputs.
    pub lambda_max: Option<f64>,
    /// Smallest eigenvalue; present only for symmetric inputs.
    pub lambda_min: Option<f64>,
    /// Spectral norm, identical to `sigma_max`.
    pub spectral_norm: f64,
    pub trace: f64,
}

/// Convergence record attached to every fixed-point solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    /// Fixed-point steps performed (doubling steps for the Lyapunov solver).
    pub iterations: usize,
    /// Max-abs elementwise residual of the defining equation at the returned
    /// solution.
    pub residual: f64,
    /// Whether the residual met the solver's tolerance.
    pub converged: bool,
}

/// Tuning knobs for the fixed-point solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Max-abs elementwise change between iterates below which iteration
    /// stops.
    pub change_tol: f64,
    /// Max-abs residual of the defining equation the returned solution must
    /// meet.
    pub residual_tol: f64,
    pub max_iterations: usize,
    /// How the Riccati correction step is evaluated.
    pub method: DareMethod,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            change_tol: FIXED_POINT_CHANGE_TOL,
            residual_tol: DARE_RESIDUAL_TOL,
            max_iterations: MAX_SOLVER_ITERATIONS,
            method: DareMethod::MeasurementUpdate,
        }
    }
}

/// Evaluation strategy for the Riccati measurement correction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DareMethod {
    /// Joseph-free covariance update: never inverts the covariance iterate.
    MeasurementUpdate,
    /// Rank-one inverse updates of `(Sigma^-1 + R)^-1`; faster for many
    /// scalar sensors, must agree with the reference path to 1e-9.
    MillerInformation,
}
