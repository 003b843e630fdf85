//! Fixed-point solvers for the discrete Lyapunov equation and the a-priori
//! steady-state Riccati equation.
//!
//! The Riccati solver iterates the measurement-update form
//!
//! ```text
//! S_next = W + A S A^T - A S C^T (C S C^T + V)^-1 C S A^T
//! ```
//!
//! which is algebraically identical to the information form
//! `S = W + A (S^-1 + C^T V^-1 C)^-1 A^T` by the matrix inversion lemma but
//! never inverts the iterate. Iteration starts at `S = W`, stops when the
//! max-abs elementwise change drops below `change_tol`, and the returned
//! solution must satisfy the information-form residual within
//! `residual_tol`.

use nalgebra::{DMatrix, DVector};

use super::spectral::spectral_radius;
use super::types::{max_abs, max_abs_diff, symmetrize};
use super::{
    pbh_detectable, pbh_stabilizable, symmetric_sqrt, DareMethod, FeasibilityFailure, KernelError,
    SolveDiagnostics, SolverOptions, SquareMatrix, SymmetricPsdMatrix,
};
use crate::tolerances::{LYAPUNOV_RESIDUAL_TOL, PD_TOL, SINGULAR_UPDATE_TOL, STABILITY_MARGIN};

/// Solves `S = A S A^T + W` for Schur-stable `A` with the default tolerances.
pub fn solve_discrete_lyapunov(
    a: &SquareMatrix,
    w: &SymmetricPsdMatrix,
) -> Result<(SymmetricPsdMatrix, SolveDiagnostics), KernelError> {
    let opts = SolverOptions {
        residual_tol: LYAPUNOV_RESIDUAL_TOL,
        ..SolverOptions::default()
    };
    solve_discrete_lyapunov_with(a, w, &opts)
}

/// Solves `S = A S A^T + W` by doubling: each step squares the propagator,
/// so the partial sum covers `2^k` terms after `k` steps.
pub fn solve_discrete_lyapunov_with(
    a: &SquareMatrix,
    w: &SymmetricPsdMatrix,
    opts: &SolverOptions,
) -> Result<(SymmetricPsdMatrix, SolveDiagnostics), KernelError> {
    let n = a.dim();
    if w.dim() != n {
        return Err(KernelError::DimensionMismatch {
            expected: n,
            found: w.dim(),
        });
    }
    let rho = spectral_radius(a.as_matrix());
    if rho >= 1.0 - STABILITY_MARGIN {
        return Err(KernelError::Unstable {
            spectral_radius: rho,
        });
    }

    let mut s = w.as_matrix().clone();
    let mut t = a.as_matrix().clone();
    let mut iterations = 0usize;
    loop {
        iterations += 1;
        let incr = &t * &s * t.transpose();
        let delta = max_abs(&incr);
        s += &incr;
        symmetrize(&mut s);
        // The next increment is smaller by a factor ~rho^(2^k); once the
        // current one is below roundoff relative to the sum, the tail is too.
        if delta <= 1e-17 * max_abs(&s).max(1.0) || iterations >= 128 {
            break;
        }
        t = &t * &t;
    }

    let residual = lyapunov_residual(a.as_matrix(), w.as_matrix(), &s);
    if residual > opts.residual_tol {
        return Err(KernelError::NoConvergence {
            iterations,
            residual,
        });
    }
    let sigma = SymmetricPsdMatrix::new(s)?;
    Ok((
        sigma,
        SolveDiagnostics {
            iterations,
            residual,
            converged: true,
        },
    ))
}

/// Max-abs elementwise residual of `S - A S A^T - W`.
pub fn lyapunov_residual(a: &DMatrix<f64>, w: &DMatrix<f64>, s: &DMatrix<f64>) -> f64 {
    let reconstructed = a * s * a.transpose() + w;
    max_abs_diff(s, &reconstructed)
}

/// Solves the steady-state Riccati equation with default tolerances.
pub fn solve_dare(
    a: &SquareMatrix,
    w: &SymmetricPsdMatrix,
    c: &DMatrix<f64>,
    v: &SymmetricPsdMatrix,
) -> Result<(SymmetricPsdMatrix, SolveDiagnostics), KernelError> {
    solve_dare_with(a, w, c, v, &SolverOptions::default())
}

/// Solves `S = W + A (S^-1 + C^T V^-1 C)^-1 A^T`.
///
/// `c` stacks the selected measurement rows (`m` by `n`, `m = 0` permitted);
/// `v` is the matching noise covariance block. An empty `c` reduces the
/// equation to the discrete Lyapunov equation and is delegated there.
/// `W` and (for `m > 0`) `v` must be positive definite. Feasibility is
/// pre-checked per the PBH tests; a Schur-stable `A` passes trivially, so the
/// singular-value work is skipped for it.
pub fn solve_dare_with(
    a: &SquareMatrix,
    w: &SymmetricPsdMatrix,
    c: &DMatrix<f64>,
    v: &SymmetricPsdMatrix,
    opts: &SolverOptions,
) -> Result<(SymmetricPsdMatrix, SolveDiagnostics), KernelError> {
    let n = a.dim();
    if w.dim() != n {
        return Err(KernelError::DimensionMismatch {
            expected: n,
            found: w.dim(),
        });
    }
    let m = c.nrows();
    if m == 0 {
        return solve_discrete_lyapunov_with(a, w, opts);
    }
    if c.ncols() != n {
        return Err(KernelError::DimensionMismatch {
            expected: n,
            found: c.ncols(),
        });
    }
    if v.dim() != m {
        return Err(KernelError::DimensionMismatch {
            expected: m,
            found: v.dim(),
        });
    }
    if !w.is_positive_definite(PD_TOL) {
        return Err(KernelError::NotPositiveDefinite {
            lambda_min: w.lambda_min(),
        });
    }
    if !v.is_positive_definite(PD_TOL) {
        return Err(KernelError::NotPositiveDefinite {
            lambda_min: v.lambda_min(),
        });
    }

    let rho = spectral_radius(a.as_matrix());
    if rho >= 1.0 - STABILITY_MARGIN {
        if !pbh_detectable(a.as_matrix(), c)? {
            return Err(KernelError::Infeasible(FeasibilityFailure::Undetectable));
        }
        let w_sqrt = symmetric_sqrt(w.as_matrix());
        if !pbh_stabilizable(a.as_matrix(), &w_sqrt)? {
            return Err(KernelError::Infeasible(FeasibilityFailure::Unstabilizable));
        }
    }

    let v_chol = nalgebra::Cholesky::new(v.as_matrix().clone()).ok_or(
        KernelError::NotPositiveDefinite {
            lambda_min: v.lambda_min(),
        },
    )?;
    // v^-1 = L^-T L^-1, so R = C^T v^-1 C = (L^-1 C)^T (L^-1 C).
    let info_rows = v_chol
        .l()
        .solve_lower_triangular(c)
        .ok_or(KernelError::NotPositiveDefinite {
            lambda_min: v.lambda_min(),
        })?;
    let mut r = info_rows.transpose() * &info_rows;
    symmetrize(&mut r);

    let a_t = a.as_matrix().transpose();
    let c_t = c.transpose();
    let operands = DareOperands {
        a: a.as_matrix(),
        a_t: &a_t,
        w: w.as_matrix(),
        c,
        c_t: &c_t,
        v: v.as_matrix(),
        r: &r,
        info_rows: &info_rows,
    };
    let mut ws = DareWorkspace::new(n, m);
    let (sigma, diagnostics) = dare_iterate(&operands, opts, &mut ws)?;
    Ok((SymmetricPsdMatrix::new(sigma)?, diagnostics))
}

/// Borrowed matrices describing one Riccati instance. `r` must equal
/// `c^T v^-1 c` and `info_rows^T info_rows` must equal `r`.
pub(crate) struct DareOperands<'a> {
    pub a: &'a DMatrix<f64>,
    pub a_t: &'a DMatrix<f64>,
    pub w: &'a DMatrix<f64>,
    pub c: &'a DMatrix<f64>,
    pub c_t: &'a DMatrix<f64>,
    pub v: &'a DMatrix<f64>,
    pub r: &'a DMatrix<f64>,
    pub info_rows: &'a DMatrix<f64>,
}

/// Reusable buffers for the Riccati iteration; sized once per (n, m) pair.
pub(crate) struct DareWorkspace {
    sigma: DMatrix<f64>,
    next: DMatrix<f64>,
    half: DMatrix<f64>,
    a_half: DMatrix<f64>,
    u: DMatrix<f64>,
    s: DMatrix<f64>,
    x: DMatrix<f64>,
    g: DVector<f64>,
}

impl DareWorkspace {
    pub fn new(n: usize, m: usize) -> Self {
        Self {
            sigma: DMatrix::zeros(n, n),
            next: DMatrix::zeros(n, n),
            half: DMatrix::zeros(n, n),
            a_half: DMatrix::zeros(n, n),
            u: DMatrix::zeros(n, m),
            s: DMatrix::zeros(m, m),
            x: DMatrix::zeros(m, n),
            g: DVector::zeros(n),
        }
    }
}

/// Unvalidated Riccati fixed-point iteration; callers guarantee the
/// preconditions checked by [`solve_dare_with`]. The hot loop is
/// allocation-free.
pub(crate) fn dare_iterate(
    op: &DareOperands<'_>,
    opts: &SolverOptions,
    ws: &mut DareWorkspace,
) -> Result<(DMatrix<f64>, SolveDiagnostics), KernelError> {
    ws.sigma.copy_from(op.w);
    let mut iterations = 0usize;
    let mut change = f64::INFINITY;
    while iterations < opts.max_iterations {
        iterations += 1;
        match opts.method {
            DareMethod::MeasurementUpdate => {
                // u = S C^T ; s = C S C^T + V
                ws.u.gemm(1.0, &ws.sigma, op.c_t, 0.0);
                ws.s.copy_from(op.v);
                ws.s.gemm(1.0, op.c, &ws.u, 1.0);
                if !cholesky_in_place(&mut ws.s) {
                    return Err(KernelError::SingularCovariance {
                        iteration: iterations,
                    });
                }
                // x = (C S C^T + V)^-1 C S
                ws.u.transpose_to(&mut ws.x);
                cholesky_solve_in_place(&ws.s, &mut ws.x);
                // half = S - S C^T x
                ws.half.copy_from(&ws.sigma);
                ws.half.gemm(-1.0, &ws.u, &ws.x, 1.0);
                symmetrize(&mut ws.half);
            }
            DareMethod::MillerInformation => {
                // half = (S^-1 + sum_j w_j w_j^T)^-1 via rank-one updates.
                ws.half.copy_from(&ws.sigma);
                for j in 0..op.info_rows.nrows() {
                    let row = op.info_rows.row(j).transpose();
                    ws.g.gemv(1.0, &ws.half, &row, 0.0);
                    let denom = 1.0 + row.dot(&ws.g);
                    if denom.abs() <= SINGULAR_UPDATE_TOL {
                        return Err(KernelError::SingularCovariance {
                            iteration: iterations,
                        });
                    }
                    ws.half.ger(-1.0 / denom, &ws.g, &ws.g, 1.0);
                }
                symmetrize(&mut ws.half);
            }
        }
        // next = W + A half A^T
        ws.a_half.gemm(1.0, op.a, &ws.half, 0.0);
        ws.next.copy_from(op.w);
        ws.next.gemm(1.0, &ws.a_half, op.a_t, 1.0);
        symmetrize(&mut ws.next);

        change = max_abs_diff(&ws.next, &ws.sigma);
        std::mem::swap(&mut ws.sigma, &mut ws.next);
        if change <= opts.change_tol {
            break;
        }
    }

    if change > opts.change_tol {
        return Err(KernelError::NoConvergence {
            iterations,
            residual: change,
        });
    }

    let residual = dare_residual(op.a, op.a_t, op.w, op.r, &ws.sigma)
        .ok_or(KernelError::SingularCovariance {
            iteration: iterations,
        })?;
    if residual > opts.residual_tol {
        return Err(KernelError::NoConvergence {
            iterations,
            residual,
        });
    }
    Ok((
        ws.sigma.clone(),
        SolveDiagnostics {
            iterations,
            residual,
            converged: true,
        },
    ))
}

/// Max-abs residual of the information form
/// `S - W - A (S^-1 + R)^-1 A^T`; `None` if `S` or `S^-1 + R` fails to factor.
pub(crate) fn dare_residual(
    a: &DMatrix<f64>,
    a_t: &DMatrix<f64>,
    w: &DMatrix<f64>,
    r: &DMatrix<f64>,
    sigma: &DMatrix<f64>,
) -> Option<f64> {
    let sigma_inv = nalgebra::Cholesky::new(sigma.clone())?.inverse();
    let mid = nalgebra::Cholesky::new(sigma_inv + r)?.inverse();
    let reconstructed = w + a * mid * a_t;
    Some(max_abs_diff(sigma, &reconstructed))
}

/// In-place lower Cholesky factorization; returns false when the matrix is
/// not numerically positive definite. Entries above the diagonal are left
/// untouched and ignored by [`cholesky_solve_in_place`].
fn cholesky_in_place(m: &mut DMatrix<f64>) -> bool {
    let dim = m.nrows();
    for j in 0..dim {
        let mut d = m[(j, j)];
        for k in 0..j {
            let l = m[(j, k)];
            d -= l * l;
        }
        if d <= 0.0 || !d.is_finite() {
            return false;
        }
        let root = d.sqrt();
        m[(j, j)] = root;
        for i in (j + 1)..dim {
            let mut val = m[(i, j)];
            for k in 0..j {
                val -= m[(i, k)] * m[(j, k)];
            }
            m[(i, j)] = val / root;
        }
    }
    true
}

/// Solves `L L^T X = B` in place given the lower factor from
/// [`cholesky_in_place`].
fn cholesky_solve_in_place(l: &DMatrix<f64>, b: &mut DMatrix<f64>) {
    let m = l.nrows();
    for col in 0..b.ncols() {
        for i in 0..m {
            let mut val = b[(i, col)];
            for j in 0..i {
                val -= l[(i, j)] * b[(j, col)];
            }
            b[(i, col)] = val / l[(i, i)];
        }
        for i in (0..m).rev() {
            let mut val = b[(i, col)];
            for j in (i + 1)..m {
                val -= l[(j, i)] * b[(j, col)];
            }
            b[(i, col)] = val / l[(i, i)];
        }
    }
}
