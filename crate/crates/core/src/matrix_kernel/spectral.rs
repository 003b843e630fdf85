//! Spectral quantities: singular values, eigenvalue extremes, spectral
//! radius, and the similarity transform that makes a Schur-stable matrix
//! contractive.

use nalgebra::DMatrix;

use super::types::{extreme_symmetric_eigenvalues, max_abs, max_asymmetry};
use super::{solve_discrete_lyapunov, KernelError, SpectralSummary, SquareMatrix, SymmetricPsdMatrix};
use crate::tolerances::{STABILITY_MARGIN, SYMMETRY_TOL};

/// Largest eigenvalue magnitude of a real square matrix.
pub fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    m.complex_eigenvalues()
        .iter()
        .fold(0.0_f64, |acc, e| acc.max(e.norm()))
}

pub(crate) fn singular_value_extremes(m: &DMatrix<f64>) -> (f64, f64) {
    if m.is_empty() {
        return (0.0, 0.0);
    }
    let sv = m.clone().singular_values();
    let mut lo = f64::INFINITY;
    let mut hi = 0.0_f64;
    for &s in sv.iter() {
        lo = lo.min(s);
        hi = hi.max(s);
    }
    (lo, hi)
}

/// Singular values from the full matrix; eigenvalue fields are populated only
/// when the input is symmetric within the symmetry tolerance.
pub fn spectral_summary(m: &SquareMatrix) -> SpectralSummary {
    let inner = m.as_matrix();
    let (sigma_min, sigma_max) = singular_value_extremes(inner);
    let symmetric = max_asymmetry(inner) <= SYMMETRY_TOL * max_abs(inner).max(1.0);
    let (lambda_min, lambda_max) = if symmetric {
        let (lo, hi) = extreme_symmetric_eigenvalues(inner);
        (Some(lo), Some(hi))
    } else {
        (None, None)
    };
    SpectralSummary {
        sigma_max,
        sigma_min,
        lambda_max,
        lambda_min,
        spectral_norm: sigma_max,
        trace: inner.trace(),
    }
}

/// Symmetric positive-semidefinite square root via eigendecomposition.
/// Eigenvalues below zero (roundoff) are clamped.
pub fn symmetric_sqrt(m: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = m.clone().symmetric_eigen();
    let sqrt_vals = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    &eig.eigenvectors * DMatrix::from_diagonal(&sqrt_vals) * eig.eigenvectors.transpose()
}

/// Returns a nonsingular `P` with `sigma_max(P A P^-1) < 1`.
///
/// Already-contractive inputs get the identity. Otherwise `P = X^{1/2}` where
/// `X` solves `X = A^T X A + I`; then `sigma_max(P A P^-1)^2 = 1 - 1/lambda_max(X) < 1`.
pub fn stabilizing_transform(a: &SquareMatrix) -> Result<SquareMatrix, KernelError> {
    let rho = spectral_radius(a.as_matrix());
    if rho >= 1.0 - STABILITY_MARGIN {
        return Err(KernelError::Unstable {
            spectral_radius: rho,
        });
    }
    let n = a.dim();
    let (_, sigma_max) = singular_value_extremes(a.as_matrix());
    if sigma_max <= 1.0 - STABILITY_MARGIN {
        return Ok(SquareMatrix::identity(n));
    }
    let a_t = SquareMatrix::new(a.as_matrix().transpose())?;
    let (x, _) = solve_discrete_lyapunov(&a_t, &SymmetricPsdMatrix::identity(n))?;
    SquareMatrix::new(symmetric_sqrt(x.as_matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn identity_summary() {
        let m = SquareMatrix::identity(3);
        let s = spectral_summary(&m);
        assert!((s.sigma_max - 1.0).abs() < 1e-12);
        assert!((s.sigma_min - 1.0).abs() < 1e-12);
        assert_eq!(s.lambda_max, Some(1.0));
        assert_eq!(s.lambda_min, Some(1.0));
        assert!((s.trace - 3.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_summary() {
        let m = SquareMatrix::new(dmatrix![2.0, 0.0; 0.0, 0.5]).unwrap();
        let s = spectral_summary(&m);
        assert!((s.sigma_max - 2.0).abs() < 1e-12);
        assert!((s.sigma_min - 0.5).abs() < 1e-12);
        assert!((s.trace - 2.5).abs() < 1e-12);
        assert_eq!(s.spectral_norm, s.sigma_max);
    }

    #[test]
    fn nilpotent_jordan_block_summary() {
        // Explicit 2x2 SVD oracle: [[0,1],[0,0]] = U diag(1, 0) V^T.
        let m = SquareMatrix::new(dmatrix![0.0, 1.0; 0.0, 0.0]).unwrap();
        let s = spectral_summary(&m);
        assert!((s.sigma_max - 1.0).abs() < 1e-12);
        assert!(s.sigma_min.abs() < 1e-12);
        assert_eq!(s.lambda_max, None);
        assert_eq!(s.lambda_min, None);
    }

    #[test]
    fn non_finite_rejected_at_construction() {
        let err = SquareMatrix::new(dmatrix![f64::NAN, 0.0; 0.0, 1.0]).unwrap_err();
        assert_eq!(err, KernelError::NonFinite);
    }

    #[test]
    fn contractive_matrix_gets_identity_transform() {
        let a = SquareMatrix::new(dmatrix![0.3, 0.1; 0.0, 0.2]).unwrap();
        let p = stabilizing_transform(&a).unwrap();
        assert_eq!(p.as_matrix(), SquareMatrix::identity(2).as_matrix());
    }

    #[test]
    fn zero_matrix_gets_identity_transform() {
        let a = SquareMatrix::zeros(3);
        let p = stabilizing_transform(&a).unwrap();
        assert_eq!(p.as_matrix(), SquareMatrix::identity(3).as_matrix());
        let d = p.as_matrix() * a.as_matrix() * p.as_matrix().clone().try_inverse().unwrap();
        let (_, sigma_max) = singular_value_extremes(&d);
        assert!(sigma_max < 1e-15);
    }

    #[test]
    fn non_normal_stable_matrix_becomes_contractive() {
        // Stable (rho = 0.9) but far from contractive (sigma_max > 10).
        let a = SquareMatrix::new(dmatrix![0.9, 10.0; 0.0, 0.9]).unwrap();
        let (_, sigma_a) = singular_value_extremes(a.as_matrix());
        assert!(sigma_a > 1.0);
        let p = stabilizing_transform(&a).unwrap();
        let p_inv = p.as_matrix().clone().try_inverse().unwrap();
        let d = p.as_matrix() * a.as_matrix() * p_inv;
        let (_, sigma_d) = singular_value_extremes(&d);
        assert!(sigma_d < 1.0, "sigma_max(PAP^-1) = {sigma_d}");
    }

    #[test]
    fn unstable_matrix_rejected() {
        let a = SquareMatrix::new(dmatrix![1.2, 0.0; 0.0, 0.5]).unwrap();
        assert!(matches!(
            stabilizing_transform(&a),
            Err(KernelError::Unstable { .. })
        ));
    }
}
