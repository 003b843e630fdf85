//! The positive-semidefinite order relation.

use serde::{Deserialize, Serialize};

use super::types::extreme_symmetric_eigenvalues;
use super::{KernelError, SymmetricPsdMatrix};

/// Outcome of comparing two symmetric matrices under the PSD order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PsdOrdering {
    /// `X - Y` is PSD (within tolerance) and `Y - X` is not.
    GreaterOrEqual,
    /// `Y - X` is PSD (within tolerance) and `X - Y` is not.
    LessOrEqual,
    /// Both differences are PSD within tolerance.
    Equal,
    /// Neither difference is PSD: the pair is not comparable.
    Incomparable,
}

/// Classifies `X` against `Y` by the extreme eigenvalues of `X - Y`:
/// `lambda_min >= -tol` certifies `X >= Y`, `lambda_max <= tol` certifies
/// `Y >= X`.
pub fn psd_compare(
    x: &SymmetricPsdMatrix,
    y: &SymmetricPsdMatrix,
    tol: f64,
) -> Result<PsdOrdering, KernelError> {
    if x.dim() != y.dim() {
        return Err(KernelError::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    let diff = x.as_matrix() - y.as_matrix();
    let (lambda_min, lambda_max) = extreme_symmetric_eigenvalues(&diff);
    let x_ge_y = lambda_min >= -tol;
    let y_ge_x = lambda_max <= tol;
    Ok(match (x_ge_y, y_ge_x) {
        (true, true) => PsdOrdering::Equal,
        (true, false) => PsdOrdering::GreaterOrEqual,
        (false, true) => PsdOrdering::LessOrEqual,
        (false, false) => PsdOrdering::Incomparable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dmatrix, DMatrix};

    const TOL: f64 = 1e-10;

    #[test]
    fn scaled_identity_dominates() {
        let x = SymmetricPsdMatrix::new(DMatrix::identity(3, 3) * 2.0).unwrap();
        let y = SymmetricPsdMatrix::identity(3);
        assert_eq!(psd_compare(&x, &y, TOL).unwrap(), PsdOrdering::GreaterOrEqual);
        assert_eq!(psd_compare(&y, &x, TOL).unwrap(), PsdOrdering::LessOrEqual);
    }

    #[test]
    fn indefinite_difference_is_incomparable() {
        let x = SymmetricPsdMatrix::new(dmatrix![2.0, 0.0; 0.0, 0.0]).unwrap();
        let y = SymmetricPsdMatrix::new(dmatrix![0.0, 0.0; 0.0, 2.0]).unwrap();
        assert_eq!(psd_compare(&x, &y, TOL).unwrap(), PsdOrdering::Incomparable);
    }

    #[test]
    fn equal_matrices_compare_equal() {
        let x = SymmetricPsdMatrix::new(dmatrix![1.5, 0.4; 0.4, 2.0]).unwrap();
        assert_eq!(psd_compare(&x, &x.clone(), TOL).unwrap(), PsdOrdering::Equal);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let x = SymmetricPsdMatrix::identity(2);
        let y = SymmetricPsdMatrix::identity(3);
        assert!(matches!(
            psd_compare(&x, &y, TOL),
            Err(KernelError::DimensionMismatch { .. })
        ));
    }
}
