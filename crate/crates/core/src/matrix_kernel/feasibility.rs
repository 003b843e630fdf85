//! PBH rank tests for detectability and stabilizability.
//!
//! Only eigenvalues on or outside the unit circle constrain either property,
//! so a Schur-stable dynamics matrix passes both tests without any
//! singular-value work.

use nalgebra::{Complex, DMatrix};

use super::KernelError;
use crate::tolerances::{PBH_RANK_TOL, STABILITY_MARGIN};

/// PBH detectability: `rank [A - lambda I; C] = n` for every eigenvalue
/// `lambda` of `A` with `|lambda| >= 1`.
pub fn pbh_detectable(a: &DMatrix<f64>, c: &DMatrix<f64>) -> Result<bool, KernelError> {
    if a.nrows() != a.ncols() {
        return Err(KernelError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if c.nrows() > 0 && c.ncols() != a.ncols() {
        return Err(KernelError::DimensionMismatch {
            expected: a.ncols(),
            found: c.ncols(),
        });
    }
    pbh_test(a, c, true)
}

/// PBH stabilizability: `rank [A - lambda I, B] = n` for every eigenvalue
/// `lambda` of `A` with `|lambda| >= 1`.
pub fn pbh_stabilizable(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<bool, KernelError> {
    if a.nrows() != a.ncols() {
        return Err(KernelError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if b.ncols() > 0 && b.nrows() != a.nrows() {
        return Err(KernelError::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    pbh_test(a, b, false)
}

fn pbh_test(a: &DMatrix<f64>, l: &DMatrix<f64>, stack_rows: bool) -> Result<bool, KernelError> {
    let n = a.nrows();
    if n == 0 {
        return Ok(true);
    }
    for lambda in a.complex_eigenvalues().iter() {
        if lambda.norm() < 1.0 - STABILITY_MARGIN {
            continue;
        }
        let pencil = a.map(Complex::from) - DMatrix::from_diagonal_element(n, n, *lambda);
        let stacked = if stack_rows {
            let mut m = DMatrix::zeros(n + l.nrows(), n);
            m.view_mut((0, 0), (n, n)).copy_from(&pencil);
            m.view_mut((n, 0), (l.nrows(), n))
                .copy_from(&l.map(Complex::from));
            m
        } else {
            let mut m = DMatrix::zeros(n, n + l.ncols());
            m.view_mut((0, 0), (n, n)).copy_from(&pencil);
            m.view_mut((0, n), (n, l.ncols()))
                .copy_from(&l.map(Complex::from));
            m
        };
        if complex_rank(&stacked) < n {
            return Ok(false);
        }
    }
    Ok(true)
}

fn complex_rank(m: &DMatrix<Complex<f64>>) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let largest = sv.iter().cloned().fold(0.0_f64, f64::max);
    if largest == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > PBH_RANK_TOL * largest).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn stable_matrix_always_passes() {
        let a = dmatrix![0.5, 0.4; 0.0, 0.3];
        let c = DMatrix::<f64>::zeros(0, 2);
        assert!(pbh_detectable(&a, &c).unwrap());
        assert!(pbh_stabilizable(&a, &DMatrix::<f64>::zeros(2, 0)).unwrap());
    }

    #[test]
    fn unstable_hidden_mode_fails_detectability() {
        let a = dmatrix![1.5, 0.0; 0.0, 0.5];
        let c = DMatrix::from_row_slice(1, 2, &[0.0, 1.0]);
        assert!(!pbh_detectable(&a, &c).unwrap());
        let c_seeing = DMatrix::from_row_slice(1, 2, &[1.0, 0.0]);
        assert!(pbh_detectable(&a, &c_seeing).unwrap());
    }

    #[test]
    fn unstable_unreachable_mode_fails_stabilizability() {
        let a = dmatrix![1.2, 0.0; 0.0, 0.5];
        let b = DMatrix::from_column_slice(2, 1, &[0.0, 1.0]);
        assert!(!pbh_stabilizable(&a, &b).unwrap());
        let b_full = DMatrix::identity(2, 2);
        assert!(pbh_stabilizable(&a, &b_full).unwrap());
    }

    #[test]
    fn complex_unstable_pair_is_tested() {
        // Rotation scaled to radius 1.1: complex conjugate eigenvalues
        // outside the unit circle, observable through a single row.
        let a = dmatrix![0.0, 1.1; -1.1, 0.0];
        let c = DMatrix::from_row_slice(1, 2, &[1.0, 0.0]);
        assert!(pbh_detectable(&a, &c).unwrap());
        let c_blind = DMatrix::<f64>::zeros(1, 2);
        assert!(!pbh_detectable(&a, &c_blind).unwrap());
    }
}
