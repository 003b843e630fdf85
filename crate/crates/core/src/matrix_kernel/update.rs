//! Rank-one inverse updates.

use super::{KernelError, SquareMatrix, SymmetricPsdMatrix};
use crate::tolerances::SINGULAR_UPDATE_TOL;

/// Given `C^-1` and a rank-at-most-one PSD update `B`, returns `(C + B)^-1`:
///
/// ```text
/// (C + B)^-1 = C^-1 - g C^-1 B C^-1,   g = 1 / (1 + trace(C^-1 B))
/// ```
///
/// The formula is exact only for `rank(B) <= 1`; that precondition is the
/// caller's. Higher-rank sums are handled by composing one update per
/// rank-one term.
pub fn miller_rank_one_update(
    c_inv: &SquareMatrix,
    b: &SymmetricPsdMatrix,
) -> Result<SquareMatrix, KernelError> {
    let n = c_inv.dim();
    if b.dim() != n {
        return Err(KernelError::DimensionMismatch {
            expected: n,
            found: b.dim(),
        });
    }
    let cb = c_inv.as_matrix() * b.as_matrix();
    let denominator = 1.0 + cb.trace();
    if denominator.abs() <= SINGULAR_UPDATE_TOL {
        return Err(KernelError::SingularUpdate { denominator });
    }
    let updated = c_inv.as_matrix() - (cb * c_inv.as_matrix()) / denominator;
    SquareMatrix::new(updated)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix_kernel::max_abs_diff;
    use nalgebra::{DMatrix, DVector};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn identity_plus_basis_outer_product() {
        let c_inv = SquareMatrix::identity(2);
        let b = SymmetricPsdMatrix::from_row_major(2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let updated = miller_rank_one_update(&c_inv, &b).unwrap();
        // (I + e1 e1^T)^-1 = diag(0.5, 1).
        assert!((updated.as_matrix()[(0, 0)] - 0.5).abs() < 1e-15);
        assert!((updated.as_matrix()[(1, 1)] - 1.0).abs() < 1e-15);
        assert!(updated.as_matrix()[(0, 1)].abs() < 1e-15);
    }

    #[test]
    fn zero_update_is_identity_map() {
        let c_inv = SquareMatrix::identity(2);
        let b = SymmetricPsdMatrix::zeros(2);
        let updated = miller_rank_one_update(&c_inv, &b).unwrap();
        assert_eq!(updated.as_matrix(), c_inv.as_matrix());
    }

    #[test]
    fn random_update_matches_direct_inverse() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = 4;
            let g = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
            let c = &g * g.transpose() + DMatrix::identity(n, n);
            let c_inv = SquareMatrix::new(c.clone().try_inverse().unwrap()).unwrap();
            let vvec = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
            let b_raw = &vvec * vvec.transpose();
            let b = SymmetricPsdMatrix::new(b_raw.clone()).unwrap();
            let updated = miller_rank_one_update(&c_inv, &b).unwrap();
            let direct = (c + b_raw).try_inverse().unwrap();
            assert!(max_abs_diff(updated.as_matrix(), &direct) < 1e-10);
        }
    }

    #[test]
    fn singular_denominator_rejected() {
        // C = diag(-1, 1) so C^-1 = C; B = e1 e1^T gives 1 + trace(C^-1 B) = 0.
        let c_inv = SquareMatrix::from_row_major(2, &[-1.0, 0.0, 0.0, 1.0]).unwrap();
        let b = SymmetricPsdMatrix::from_row_major(2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let err = miller_rank_one_update(&c_inv, &b).unwrap_err();
        assert!(matches!(err, KernelError::SingularUpdate { .. }));
    }

    #[test]
    fn composed_updates_match_direct_inverse_of_rank_k_sum() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = rng.random_range(2..=8);
            let k = rng.random_range(1..=10);
            let g = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
            let c = &g * g.transpose() + DMatrix::identity(n, n);
            let mut inv = SquareMatrix::new(c.clone().try_inverse().unwrap()).unwrap();
            let mut total = c;
            for _ in 0..k {
                let vvec = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
                let b_raw = &vvec * vvec.transpose();
                total += &b_raw;
                inv = miller_rank_one_update(
                    &inv,
                    &SymmetricPsdMatrix::new(b_raw).unwrap(),
                )
                .unwrap();
            }
            let direct = total.try_inverse().unwrap();
            assert!(max_abs_diff(inv.as_matrix(), &direct) < 1e-9);
        }
    }
}
