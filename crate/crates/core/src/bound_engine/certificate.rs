//! Sufficient conditions for greedy optimality.
//!
//! When every sensor measures the same direction (single rows, pairwise
//! colinear) with uncorrelated scalar noise, the sensor information matrices
//! are all nonnegative multiples of one rank-one projector, hence totally
//! ordered under the PSD relation — and a totally ordered information bank
//! makes greedy selection exactly optimal. The certificate checks the
//! structural conditions directly and, independently, verifies total
//! ordering by exhaustive pairwise comparison.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix_kernel::{max_abs, psd_compare, PsdOrdering, SymmetricPsdMatrix};
use crate::system_model::SystemModel;
use crate::tolerances::COLINEARITY_TOL;

/// A structural condition the certificate found violated.
#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
pub enum CertificateFailure {
    #[error("sensor {sensor} has {rows} output rows; the rank-one analysis needs single-row sensors")]
    NotSingleRow { sensor: usize, rows: usize },
    #[error("sensors {first} and {second} measure non-colinear directions")]
    NotColinear { first: usize, second: usize },
}

/// Outcome of the greedy-optimality check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalityCertificate {
    /// True when every structural condition holds; greedy is then optimal.
    pub applies: bool,
    /// Violated conditions when `applies` is false.
    pub reasons: Vec<CertificateFailure>,
    /// Per-sensor signal-to-noise ratios `S_i^2 / v_i` (the squared lone
    /// singular value of the measurement row over its noise variance);
    /// populated when every sensor is single-row.
    pub singular_ratios: Vec<f64>,
    /// Independent check: every pair of sensor information matrices is
    /// PSD-comparable.
    pub totally_ordered: bool,
}

/// Checks the sufficient optimality conditions on a model.
///
/// Uncorrelated sensor noise is structural in [`SystemModel`], so the
/// remaining conditions are: every measurement matrix is a single row, the
/// nonzero rows are pairwise colinear, and the signal-to-noise ratios admit
/// a non-decreasing ordering (always satisfiable for finite ratios — the
/// sensors are simply relabeled in ratio order).
pub fn optimality_certificate(model: &SystemModel) -> OptimalityCertificate {
    let mut reasons = Vec::new();

    let mut all_single_row = true;
    for sensor in model.sensors() {
        let rows = sensor.output_dim();
        if rows != 1 {
            all_single_row = false;
            reasons.push(CertificateFailure::NotSingleRow {
                sensor: sensor.index(),
                rows,
            });
        }
    }

    if all_single_row {
        // Pairwise colinearity of nonzero rows via the squared sine of the
        // angle; each sensor is reported at most once.
        let rows: Vec<_> = model
            .sensors()
            .iter()
            .map(|s| s.measurement().row(0).clone_owned())
            .collect();
        for j in 0..rows.len() {
            let nj = rows[j].norm_squared();
            if nj == 0.0 {
                continue;
            }
            for i in 0..j {
                let ni = rows[i].norm_squared();
                if ni == 0.0 {
                    continue;
                }
                // sin^2 of the angle via orthogonal rejection; immune to the
                // cancellation that 1 - dot^2/(ni*nj) suffers near zero angle.
                let dot = rows[i].dot(&rows[j]);
                let rejection = &rows[j] - &rows[i] * (dot / ni);
                let sin_sq = rejection.norm_squared() / nj;
                if sin_sq > COLINEARITY_TOL * COLINEARITY_TOL {
                    reasons.push(CertificateFailure::NotColinear {
                        first: i,
                        second: j,
                    });
                    break;
                }
            }
        }
    }

    let singular_ratios = if all_single_row {
        model
            .sensors()
            .iter()
            .map(|s| {
                let signal_sq = s.measurement().row(0).norm_squared();
                signal_sq / s.noise().as_matrix()[(0, 0)]
            })
            .collect()
    } else {
        Vec::new()
    };

    let applies = reasons.is_empty();
    let totally_ordered = check_totally_ordered(model);
    OptimalityCertificate {
        applies,
        reasons,
        singular_ratios,
        totally_ordered,
    }
}

fn check_totally_ordered(model: &SystemModel) -> bool {
    let infos: Vec<SymmetricPsdMatrix> = model
        .sensors()
        .iter()
        .map(|s| {
            SymmetricPsdMatrix::new(s.information_matrix().clone())
                .expect("cached information matrices are PSD")
        })
        .collect();
    for i in 0..infos.len() {
        for j in (i + 1)..infos.len() {
            let scale = max_abs(infos[i].as_matrix())
                .max(max_abs(infos[j].as_matrix()))
                .max(1.0);
            match psd_compare(&infos[i], &infos[j], 1e-9 * scale) {
                Ok(PsdOrdering::Incomparable) => return false,
                Ok(_) => {}
                Err(_) => return false,
            }
        }
    }
    true
}
