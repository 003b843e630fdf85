//! Empirical validity audit of the ratio bounds.
//!
//! The baseline bound must hold on every system; the improved bound is a
//! hypothesis whose violation rate is measured, not asserted. Offending
//! systems can be re-materialized as model files for inspection since every
//! record is reproducible from `(config, index)`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::campaign::SystemRecord;
use super::generator::{generate_random_system, GeneratorConfig};
use crate::system_model::{save_model, ModelFileError};
use crate::tolerances::RATIO_VIOLATION_TOL;

/// Outcome of auditing a record set against its bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    /// Records carrying a realized ratio.
    pub systems: usize,
    /// Records where the improved bound was defined.
    pub rnew_defined: usize,
    /// Indices with `r > r_old + tol`; expected empty.
    pub rold_violations: Vec<u64>,
    /// Indices with `r > r_new + tol`.
    pub rnew_violations: Vec<u64>,
    /// Indices with `r_new > r_old + tol`; expected empty since the
    /// improvement term is nonnegative.
    pub ordering_violations: Vec<u64>,
    /// `rnew_violations` over `rnew_defined`; 0 when undefined.
    pub rnew_violation_rate: f64,
    /// Fraction of defined improved bounds at or below the baseline bound.
    pub rnew_le_rold_rate: f64,
}

/// Counts and lists bound violations in `records`.
pub fn bound_audit(records: &[SystemRecord]) -> AuditReport {
    let mut systems = 0usize;
    let mut rnew_defined = 0usize;
    let mut rold_violations = Vec::new();
    let mut rnew_violations = Vec::new();
    let mut ordering_violations = Vec::new();

    for rec in records {
        let Some(r) = rec.r else { continue };
        systems += 1;
        if let Some(r_old) = rec.r_old {
            if r > r_old + RATIO_VIOLATION_TOL {
                rold_violations.push(rec.index);
            }
            if let Some(r_new) = rec.r_new {
                if r_new > r_old + RATIO_VIOLATION_TOL {
                    ordering_violations.push(rec.index);
                }
            }
        }
        if let Some(r_new) = rec.r_new {
            rnew_defined += 1;
            if r > r_new + RATIO_VIOLATION_TOL {
                rnew_violations.push(rec.index);
            }
        }
    }

    let rnew_violation_rate = if rnew_defined > 0 {
        rnew_violations.len() as f64 / rnew_defined as f64
    } else {
        0.0
    };
    let rnew_le_rold_rate = if rnew_defined > 0 {
        1.0 - ordering_violations.len() as f64 / rnew_defined as f64
    } else {
        0.0
    };

    AuditReport {
        systems,
        rnew_defined,
        rold_violations,
        rnew_violations,
        ordering_violations,
        rnew_violation_rate,
        rnew_le_rold_rate,
    }
}

#[derive(Debug, Error)]
pub enum AuditError {
    #[error("could not regenerate system {index}: {message}")]
    Regenerate { index: u64, message: String },
    #[error(transparent)]
    ModelFile(#[from] ModelFileError),
}

/// Re-materializes the listed systems as model files under `dir`, named
/// `offender_<index>.json`; returns the written paths.
pub fn write_offending_models(
    config: &GeneratorConfig,
    indices: &[u64],
    dir: &Path,
) -> Result<Vec<PathBuf>, AuditError> {
    let mut written = Vec::with_capacity(indices.len());
    for &index in indices {
        let model =
            generate_random_system(config, index).map_err(|e| AuditError::Regenerate {
                index,
                message: e.to_string(),
            })?;
        let path = dir.join(format!("offender_{index}.json"));
        save_model(&model, &path)?;
        written.push(path);
    }
    Ok(written)
}
