//! The model interchange format.
//!
//! A model file is a single JSON document carrying the state dimension, the
//! sensor count, row-major `A` and `W`, and a per-sensor list of measurement
//! rows and noise blocks. Numbers round-trip at full f64 precision. The
//! document is versioned; loaders reject unknown formats and versions.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{build_model, ModelRejection, SensorBlock, SystemModel};

pub const MODEL_FORMAT_NAME: &str = "kfss-model";
pub const MODEL_FORMAT_VERSION: u32 = 1;

/// On-disk model document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format: String,
    pub version: u32,
    pub n: usize,
    pub num_sensors: usize,
    /// Row-major dynamics matrix, one inner vector per row.
    pub a: Vec<Vec<f64>>,
    /// Row-major state noise covariance.
    pub w: Vec<Vec<f64>>,
    pub sensors: Vec<SensorEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensorEntry {
    /// Measurement rows (`s_i` by `n`).
    pub c: Vec<Vec<f64>>,
    /// Noise covariance block (`s_i` by `s_i`).
    pub v: Vec<Vec<f64>>,
}

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed model file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format {found:?}, expected {MODEL_FORMAT_NAME:?}")]
    UnsupportedFormat { found: String },
    #[error("unsupported version {found}, expected {MODEL_FORMAT_VERSION}")]
    UnsupportedVersion { found: u32 },
    #[error("matrix {name} is ragged or empty")]
    BadShape { name: &'static str },
    #[error("declared n = {declared}, matrix a is {actual}x{actual}")]
    InconsistentDimension { declared: usize, actual: usize },
    #[error("declared num_sensors = {declared}, found {actual} sensor entries")]
    InconsistentSensorCount { declared: usize, actual: usize },
    #[error(transparent)]
    Rejected(#[from] ModelRejection),
}

/// Nested row-major rows to a dense matrix; rejects ragged input. An empty
/// outer vector produces a 0-by-0 matrix.
pub fn rows_to_dmatrix(rows: &[Vec<f64>], name: &'static str) -> Result<DMatrix<f64>, ModelFileError> {
    if rows.is_empty() {
        return Ok(DMatrix::zeros(0, 0));
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(ModelFileError::BadShape { name });
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    Ok(DMatrix::from_row_slice(rows.len(), cols, &flat))
}

/// Dense matrix to nested row-major rows.
pub fn dmatrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Serializes a validated model into its file document.
pub fn model_to_file(model: &SystemModel) -> ModelFile {
    ModelFile {
        format: MODEL_FORMAT_NAME.to_string(),
        version: MODEL_FORMAT_VERSION,
        n: model.n(),
        num_sensors: model.sensor_count(),
        a: dmatrix_to_rows(model.dynamics().as_matrix()),
        w: dmatrix_to_rows(model.state_noise().as_matrix()),
        sensors: model
            .sensors()
            .iter()
            .map(|s| SensorEntry {
                c: dmatrix_to_rows(s.measurement()),
                v: dmatrix_to_rows(s.noise().as_matrix()),
            })
            .collect(),
    }
}

/// Parses and validates a model document.
pub fn model_from_file(file: &ModelFile) -> Result<SystemModel, ModelFileError> {
    if file.format != MODEL_FORMAT_NAME {
        return Err(ModelFileError::UnsupportedFormat {
            found: file.format.clone(),
        });
    }
    if file.version != MODEL_FORMAT_VERSION {
        return Err(ModelFileError::UnsupportedVersion {
            found: file.version,
        });
    }
    let a = rows_to_dmatrix(&file.a, "a")?;
    if a.nrows() != file.n || a.ncols() != file.n {
        return Err(ModelFileError::InconsistentDimension {
            declared: file.n,
            actual: a.nrows(),
        });
    }
    if file.sensors.len() != file.num_sensors {
        return Err(ModelFileError::InconsistentSensorCount {
            declared: file.num_sensors,
            actual: file.sensors.len(),
        });
    }
    let w = rows_to_dmatrix(&file.w, "w")?;
    let sensors = file
        .sensors
        .iter()
        .map(|entry| {
            Ok(SensorBlock {
                measurement: rows_to_dmatrix(&entry.c, "sensor c")?,
                noise: rows_to_dmatrix(&entry.v, "sensor v")?,
            })
        })
        .collect::<Result<Vec<_>, ModelFileError>>()?;
    Ok(build_model(a, w, sensors)?)
}

/// Writes a model file as pretty-printed JSON.
pub fn save_model(model: &SystemModel, path: &Path) -> Result<(), ModelFileError> {
    let doc = model_to_file(model);
    let json = serde_json::to_string_pretty(&doc)?;
    fs::write(path, json + "\n")?;
    Ok(())
}

/// Loads and validates a model file.
pub fn load_model(path: &Path) -> Result<SystemModel, ModelFileError> {
    let text = fs::read_to_string(path)?;
    let doc: ModelFile = serde_json::from_str(&text)?;
    model_from_file(&doc)
}
