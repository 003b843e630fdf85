//! Problem instances: dynamics, noise covariances, sensor banks, selection
//! vectors, and the trace cost.
//!
//! A [`SystemModel`] is immutable once built and `build_model` is the only
//! way to get one, so every downstream consumer can rely on: `A` Schur
//! stable, `W` symmetric positive definite, every sensor noise block
//! symmetric positive definite with matching dimensions, and the stacked
//! pair detectable / stabilizable. Validation collects *all* violations
//! rather than stopping at the first.
//!
//! Sensor noise is uncorrelated across sensors by construction: each sensor
//! carries its own noise block and the stacked covariance is assembled block
//! diagonal. A dense correlated covariance cannot be represented.

mod evaluator;
mod file_format;

pub use evaluator::{CostError, CostEvaluator, CostedSelection};
pub use file_format::{
    dmatrix_to_rows, load_model, model_from_file, model_to_file, rows_to_dmatrix, save_model,
    ModelFile, ModelFileError, SensorEntry, MODEL_FORMAT_NAME, MODEL_FORMAT_VERSION,
};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix_kernel::{
    pbh_detectable, pbh_stabilizable, spectral_radius, symmetric_sqrt, KernelError, SquareMatrix,
    SymmetricPsdMatrix,
};
use crate::tolerances::{PD_TOL, STABILITY_MARGIN};

/// Maximum sensor bank size; selections are stored as 64-bit masks.
pub const MAX_SENSORS: usize = 64;

/// Raw per-sensor input to [`build_model`]: an `s_i`-by-`n` measurement
/// matrix and an `s_i`-by-`s_i` noise covariance block.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorBlock {
    pub measurement: DMatrix<f64>,
    pub noise: DMatrix<f64>,
}

/// A validated sensor: measurement matrix, positive-definite noise block,
/// and cached derived quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct Sensor {
    index: usize,
    measurement: DMatrix<f64>,
    noise: SymmetricPsdMatrix,
    /// `R_i = C_i^T V_i^-1 C_i`, symmetric PSD, n-by-n.
    information: DMatrix<f64>,
    /// `L^-1 C_i` with `V_i = L L^T`; `information = info_rows^T info_rows`.
    info_rows: DMatrix<f64>,
}

impl Sensor {
    pub fn index(&self) -> usize {
        self.index
    }

    /// Measurement rows (`s_i` by `n`).
    pub fn measurement(&self) -> &DMatrix<f64> {
        &self.measurement
    }

    /// Noise covariance block (`s_i` by `s_i`).
    pub fn noise(&self) -> &SymmetricPsdMatrix {
        &self.noise
    }

    /// Number of outputs `s_i`.
    pub fn output_dim(&self) -> usize {
        self.measurement.nrows()
    }

    /// Cached `C_i^T V_i^-1 C_i`.
    pub fn information_matrix(&self) -> &DMatrix<f64> {
        &self.information
    }
}

/// One violated model invariant; [`build_model`] reports every one it finds.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelViolation {
    #[error("dynamics matrix invalid: {0}")]
    BadDynamics(KernelError),
    #[error("system is not stable: spectral radius {spectral_radius}")]
    Unstable { spectral_radius: f64 },
    #[error("state noise covariance invalid: {0}")]
    BadStateNoise(KernelError),
    #[error("state noise covariance is not positive definite (min eigenvalue {lambda_min:.3e})")]
    NotPositiveDefiniteW { lambda_min: f64 },
    #[error("state noise covariance is {found}x{found}, dynamics are {expected}x{expected}")]
    StateNoiseDimensionMismatch { expected: usize, found: usize },
    #[error("sensor {sensor}: measurement matrix has {found} columns, state dimension is {expected}")]
    SensorDimensionMismatch {
        sensor: usize,
        expected: usize,
        found: usize,
    },
    #[error("sensor {sensor}: measurement matrix contains non-finite entries")]
    NonFiniteSensor { sensor: usize },
    #[error("sensor {sensor}: noise block is {found_rows}x{found_cols}, expected {expected}x{expected}")]
    SensorNoiseDimensionMismatch {
        sensor: usize,
        expected: usize,
        found_rows: usize,
        found_cols: usize,
    },
    #[error("sensor {sensor}: noise block invalid: {source}")]
    BadSensorNoise { sensor: usize, source: KernelError },
    #[error("sensor {sensor}: noise block is not positive definite (min eigenvalue {lambda_min:.3e})")]
    SensorNoiseNotPositiveDefinite { sensor: usize, lambda_min: f64 },
    #[error("(A, C) is not detectable")]
    Undetectable,
    #[error("(A, W^(1/2)) is not stabilizable")]
    Unstabilizable,
    #[error("sensor bank of {count} exceeds the supported maximum of {MAX_SENSORS}")]
    TooManySensors { count: usize },
}

/// Structured rejection from [`build_model`] listing every violated
/// invariant.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("model rejected: {}", violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct ModelRejection {
    pub violations: Vec<ModelViolation>,
}

/// A validated sensor-selection problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemModel {
    dynamics: SquareMatrix,
    dynamics_t: DMatrix<f64>,
    state_noise: SymmetricPsdMatrix,
    sensors: Vec<Sensor>,
    spectral_radius: f64,
}

impl SystemModel {
    /// State dimension `n`.
    pub fn n(&self) -> usize {
        self.dynamics.dim()
    }

    /// Number of candidate sensors `|Q|`.
    pub fn sensor_count(&self) -> usize {
        self.sensors.len()
    }

    pub fn dynamics(&self) -> &SquareMatrix {
        &self.dynamics
    }

    pub(crate) fn dynamics_t(&self) -> &DMatrix<f64> {
        &self.dynamics_t
    }

    pub fn state_noise(&self) -> &SymmetricPsdMatrix {
        &self.state_noise
    }

    pub fn sensors(&self) -> &[Sensor] {
        &self.sensors
    }

    pub fn sensor(&self, index: usize) -> &Sensor {
        &self.sensors[index]
    }

    pub fn spectral_radius(&self) -> f64 {
        self.spectral_radius
    }

    /// Sum of cached per-sensor information matrices over `indices`
    /// (ascending), as a raw matrix.
    pub(crate) fn information_sum(&self, indices: impl Iterator<Item = usize>) -> DMatrix<f64> {
        let mut sum = DMatrix::zeros(self.n(), self.n());
        for i in indices {
            sum += &self.sensors[i].information;
        }
        sum
    }

    /// Stacks measurement rows, noise blocks (block diagonal), and
    /// information square-root rows of the selected sensors, ascending by
    /// index.
    pub(crate) fn stacked(&self, indices: &[usize]) -> StackedSelection {
        let n = self.n();
        let m: usize = indices.iter().map(|&i| self.sensors[i].output_dim()).sum();
        let mut c = DMatrix::zeros(m, n);
        let mut v = DMatrix::zeros(m, m);
        let mut info_rows = DMatrix::zeros(m, n);
        let mut row = 0;
        for &i in indices {
            let s = &self.sensors[i];
            let si = s.output_dim();
            c.view_mut((row, 0), (si, n)).copy_from(&s.measurement);
            v.view_mut((row, row), (si, si))
                .copy_from(s.noise.as_matrix());
            info_rows
                .view_mut((row, 0), (si, n))
                .copy_from(&s.info_rows);
            row += si;
        }
        StackedSelection { c, v, info_rows }
    }
}

/// Stacked measurement data for a selected sensor subset.
pub(crate) struct StackedSelection {
    pub c: DMatrix<f64>,
    pub v: DMatrix<f64>,
    pub info_rows: DMatrix<f64>,
}

/// Validates a problem instance, reporting every violated invariant on
/// rejection.
pub fn build_model(
    a: DMatrix<f64>,
    w: DMatrix<f64>,
    sensors: Vec<SensorBlock>,
) -> Result<SystemModel, ModelRejection> {
    let mut violations = Vec::new();

    let dynamics = match SquareMatrix::new(a) {
        Ok(m) => Some(m),
        Err(e) => {
            violations.push(ModelViolation::BadDynamics(e));
            None
        }
    };
    let n = dynamics.as_ref().map(|d| d.dim());

    let mut rho = None;
    if let Some(d) = &dynamics {
        let r = spectral_radius(d.as_matrix());
        if r >= 1.0 - STABILITY_MARGIN {
            violations.push(ModelViolation::Unstable { spectral_radius: r });
        }
        rho = Some(r);
    }

    let w_dim = w.nrows();
    let state_noise = match SymmetricPsdMatrix::new(w) {
        Ok(m) => {
            if !m.is_positive_definite(PD_TOL) {
                violations.push(ModelViolation::NotPositiveDefiniteW {
                    lambda_min: m.lambda_min(),
                });
            }
            Some(m)
        }
        Err(e) => {
            violations.push(ModelViolation::BadStateNoise(e));
            None
        }
    };
    if let Some(n) = n {
        if w_dim != n {
            violations.push(ModelViolation::StateNoiseDimensionMismatch {
                expected: n,
                found: w_dim,
            });
        }
    }

    if sensors.len() > MAX_SENSORS {
        violations.push(ModelViolation::TooManySensors {
            count: sensors.len(),
        });
    }

    let mut validated_sensors = Vec::with_capacity(sensors.len());
    for (index, block) in sensors.into_iter().enumerate() {
        let SensorBlock { measurement, noise } = block;
        let mut ok = true;
        if !measurement.iter().all(|x| x.is_finite()) {
            violations.push(ModelViolation::NonFiniteSensor { sensor: index });
            ok = false;
        }
        if let Some(n) = n {
            if measurement.ncols() != n {
                violations.push(ModelViolation::SensorDimensionMismatch {
                    sensor: index,
                    expected: n,
                    found: measurement.ncols(),
                });
                ok = false;
            }
        }
        let si = measurement.nrows();
        if noise.nrows() != si || noise.ncols() != si {
            violations.push(ModelViolation::SensorNoiseDimensionMismatch {
                sensor: index,
                expected: si,
                found_rows: noise.nrows(),
                found_cols: noise.ncols(),
            });
            ok = false;
        }
        let noise = match SymmetricPsdMatrix::new(noise) {
            Ok(m) => {
                if !m.is_positive_definite(PD_TOL) {
                    violations.push(ModelViolation::SensorNoiseNotPositiveDefinite {
                        sensor: index,
                        lambda_min: m.lambda_min(),
                    });
                    ok = false;
                }
                Some(m)
            }
            Err(e) => {
                violations.push(ModelViolation::BadSensorNoise {
                    sensor: index,
                    source: e,
                });
                ok = false;
                None
            }
        };
        if ok {
            if let Some(noise) = noise {
                match validate_sensor(index, measurement, noise) {
                    Ok(s) => validated_sensors.push(s),
                    Err(v) => violations.push(v),
                }
            }
        }
    }

    if let (Some(dynamics), Some(state_noise), Some(rho)) = (&dynamics, &state_noise, rho) {
        if violations.is_empty() && rho < 1.0 - STABILITY_MARGIN {
            // Lemma-1 feasibility on the stacked pair; trivially satisfied
            // here since A is stable, but kept as the documented contract.
            let total_rows: usize = validated_sensors.iter().map(Sensor::output_dim).sum();
            let mut stacked_c = DMatrix::zeros(total_rows, dynamics.dim());
            let mut row = 0;
            for s in &validated_sensors {
                stacked_c
                    .view_mut((row, 0), (s.output_dim(), dynamics.dim()))
                    .copy_from(&s.measurement);
                row += s.output_dim();
            }
            match pbh_detectable(dynamics.as_matrix(), &stacked_c) {
                Ok(true) => {}
                Ok(false) => violations.push(ModelViolation::Undetectable),
                Err(e) => violations.push(ModelViolation::BadDynamics(e)),
            }
            let w_sqrt = symmetric_sqrt(state_noise.as_matrix());
            match pbh_stabilizable(dynamics.as_matrix(), &w_sqrt) {
                Ok(true) => {}
                Ok(false) => violations.push(ModelViolation::Unstabilizable),
                Err(e) => violations.push(ModelViolation::BadStateNoise(e)),
            }
        }
    }

    if !violations.is_empty() {
        return Err(ModelRejection { violations });
    }
    let dynamics = dynamics.expect("no violations implies dynamics present");
    let dynamics_t = dynamics.as_matrix().transpose();
    Ok(SystemModel {
        dynamics,
        dynamics_t,
        state_noise: state_noise.expect("no violations implies state noise present"),
        sensors: validated_sensors,
        spectral_radius: rho.expect("no violations implies spectral radius known"),
    })
}

fn validate_sensor(
    index: usize,
    measurement: DMatrix<f64>,
    noise: SymmetricPsdMatrix,
) -> Result<Sensor, ModelViolation> {
    let chol = nalgebra::Cholesky::new(noise.as_matrix().clone()).ok_or(
        ModelViolation::SensorNoiseNotPositiveDefinite {
            sensor: index,
            lambda_min: noise.lambda_min(),
        },
    )?;
    let info_rows = chol.l().solve_lower_triangular(&measurement).ok_or(
        ModelViolation::SensorNoiseNotPositiveDefinite {
            sensor: index,
            lambda_min: noise.lambda_min(),
        },
    )?;
    let mut information = info_rows.transpose() * &info_rows;
    crate::matrix_kernel::symmetrize(&mut information);
    Ok(Sensor {
        index,
        measurement,
        noise,
        information,
        info_rows,
    })
}

/// Errors from constructing a [`Selection`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SelectionError {
    #[error("budget must be at least 1")]
    BudgetZero,
    #[error("budget {budget} exceeds sensor count {sensors}")]
    BudgetExceedsSensors { budget: usize, sensors: usize },
    #[error("{selected} sensors selected, budget is {budget}")]
    BudgetOverrun { selected: usize, budget: usize },
    #[error("sensor index {index} out of range for {sensors} sensors")]
    IndexOutOfRange { index: usize, sensors: usize },
    #[error("sensor index {index} appears more than once")]
    DuplicateIndex { index: usize },
    #[error("sensor bank of {count} exceeds the supported maximum of {MAX_SENSORS}")]
    TooManySensors { count: usize },
}

/// An indicator vector over the sensor bank, with optional pick order and a
/// budget.
///
/// Invariants: at most `budget` sensors selected, every ordered index
/// selected exactly once, no index out of range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Selection {
    bits: u64,
    sensor_count: usize,
    budget: usize,
    order: Vec<usize>,
}

impl Selection {
    pub fn empty(sensor_count: usize, budget: usize) -> Result<Self, SelectionError> {
        Self::validate_frame(sensor_count, budget)?;
        Ok(Self {
            bits: 0,
            sensor_count,
            budget,
            order: Vec::new(),
        })
    }

    /// Unordered selection of `indices`.
    pub fn from_indices(
        indices: &[usize],
        sensor_count: usize,
        budget: usize,
    ) -> Result<Self, SelectionError> {
        Self::validate_frame(sensor_count, budget)?;
        let bits = Self::bits_from(indices, sensor_count)?;
        let selected = bits.count_ones() as usize;
        if selected > budget {
            return Err(SelectionError::BudgetOverrun { selected, budget });
        }
        Ok(Self {
            bits,
            sensor_count,
            budget,
            order: Vec::new(),
        })
    }

    /// Ordered selection: `order` lists sensors in pick order.
    pub fn with_order(
        order: &[usize],
        sensor_count: usize,
        budget: usize,
    ) -> Result<Self, SelectionError> {
        let mut sel = Self::from_indices(order, sensor_count, budget)?;
        sel.order = order.to_vec();
        Ok(sel)
    }

    fn validate_frame(sensor_count: usize, budget: usize) -> Result<(), SelectionError> {
        if sensor_count > MAX_SENSORS {
            return Err(SelectionError::TooManySensors {
                count: sensor_count,
            });
        }
        if budget == 0 {
            return Err(SelectionError::BudgetZero);
        }
        if budget > sensor_count {
            return Err(SelectionError::BudgetExceedsSensors {
                budget,
                sensors: sensor_count,
            });
        }
        Ok(())
    }

    fn bits_from(indices: &[usize], sensor_count: usize) -> Result<u64, SelectionError> {
        let mut bits = 0u64;
        for &i in indices {
            if i >= sensor_count {
                return Err(SelectionError::IndexOutOfRange {
                    index: i,
                    sensors: sensor_count,
                });
            }
            let bit = 1u64 << i;
            if bits & bit != 0 {
                return Err(SelectionError::DuplicateIndex { index: i });
            }
            bits |= bit;
        }
        Ok(bits)
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.sensor_count && self.bits & (1u64 << index) != 0
    }

    /// Selected indices in ascending order.
    pub fn indices(&self) -> Vec<usize> {
        (0..self.sensor_count).filter(|&i| self.contains(i)).collect()
    }

    /// Pick order; empty for unordered selections.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn sensor_count(&self) -> usize {
        self.sensor_count
    }

    pub fn selected_count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn bitmask(&self) -> u64 {
        self.bits
    }
}

/// `R(z)`: sum of `C_i^T V_i^-1 C_i` over the selected sensors. The empty
/// selection yields the zero matrix. Uncorrelated noise makes the sum form
/// exact for the stacked matrices.
pub fn sensor_information_matrix(
    model: &SystemModel,
    selection: &Selection,
) -> Result<SymmetricPsdMatrix, CostError> {
    if selection.sensor_count() != model.sensor_count() {
        return Err(CostError::SelectionMismatch {
            expected: model.sensor_count(),
            found: selection.sensor_count(),
        });
    }
    let sum = model.information_sum(selection.indices().into_iter());
    Ok(SymmetricPsdMatrix::new(sum).expect("sum of PSD information matrices is PSD"))
}

/// Solves the steady-state Riccati equation for `selection` and returns the
/// costed result. One-off convenience over [`CostEvaluator`].
pub fn evaluate_cost(
    model: &SystemModel,
    selection: &Selection,
) -> Result<CostedSelection, CostError> {
    CostEvaluator::new(model).cost(selection)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    pub(crate) fn scalar_model(a: f64, w: f64, sensors: &[(f64, f64)]) -> SystemModel {
        build_model(
            DMatrix::from_element(1, 1, a),
            DMatrix::from_element(1, 1, w),
            sensors
                .iter()
                .map(|&(c, v)| SensorBlock {
                    measurement: DMatrix::from_element(1, 1, c),
                    noise: DMatrix::from_element(1, 1, v),
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn scalar_model_builds() {
        let model = scalar_model(0.5, 1.0, &[(1.0, 1.0)]);
        assert_eq!(model.n(), 1);
        assert_eq!(model.sensor_count(), 1);
        assert!((model.spectral_radius() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn unstable_model_rejected() {
        let err = build_model(
            DMatrix::from_element(1, 1, 1.2),
            DMatrix::from_element(1, 1, 1.0),
            vec![],
        )
        .unwrap_err();
        assert!(err
            .violations
            .iter()
            .any(|v| matches!(v, ModelViolation::Unstable { .. })));
    }

    #[test]
    fn zero_sensor_noise_rejected_on_its_block() {
        let err = build_model(
            DMatrix::from_element(1, 1, 0.5),
            DMatrix::from_element(1, 1, 1.0),
            vec![
                SensorBlock {
                    measurement: DMatrix::from_element(1, 1, 1.0),
                    noise: DMatrix::from_element(1, 1, 1.0),
                },
                SensorBlock {
                    measurement: DMatrix::from_element(1, 1, 2.0),
                    noise: DMatrix::from_element(1, 1, 0.0),
                },
            ],
        )
        .unwrap_err();
        assert_eq!(err.violations.len(), 1);
        assert!(matches!(
            err.violations[0],
            ModelViolation::SensorNoiseNotPositiveDefinite { sensor: 1, .. }
        ));
    }

    #[test]
    fn rejection_lists_every_violation() {
        // Unstable A, semidefinite W, and a mis-sized sensor all at once.
        let err = build_model(
            dmatrix![1.5, 0.0; 0.0, 0.2],
            dmatrix![1.0, 0.0; 0.0, 0.0],
            vec![SensorBlock {
                measurement: DMatrix::from_row_slice(1, 3, &[1.0, 0.0, 0.0]),
                noise: DMatrix::from_element(1, 1, 1.0),
            }],
        )
        .unwrap_err();
        assert!(err
            .violations
            .iter()
            .any(|v| matches!(v, ModelViolation::Unstable { .. })));
        assert!(err
            .violations
            .iter()
            .any(|v| matches!(v, ModelViolation::NotPositiveDefiniteW { .. })));
        assert!(err
            .violations
            .iter()
            .any(|v| matches!(v, ModelViolation::SensorDimensionMismatch { .. })));
    }

    #[test]
    fn selection_invariants_enforced() {
        assert!(matches!(
            Selection::empty(4, 0),
            Err(SelectionError::BudgetZero)
        ));
        assert!(matches!(
            Selection::empty(4, 5),
            Err(SelectionError::BudgetExceedsSensors { .. })
        ));
        assert!(matches!(
            Selection::from_indices(&[0, 1, 2], 4, 2),
            Err(SelectionError::BudgetOverrun { .. })
        ));
        assert!(matches!(
            Selection::from_indices(&[4], 4, 2),
            Err(SelectionError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            Selection::with_order(&[1, 1], 4, 2),
            Err(SelectionError::DuplicateIndex { .. })
        ));
        let sel = Selection::with_order(&[2, 0], 4, 3).unwrap();
        assert_eq!(sel.indices(), vec![0, 2]);
        assert_eq!(sel.order(), &[2, 0]);
        assert_eq!(sel.selected_count(), 2);
    }

    #[test]
    fn empty_information_matrix_is_zero() {
        let model = scalar_model(0.5, 1.0, &[(1.0, 1.0), (2.0, 1.0)]);
        let sel = Selection::empty(2, 1).unwrap();
        let r = sensor_information_matrix(&model, &sel).unwrap();
        assert_eq!(r.as_matrix()[(0, 0)], 0.0);
    }

    #[test]
    fn single_sensor_information_matrix() {
        // C = [1, 0], v = 2 on a 2-state system: R = [[0.5, 0], [0, 0]].
        let model = build_model(
            dmatrix![0.5, 0.0; 0.0, 0.4],
            dmatrix![1.0, 0.0; 0.0, 1.0],
            vec![SensorBlock {
                measurement: DMatrix::from_row_slice(1, 2, &[1.0, 0.0]),
                noise: DMatrix::from_element(1, 1, 2.0),
            }],
        )
        .unwrap();
        let sel = Selection::from_indices(&[0], 1, 1).unwrap();
        let r = sensor_information_matrix(&model, &sel).unwrap();
        assert!((r.as_matrix()[(0, 0)] - 0.5).abs() < 1e-15);
        assert!(r.as_matrix()[(0, 1)].abs() < 1e-15);
        assert!(r.as_matrix()[(1, 1)].abs() < 1e-15);
    }

    #[test]
    fn information_matrix_matches_stacked_oracle() {
        // Two selected sensors: the R_i sum must match the explicit stacked
        // computation C_z^T V_z^-1 C_z with block-diagonal V_z.
        let model = build_model(
            dmatrix![0.5, 0.1; 0.0, 0.4],
            dmatrix![1.0, 0.2; 0.2, 1.5],
            vec![
                SensorBlock {
                    measurement: DMatrix::from_row_slice(1, 2, &[1.0, -0.5]),
                    noise: DMatrix::from_element(1, 1, 0.7),
                },
                SensorBlock {
                    measurement: DMatrix::from_row_slice(1, 2, &[0.3, 2.0]),
                    noise: DMatrix::from_element(1, 1, 1.3),
                },
            ],
        )
        .unwrap();
        let sel = Selection::from_indices(&[0, 1], 2, 2).unwrap();
        let r = sensor_information_matrix(&model, &sel).unwrap();

        let stacked = model.stacked(&[0, 1]);
        let v_inv = stacked.v.clone().try_inverse().unwrap();
        let oracle = stacked.c.transpose() * v_inv * &stacked.c;
        assert!(crate::matrix_kernel::max_abs_diff(r.as_matrix(), &oracle) < 1e-12);
    }

    #[test]
    fn information_additive_over_disjoint_selections() {
        let model = scalar_model(0.5, 1.0, &[(1.0, 1.0), (2.0, 0.5), (0.3, 2.0)]);
        let r01 = sensor_information_matrix(
            &model,
            &Selection::from_indices(&[0, 1], 3, 3).unwrap(),
        )
        .unwrap();
        let r0 =
            sensor_information_matrix(&model, &Selection::from_indices(&[0], 3, 3).unwrap())
                .unwrap();
        let r1 =
            sensor_information_matrix(&model, &Selection::from_indices(&[1], 3, 3).unwrap())
                .unwrap();
        let sum = r0.as_matrix() + r1.as_matrix();
        assert_eq!(r01.as_matrix(), &sum);
    }
}
