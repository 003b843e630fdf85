//! Closed-form performance bounds for greedy sensor selection.
//!
//! Three bounds are computed against the realized ratio
//! `r = J(z_greedy) / J(z_opt)`:
//!
//! - the baseline ratio bound `r_old`: the closed-form upper bound on the
//!   no-sensor cost divided by the closed-form lower bound on the optimal
//!   cost. It holds for *any* selection algorithm on a stable system;
//! - the improved ratio bound `r_new`: `r_old` minus a nonnegative
//!   improvement term that credits greedy for the guaranteed cost reduction
//!   of each of its `q - 1` follow-up picks;
//! - the spectral-norm ratio bound `r_spectral`: a looser, simpler form of
//!   the improvement written entirely in spectral norms.
//!
//! All three are assembled verbatim from their final closed-form
//! expressions, never from intermediate derivation steps. The improvement
//! term of `r_new` is nonnegative by construction, so `r_new <= r_old`
//! always; whether the *realized* greedy ratio respects `r_new` is treated
//! as an auditable hypothesis and counted by the experiment harness rather
//! than asserted.
//!
//! [`optimality_certificate`] checks a sufficient condition under which
//! greedy provably returns the optimum: single-row sensors measuring one
//! common direction, which makes the sensor information matrices totally
//! ordered under the PSD relation.

mod certificate;

pub use certificate::{optimality_certificate, CertificateFailure, OptimalityCertificate};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix_kernel::{
    solve_discrete_lyapunov, spectral_summary, stabilizing_transform, SymmetricPsdMatrix,
};
use crate::system_model::{CostError, CostEvaluator, Selection, SystemModel};
use crate::tolerances::{ENUMERATION_CAP, SINGULAR_MATRIX_TOL, SINGULAR_UPDATE_TOL};

/// Errors from bound evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("budget {budget} invalid for {sensors} sensors")]
    InvalidBudget { budget: usize, sensors: usize },
    #[error(transparent)]
    Cost(#[from] CostError),
}

/// How the first-pick cost cap `trace(M)` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MTraceMode {
    /// `M` is the no-sensor covariance: cheap, always an upper bound.
    Lyapunov,
    /// `M` is the covariance of the worst single-sensor selection: tighter,
    /// costs one solve per sensor.
    EnumerateFirstPick,
}

/// Exact no-sensor cost and its closed-form cap.
#[derive(Debug, Clone, PartialEq)]
pub struct NoSensorBound {
    /// `trace(Sigma(0))` from the exact Lyapunov solve.
    pub trace_sigma0: f64,
    /// Closed-form cap: `(sigma_max(P)/sigma_min(P))^2 * trace(W) / (1 - sigma_max(D)^2)`
    /// with `D = P A P^-1` contractive.
    pub trace_upper: f64,
    /// The no-sensor covariance itself.
    pub sigma0: SymmetricPsdMatrix,
}

/// Largest information-matrix eigenvalue over budget-feasible subsets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetSpectralMax {
    pub value: f64,
    /// True when found by exhaustive enumeration of q-subsets; false when
    /// the all-sensors surrogate bound was used because enumeration would
    /// exceed the cap.
    pub exact: bool,
}

/// Everything the bound chain produces for one (model, budget) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub budget: usize,
    /// Exact no-sensor cost.
    pub trace_sigma0: f64,
    /// Closed-form cap on the no-sensor cost.
    pub trace_sigma0_upper: f64,
    /// Closed-form lower bound on the optimal cost.
    pub optimal_cost_lower: f64,
    /// Prefactor relating the cap to `trace(W)`:
    /// `alpha_a = trace_sigma0_upper / trace(W)`.
    pub alpha_a: f64,
    /// Baseline any-algorithm ratio bound:
    /// `trace_sigma0_upper / optimal_cost_lower`.
    pub r_old: f64,
    pub m_mode: MTraceMode,
    /// First-pick cost cap `trace(M)` under `m_mode`.
    pub m_trace: f64,
    /// Smallest single-sensor information trace (zero-information sensors
    /// excluded while any informative sensor exists).
    pub b: f64,
    /// Largest information eigenvalue over budget-feasible subsets.
    pub lambda1_max: f64,
    pub lambda1_max_exact: bool,
    /// Guaranteed per-step cost reduction numerator:
    /// `(lambda_min(A) * lambda_min((W^-1 + R_all)^-1))^2 * b`, with
    /// `lambda_min(A)` read as the smallest eigenvalue magnitude.
    pub u: f64,
    /// Literal trace bound on the correction denominator,
    /// `trace(A^-1 (M - W) A^-T A R_all)`; absent when `A` is singular.
    pub c: Option<f64>,
    /// Cap on the greedy cost: `trace(M) - (q-1) u / (1+c)`; absent when `c`
    /// is absent or `1 + c` is not positive.
    pub greedy_upper: Option<f64>,
    /// Improved ratio bound, assembled verbatim from its final closed form;
    /// absent when `A` is singular.
    pub r_new: Option<f64>,
    /// Cross-check: `greedy_upper / optimal_cost_lower`.
    pub r_new_from_greedy_upper: Option<f64>,
    /// True when the two `r_new` assemblies disagree by more than 1e-6.
    pub r_new_disagreement: bool,
    /// Spectral-norm ratio bound; equals `r_old` when degenerate.
    pub r_spectral: f64,
    /// True when `sigma_min(A) = 0` collapsed the spectral-norm improvement.
    pub r_spectral_degenerate: bool,
    /// True when `A` was too close to singular for the improved bound.
    pub singular_dynamics: bool,
}

/// Exact no-sensor cost plus its closed-form cap.
pub fn no_sensor_upper_bound(model: &SystemModel) -> Result<NoSensorBound, BoundError> {
    let (sigma0, _) = solve_discrete_lyapunov(model.dynamics(), model.state_noise())
        .map_err(CostError::Solver)?;
    let p = stabilizing_transform(model.dynamics()).map_err(CostError::Solver)?;
    let p_inv = p
        .as_matrix()
        .clone()
        .try_inverse()
        .expect("stabilizing transform is nonsingular");
    let d = crate::matrix_kernel::SquareMatrix::new(p.as_matrix() * model.dynamics().as_matrix() * p_inv)
        .map_err(CostError::Solver)?;
    let p_summary = spectral_summary(&p);
    let d_summary = spectral_summary(&d);
    let ratio = (p_summary.sigma_max / p_summary.sigma_min).powi(2);
    let trace_w = model.state_noise().trace();
    let trace_upper = ratio * trace_w / (1.0 - d_summary.sigma_max.powi(2));
    Ok(NoSensorBound {
        trace_sigma0: sigma0.trace(),
        trace_upper,
        sigma0,
    })
}

/// Largest `lambda_max(R(z))` over subsets `z` within the budget.
///
/// Under uncorrelated noise the information matrix grows with the selection,
/// so the maximum over subsets of size at most `q` is attained at size
/// exactly `q`; those are enumerated exhaustively when their count fits the
/// enumeration cap. Otherwise `lambda_max(R_all)` is returned, which
/// dominates every subset and keeps the bound sound, flagged inexact.
pub fn lambda1_max(model: &SystemModel, budget: usize) -> Result<BudgetSpectralMax, BoundError> {
    let sensors = model.sensor_count();
    if budget == 0 || budget > sensors {
        return Err(BoundError::InvalidBudget {
            budget,
            sensors,
        });
    }
    let subsets = binomial(sensors as u64, budget as u64);
    if subsets <= ENUMERATION_CAP as u128 {
        let n = model.n();
        let mut best = 0.0_f64;
        let mut partial = DMatrix::zeros(n, n);
        max_lambda_rec(model, 0, budget, &mut partial, &mut best);
        Ok(BudgetSpectralMax {
            value: best,
            exact: true,
        })
    } else {
        let r_all = model.information_sum(0..sensors);
        Ok(BudgetSpectralMax {
            value: lambda_max_sym(&r_all),
            exact: false,
        })
    }
}

fn max_lambda_rec(
    model: &SystemModel,
    start: usize,
    remaining: usize,
    partial: &mut DMatrix<f64>,
    best: &mut f64,
) {
    if remaining == 0 {
        *best = best.max(lambda_max_sym(partial));
        return;
    }
    let sensors = model.sensor_count();
    // Leave room for the remaining picks.
    for i in start..=(sensors - remaining) {
        *partial += model.sensor(i).information_matrix();
        max_lambda_rec(model, i + 1, remaining - 1, partial, best);
        *partial -= model.sensor(i).information_matrix();
    }
}

fn lambda_max_sym(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .symmetric_eigenvalues()
        .iter()
        .fold(f64::NEG_INFINITY, |a, &b| a.max(b))
}

pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 0..k {
        result = result * (n - i) as u128 / (i + 1) as u128;
    }
    result
}

/// Closed-form lower bound on the optimal cost:
/// `n sigma_min(A)^2 / (lambda_max(W^-1) + lambda1_max) + trace(W)`.
pub fn optimal_cost_lower_bound(model: &SystemModel, budget: usize) -> Result<f64, BoundError> {
    let l1 = lambda1_max(model, budget)?;
    Ok(optimal_cost_lower_from(model, l1.value))
}

fn optimal_cost_lower_from(model: &SystemModel, lambda1_max: f64) -> f64 {
    let a_summary = spectral_summary(model.dynamics());
    let n = model.n() as f64;
    let lambda_max_w_inv = 1.0 / model.state_noise().lambda_min();
    n * a_summary.sigma_min.powi(2) / (lambda_max_w_inv + lambda1_max)
        + model.state_noise().trace()
}

/// Baseline any-algorithm ratio bound `r_old`: the no-sensor cost cap
/// divided by the optimal-cost lower bound.
pub fn baseline_ratio_bound(model: &SystemModel, budget: usize) -> Result<f64, BoundError> {
    let upper = no_sensor_upper_bound(model)?;
    let lower = optimal_cost_lower_bound(model, budget)?;
    Ok(upper.trace_upper / lower)
}

/// Full bound chain for one (model, budget) pair.
///
/// The baseline bound and the spectral-norm bound are always produced; the
/// improved bound needs `A^-1` and is reported absent (with `r_old` as the
/// fallback) when `A` is numerically singular.
pub fn improved_ratio_bound(
    model: &SystemModel,
    budget: usize,
    m_mode: MTraceMode,
) -> Result<BoundReport, BoundError> {
    let sensors = model.sensor_count();
    if budget == 0 || budget > sensors {
        return Err(BoundError::InvalidBudget {
            budget,
            sensors,
        });
    }

    let no_sensor = no_sensor_upper_bound(model)?;
    let l1 = lambda1_max(model, budget)?;
    let optimal_cost_lower = optimal_cost_lower_from(model, l1.value);
    let trace_w = model.state_noise().trace();
    let alpha_a = no_sensor.trace_upper / trace_w;
    let r_old = no_sensor.trace_upper / optimal_cost_lower;

    let a_summary = spectral_summary(model.dynamics());
    let singular_dynamics =
        a_summary.sigma_min <= SINGULAR_MATRIX_TOL * a_summary.sigma_max.max(1.0);

    // b: smallest informative single-sensor information trace.
    let traces: Vec<f64> = (0..sensors)
        .map(|i| model.sensor(i).information_matrix().trace())
        .collect();
    let b = traces
        .iter()
        .copied()
        .filter(|&t| t > 0.0)
        .fold(f64::INFINITY, f64::min);
    let b = if b.is_finite() { b } else { 0.0 };

    let r_all = model.information_sum(0..sensors);
    let w_inv = nalgebra::Cholesky::new(model.state_noise().as_matrix().clone())
        .expect("validated state noise is positive definite")
        .inverse();
    let lambda_max_w_inv_plus_r = lambda_max_sym(&(&w_inv + &r_all));
    // (W^-1 + R_all)^-1 is symmetric PD: its smallest eigenvalue and
    // smallest singular value coincide at 1/lambda_max(W^-1 + R_all).
    let sigma_min_inner = 1.0 / lambda_max_w_inv_plus_r;
    let lambda_min_mag_a = min_eigen_magnitude(model.dynamics().as_matrix());
    let u = (lambda_min_mag_a * sigma_min_inner).powi(2) * b;

    // trace(M): no-sensor cost, or the worst single-sensor cost.
    let mut evaluator = CostEvaluator::new(model);
    let (m_trace, m_matrix) = match m_mode {
        MTraceMode::Lyapunov => (no_sensor.trace_sigma0, no_sensor.sigma0.as_matrix().clone()),
        MTraceMode::EnumerateFirstPick => {
            let mut worst: Option<(usize, f64)> = None;
            for i in 0..sensors {
                let sel = Selection::from_indices(&[i], sensors, budget)
                    .expect("single index within range");
                let cost = evaluator.cost_value(&sel).map_err(BoundError::Cost)?;
                if worst.map_or(true, |(_, w)| cost > w) {
                    worst = Some((i, cost));
                }
            }
            match worst {
                Some((i, cost)) => {
                    let sel = Selection::from_indices(&[i], sensors, budget)
                        .expect("single index within range");
                    let costed = evaluator.cost(&sel).map_err(BoundError::Cost)?;
                    (cost, costed.sigma.as_matrix().clone())
                }
                None => (no_sensor.trace_sigma0, no_sensor.sigma0.as_matrix().clone()),
            }
        }
    };

    // c, evaluated literally: trace(A^-1 (M - W) A^-T A R_all).
    let c = if singular_dynamics {
        None
    } else {
        let a_inv = model
            .dynamics()
            .as_matrix()
            .clone()
            .try_inverse()
            .expect("sigma_min(A) cleared the singularity threshold");
        let m_minus_w = &m_matrix - model.state_noise().as_matrix();
        let product =
            &a_inv * m_minus_w * a_inv.transpose() * model.dynamics().as_matrix() * &r_all;
        Some(product.trace())
    };

    let q_minus_1 = (budget - 1) as f64;
    let greedy_upper = c.and_then(|c| {
        let denom = 1.0 + c;
        if denom > SINGULAR_UPDATE_TOL {
            Some(m_trace - q_minus_1 * u / denom)
        } else {
            None
        }
    });

    // Improved bound, verbatim from its final closed form.
    let lambda_max_w_inv = 1.0 / model.state_noise().lambda_min();
    let r_new = if singular_dynamics {
        None
    } else {
        let trace_sigma0_r = (no_sensor.sigma0.as_matrix() * &r_all).trace();
        let numerator = a_summary.sigma_min.powi(2)
            * sigma_min_inner.powi(2)
            * (lambda_max_w_inv + l1.value)
            * b;
        let denominator = (1.0 + trace_sigma0_r)
            * (model.n() as f64 * a_summary.sigma_min.powi(2)
                + trace_w * (lambda_max_w_inv + l1.value));
        Some(r_old - q_minus_1 * numerator / denominator)
    };

    let r_new_from_greedy_upper = greedy_upper.map(|g| g / optimal_cost_lower);
    let r_new_disagreement = match (r_new, r_new_from_greedy_upper) {
        (Some(a), Some(b)) => (a - b).abs() > 1e-6,
        _ => false,
    };

    let (r_spectral, r_spectral_degenerate) = spectral_ratio_from(
        model,
        budget,
        r_old,
        b,
        l1.value,
        &r_all,
        no_sensor.trace_sigma0,
        &a_summary,
    );

    Ok(BoundReport {
        budget,
        trace_sigma0: no_sensor.trace_sigma0,
        trace_sigma0_upper: no_sensor.trace_upper,
        optimal_cost_lower,
        alpha_a,
        r_old,
        m_mode,
        m_trace,
        b,
        lambda1_max: l1.value,
        lambda1_max_exact: l1.exact,
        u,
        c,
        greedy_upper,
        r_new,
        r_new_from_greedy_upper,
        r_new_disagreement,
        r_spectral,
        r_spectral_degenerate,
        singular_dynamics,
    })
}

/// Spectral-norm ratio bound; `(r_old, true)` when `sigma_min(A)` is zero
/// and the improvement collapses.
pub fn spectral_ratio_bound(
    model: &SystemModel,
    budget: usize,
) -> Result<(f64, bool), BoundError> {
    let sensors = model.sensor_count();
    if budget == 0 || budget > sensors {
        return Err(BoundError::InvalidBudget {
            budget,
            sensors,
        });
    }
    let no_sensor = no_sensor_upper_bound(model)?;
    let l1 = lambda1_max(model, budget)?;
    let optimal_cost_lower = optimal_cost_lower_from(model, l1.value);
    let r_old = no_sensor.trace_upper / optimal_cost_lower;
    let traces: Vec<f64> = (0..sensors)
        .map(|i| model.sensor(i).information_matrix().trace())
        .collect();
    let b = traces
        .iter()
        .copied()
        .filter(|&t| t > 0.0)
        .fold(f64::INFINITY, f64::min);
    let b = if b.is_finite() { b } else { 0.0 };
    let r_all = model.information_sum(0..sensors);
    let a_summary = spectral_summary(model.dynamics());
    Ok(spectral_ratio_from(
        model,
        budget,
        r_old,
        b,
        l1.value,
        &r_all,
        no_sensor.trace_sigma0,
        &a_summary,
    ))
}

#[allow(clippy::too_many_arguments)]
fn spectral_ratio_from(
    model: &SystemModel,
    budget: usize,
    r_old: f64,
    b: f64,
    lambda1_max: f64,
    r_all: &DMatrix<f64>,
    trace_sigma0: f64,
    a_summary: &crate::matrix_kernel::SpectralSummary,
) -> (f64, bool) {
    let sigma_min_a = a_summary.sigma_min;
    if sigma_min_a <= SINGULAR_MATRIX_TOL * a_summary.sigma_max.max(1.0) {
        return (r_old, true);
    }
    let norm_r_all = lambda_max_sym(r_all); // PSD: spectral norm = lambda_max
    let norm_w_inv = 1.0 / model.state_noise().lambda_min();
    let improvement = (budget - 1) as f64
        * spectral_improvement_term(
            norm_r_all,
            norm_w_inv,
            trace_sigma0,
            b,
            lambda1_max,
            model.n() as f64,
            model.state_noise().trace(),
            sigma_min_a,
        );
    (r_old - improvement, false)
}

/// The per-step improvement factor of the spectral-norm bound, as a closed
/// form of its scalar inputs.
#[allow(clippy::too_many_arguments)]
pub(crate) fn spectral_improvement_term(
    norm_r_all: f64,
    norm_w_inv: f64,
    trace_sigma0: f64,
    b: f64,
    lambda1_max: f64,
    n: f64,
    trace_w: f64,
    sigma_min_a: f64,
) -> f64 {
    (1.0 / (1.0 + norm_r_all * trace_sigma0))
        * (1.0 / (norm_w_inv + norm_r_all).powi(2))
        * (b / (n / (norm_w_inv + lambda1_max) + trace_w / (sigma_min_a * sigma_min_a)))
}

fn min_eigen_magnitude(a: &DMatrix<f64>) -> f64 {
    if a.nrows() == 0 {
        return 0.0;
    }
    a.complex_eigenvalues()
        .iter()
        .fold(f64::INFINITY, |acc, e| acc.min(e.norm()))
}
