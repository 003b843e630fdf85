//! Covariance-based greedy sensor selection.
//!
//! Each of the `q` rounds evaluates the trace cost of adding every remaining
//! candidate to the current set and keeps the minimizer, ties broken by
//! lowest sensor index. The full trace — per-step costs, per-step deltas,
//! and every candidate cost considered — is recorded for the bound engine
//! and for audits.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::system_model::{CostError, CostEvaluator, Selection, SystemModel};

/// Errors from greedy selection.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GreedyError {
    #[error("budget {budget} exceeds sensor count {sensors}")]
    BudgetExceedsSensors { budget: usize, sensors: usize },
    #[error("budget must be at least 1")]
    BudgetZero,
    #[error(transparent)]
    Cost(#[from] CostError),
}

/// Cost of one candidate considered at one greedy step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CandidateCost {
    pub sensor: usize,
    pub cost: f64,
}

/// Complete record of one greedy run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyTrace {
    /// Sensors in pick order.
    pub picks: Vec<usize>,
    /// `J(z_k)` for `k = 0..=q`; entry 0 is the no-sensor cost.
    pub step_costs: Vec<f64>,
    /// `step_costs[k+1] - step_costs[k]` for each step, computed exactly
    /// from the recorded step costs.
    pub deltas: Vec<f64>,
    /// For each step, the evaluated cost of every remaining candidate.
    pub candidate_costs: Vec<Vec<CandidateCost>>,
    /// Budget the run was asked for.
    pub budget: usize,
    /// Sensor count of the model the run was made against.
    pub sensor_count: usize,
}

impl GreedyTrace {
    /// The selected set as a [`Selection`] carrying the pick order.
    pub fn selection(&self) -> Selection {
        Selection::with_order(&self.picks, self.sensor_count, self.budget)
            .expect("greedy picks form a valid selection")
    }

    /// Final cost `J(z_greedy) = step_costs[q]`.
    pub fn final_cost(&self) -> f64 {
        *self
            .step_costs
            .last()
            .expect("trace holds at least the no-sensor cost")
    }
}

/// Runs greedy selection with a fresh evaluator session.
pub fn greedy_select(model: &SystemModel, budget: usize) -> Result<GreedyTrace, GreedyError> {
    greedy_select_with(&mut CostEvaluator::new(model), budget)
}

/// Runs greedy selection against a shared evaluator session, so the solves
/// it makes are reusable by other consumers (the brute-force oracle in
/// particular).
pub fn greedy_select_with(
    evaluator: &mut CostEvaluator<'_>,
    budget: usize,
) -> Result<GreedyTrace, GreedyError> {
    let model = evaluator.model();
    let sensors = model.sensor_count();
    if budget == 0 {
        return Err(GreedyError::BudgetZero);
    }
    if budget > sensors {
        return Err(GreedyError::BudgetExceedsSensors {
            budget,
            sensors,
        });
    }

    let mut picks: Vec<usize> = Vec::with_capacity(budget);
    let mut step_costs = Vec::with_capacity(budget + 1);
    let mut candidate_costs = Vec::with_capacity(budget);

    let empty = Selection::empty(sensors, budget)?;
    step_costs.push(evaluator.cost_value(&empty)?);

    for _ in 0..budget {
        let mut round = Vec::with_capacity(sensors - picks.len());
        let mut best: Option<CandidateCost> = None;
        for candidate in 0..sensors {
            if picks.contains(&candidate) {
                continue;
            }
            let mut trial = picks.clone();
            trial.push(candidate);
            let sel = Selection::from_indices(&trial, sensors, budget)?;
            let cost = evaluator.cost_value(&sel)?;
            round.push(CandidateCost {
                sensor: candidate,
                cost,
            });
            // Strict < with ascending candidate order breaks ties toward the
            // lowest index.
            if best.map_or(true, |b| cost < b.cost) {
                best = Some(CandidateCost {
                    sensor: candidate,
                    cost,
                });
            }
        }
        let best = best.expect("budget <= sensors leaves at least one candidate");
        picks.push(best.sensor);
        step_costs.push(best.cost);
        candidate_costs.push(round);
    }

    let deltas = step_costs.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(GreedyTrace {
        picks,
        step_costs,
        deltas,
        candidate_costs,
        budget,
        sensor_count: sensors,
    })
}

/// Final greedy cost; identically `step_costs[0]` plus the telescoping sum
/// of deltas.
pub fn greedy_cost(trace: &GreedyTrace) -> f64 {
    trace.final_cost()
}

// Selection construction inside the loop can only fail on caller-level
// contract violations already rejected above; map for the `?` operator.
impl From<crate::system_model::SelectionError> for GreedyError {
    fn from(e: crate::system_model::SelectionError) -> Self {
        match e {
            crate::system_model::SelectionError::BudgetZero => GreedyError::BudgetZero,
            crate::system_model::SelectionError::BudgetExceedsSensors { budget, sensors } => {
                GreedyError::BudgetExceedsSensors { budget, sensors }
            }
            other => panic!("internal selection construction failed: {other}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system_model::{build_model, SensorBlock};
    use nalgebra::DMatrix;

    fn scalar_model(a: f64, w: f64, sensors: &[(f64, f64)]) -> SystemModel {
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

    fn scalar_dare_oracle(a: f64, w: f64, c: f64, v: f64) -> f64 {
        let qa = c * c;
        let qb = v - w * c * c - a * a * v;
        let qc = -w * v;
        (-qb + (qb * qb - 4.0 * qa * qc).sqrt()) / (2.0 * qa)
    }

    #[test]
    fn single_candidate_is_picked() {
        let model = scalar_model(0.5, 1.0, &[(1.0, 1.0)]);
        let trace = greedy_select(&model, 1).unwrap();
        assert_eq!(trace.picks, vec![0]);
        assert_eq!(trace.step_costs.len(), 2);
        assert_eq!(trace.candidate_costs[0].len(), 1);
    }

    #[test]
    fn identical_sensors_tie_break_to_lowest_index() {
        let model = scalar_model(0.5, 1.0, &[(1.0, 1.0), (1.0, 1.0)]);
        let trace = greedy_select(&model, 1).unwrap();
        assert_eq!(trace.picks, vec![0]);
    }

    #[test]
    fn scalar_budget_one_matches_oracle() {
        let model = scalar_model(0.5, 1.0, &[(1.0, 1.0)]);
        let trace = greedy_select(&model, 1).unwrap();
        let expected = scalar_dare_oracle(0.5, 1.0, 1.0, 1.0);
        assert!((greedy_cost(&trace) - expected).abs() < 1e-10);
        assert!((greedy_cost(&trace) - 1.1327822).abs() < 1e-7);
    }

    #[test]
    fn telescoping_identity_holds() {
        let model = scalar_model(0.7, 2.0, &[(1.0, 1.0), (0.5, 0.2), (2.0, 3.0)]);
        let trace = greedy_select(&model, 3).unwrap();
        let telescoped: f64 = trace.step_costs[0] + trace.deltas.iter().sum::<f64>();
        assert!((telescoped - greedy_cost(&trace)).abs() < 1e-12);
        for (k, d) in trace.deltas.iter().enumerate() {
            assert_eq!(*d, trace.step_costs[k + 1] - trace.step_costs[k]);
        }
    }

    #[test]
    fn costs_non_increasing_and_deltas_non_positive() {
        let model = scalar_model(0.9, 1.5, &[(1.0, 1.0), (0.2, 0.5), (3.0, 2.0), (0.7, 0.9)]);
        let trace = greedy_select(&model, 4).unwrap();
        for w in trace.step_costs.windows(2) {
            assert!(w[1] <= w[0] + 1e-9);
        }
        for d in &trace.deltas {
            assert!(*d <= 1e-9);
        }
    }

    #[test]
    fn step_cost_is_min_of_candidates() {
        let model = scalar_model(0.6, 1.0, &[(1.0, 1.0), (0.5, 0.2), (2.0, 3.0), (0.7, 0.9)]);
        let trace = greedy_select(&model, 3).unwrap();
        for (k, round) in trace.candidate_costs.iter().enumerate() {
            let min = round.iter().map(|c| c.cost).fold(f64::INFINITY, f64::min);
            assert_eq!(trace.step_costs[k + 1], min);
        }
    }

    #[test]
    fn full_budget_selects_everything() {
        let model = scalar_model(0.5, 1.0, &[(1.0, 1.0), (2.0, 1.0), (0.1, 0.3)]);
        let trace = greedy_select(&model, 3).unwrap();
        let mut picked = trace.picks.clone();
        picked.sort_unstable();
        assert_eq!(picked, vec![0, 1, 2]);
        let full = Selection::from_indices(&[0, 1, 2], 3, 3).unwrap();
        let direct = crate::system_model::evaluate_cost(&model, &full).unwrap();
        assert!((greedy_cost(&trace) - direct.cost).abs() <= 1e-10);
    }

    #[test]
    fn budget_validation() {
        let model = scalar_model(0.5, 1.0, &[(1.0, 1.0)]);
        assert!(matches!(
            greedy_select(&model, 2),
            Err(GreedyError::BudgetExceedsSensors { .. })
        ));
        assert!(matches!(greedy_select(&model, 0), Err(GreedyError::BudgetZero)));
    }
}
