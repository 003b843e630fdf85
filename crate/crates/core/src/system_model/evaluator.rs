//! Cost evaluation with a per-session solve cache.
//!
//! Greedy selection and brute-force enumeration revisit many of the same
//! subsets; a `CostEvaluator` caches each solved covariance keyed by the
//! selection bitmask. The cache is session-local, so evaluators are cheap to
//! create per task and need no synchronization.

use std::collections::HashMap;

use thiserror::Error;

use super::{Selection, SystemModel};
use crate::matrix_kernel::{
    dare_iterate, DareOperands, DareWorkspace, KernelError, SolveDiagnostics, SolverOptions,
    SymmetricPsdMatrix,
};
use crate::tolerances::LYAPUNOV_RESIDUAL_TOL;

/// Errors from cost evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CostError {
    #[error("selection sized for {found} sensors, model has {expected}")]
    SelectionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Solver(#[from] KernelError),
}

/// A selection together with its steady-state covariance, trace cost, and
/// solver diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct CostedSelection {
    pub selection: Selection,
    pub sigma: SymmetricPsdMatrix,
    /// `J(z) = trace(sigma)`.
    pub cost: f64,
    pub diagnostics: SolveDiagnostics,
}

struct CachedSolve {
    sigma: SymmetricPsdMatrix,
    cost: f64,
    diagnostics: SolveDiagnostics,
}

/// Session-scoped cost evaluator over one model.
pub struct CostEvaluator<'m> {
    model: &'m SystemModel,
    options: SolverOptions,
    cache: HashMap<u64, CachedSolve>,
    workspaces: HashMap<usize, DareWorkspace>,
}

impl<'m> CostEvaluator<'m> {
    pub fn new(model: &'m SystemModel) -> Self {
        Self::with_options(model, SolverOptions::default())
    }

    pub fn with_options(model: &'m SystemModel, options: SolverOptions) -> Self {
        Self {
            model,
            options,
            cache: HashMap::new(),
            workspaces: HashMap::new(),
        }
    }

    pub fn model(&self) -> &'m SystemModel {
        self.model
    }

    /// Number of distinct subsets solved so far.
    pub fn solves(&self) -> usize {
        self.cache.len()
    }

    /// Full costed result for `selection` (covariance cloned out of the
    /// cache).
    pub fn cost(&mut self, selection: &Selection) -> Result<CostedSelection, CostError> {
        self.check(selection)?;
        let entry = self.solve(selection.bitmask())?;
        Ok(CostedSelection {
            selection: selection.clone(),
            sigma: entry.sigma.clone(),
            cost: entry.cost,
            diagnostics: entry.diagnostics,
        })
    }

    /// Trace cost only; avoids cloning the covariance.
    pub fn cost_value(&mut self, selection: &Selection) -> Result<f64, CostError> {
        self.check(selection)?;
        Ok(self.solve(selection.bitmask())?.cost)
    }

    /// Trace cost for a raw bitmask over the model's sensors.
    pub(crate) fn cost_of_bits(&mut self, bits: u64) -> Result<f64, CostError> {
        debug_assert_eq!(bits >> self.model.sensor_count().min(63), 0);
        Ok(self.solve(bits)?.cost)
    }

    fn check(&self, selection: &Selection) -> Result<(), CostError> {
        if selection.sensor_count() != self.model.sensor_count() {
            return Err(CostError::SelectionMismatch {
                expected: self.model.sensor_count(),
                found: selection.sensor_count(),
            });
        }
        Ok(())
    }

    fn solve(&mut self, bits: u64) -> Result<&CachedSolve, CostError> {
        // Entry API would borrow the cache across the solve; a plain
        // contains/insert keeps the borrow checker satisfied.
        if !self.cache.contains_key(&bits) {
            let solved = self.solve_uncached(bits)?;
            self.cache.insert(bits, solved);
        }
        Ok(&self.cache[&bits])
    }

    fn solve_uncached(&mut self, bits: u64) -> Result<CachedSolve, CostError> {
        let model = self.model;
        if bits == 0 {
            let opts = SolverOptions {
                residual_tol: LYAPUNOV_RESIDUAL_TOL,
                ..self.options
            };
            let (sigma, diagnostics) = crate::matrix_kernel::solve_discrete_lyapunov_with(
                model.dynamics(),
                model.state_noise(),
                &opts,
            )?;
            let cost = sigma.trace();
            return Ok(CachedSolve {
                sigma,
                cost,
                diagnostics,
            });
        }

        let indices: Vec<usize> =
            (0..model.sensor_count()).filter(|&i| bits & (1 << i) != 0).collect();
        let stacked = model.stacked(&indices);
        let mut r = model.information_sum(indices.iter().copied());
        crate::matrix_kernel::symmetrize(&mut r);
        let c_t = stacked.c.transpose();
        let m = stacked.c.nrows();
        let n = model.n();
        let ws = self
            .workspaces
            .entry(m)
            .or_insert_with(|| DareWorkspace::new(n, m));
        let operands = DareOperands {
            a: model.dynamics().as_matrix(),
            a_t: model.dynamics_t(),
            w: model.state_noise().as_matrix(),
            c: &stacked.c,
            c_t: &c_t,
            v: &stacked.v,
            r: &r,
            info_rows: &stacked.info_rows,
        };
        let (sigma_raw, diagnostics) = dare_iterate(&operands, &self.options, ws)?;
        let sigma = SymmetricPsdMatrix::new(sigma_raw).map_err(CostError::Solver)?;
        let cost = sigma.trace();
        Ok(CachedSolve {
            sigma,
            cost,
            diagnostics,
        })
    }
}
