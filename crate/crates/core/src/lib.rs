//! Sensor selection for stable discrete-time linear systems under a-priori
//! steady-state Kalman filtering.
//!
//! The crate selects `q` of `|Q|` candidate sensors to minimize the trace of
//! the steady-state prediction error covariance. It provides:
//!
//! - a dense small-matrix kernel: Lyapunov/Riccati fixed-point solvers,
//!   spectral summaries, rank-one inverse updates, the PSD order relation,
//!   and PBH feasibility tests ([`matrix_kernel`]);
//! - validated problem instances, selection vectors, sensor information
//!   matrices, and the trace cost with a per-session solve cache
//!   ([`system_model`]);
//! - the covariance-based greedy selector with a full per-step trace
//!   ([`greedy_selector`]);
//! - closed-form performance-ratio bounds on greedy selection and a
//!   sufficient optimality certificate ([`bound_engine`]);
//! - random system generation, an exact brute-force oracle, Monte Carlo
//!   campaigns, and bound audits ([`experiment_harness`]).
//!
//! The `kfss` binary exposes all of it as CLI subcommands; see the README.

pub mod bound_engine;
pub mod experiment_harness;
pub mod greedy_selector;
pub mod matrix_kernel;
pub mod system_model;
pub mod tolerances;
