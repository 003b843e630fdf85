//! Random system generation, exact oracles, Monte Carlo campaigns, and bound
//! audits.
//!
//! Campaigns are deterministic in `(seed, config)`: every system is a pure
//! function of the campaign seed and its index via a per-index ChaCha12
//! stream, systems are evaluated independently across a worker pool, and
//! aggregation sorts by index, so the worker count never changes any output
//! byte of the CSV summary.

mod audit;
mod campaign;
mod generator;
mod oracle;
mod records;

pub use audit::{bound_audit, write_offending_models, AuditReport};
pub use campaign::{
    compute_stats, evaluate_system, run_campaign, CampaignError, CampaignOutcome, CampaignStats,
    CumulativeBuckets, PerBinBuckets, SystemRecord,
};
pub use generator::{generate_random_system, ConfigError, GeneratorConfig};
pub use oracle::{
    brute_force_optimal, brute_force_optimal_with, performance_ratio, OptimalSelection,
    OracleError, RatioOutcome,
};
pub use records::{
    read_records, write_histogram_csv, write_records, write_stats_json, write_summary_csv,
    CampaignHeader, RecordsError, RECORDS_FORMAT_NAME, RECORDS_FORMAT_VERSION,
};
