//! Monte Carlo campaigns over random system ensembles.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::generator::{generate_random_system, ConfigError, GeneratorConfig};
use super::oracle::performance_ratio;
use crate::bound_engine::{improved_ratio_bound, optimality_certificate, MTraceMode};
use crate::tolerances::RATIO_VIOLATION_TOL;

/// Per-system campaign record. Substantive fields are deterministic in
/// `(config, index)`; only `elapsed_ms` varies run to run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemRecord {
    pub index: u64,
    /// Realized ratio `J(z_greedy) / J(z_opt)`; absent when the system
    /// errored.
    pub r: Option<f64>,
    pub greedy_cost: Option<f64>,
    pub opt_cost: Option<f64>,
    pub greedy_picks: Vec<usize>,
    pub r_old: Option<f64>,
    pub r_new: Option<f64>,
    pub r_spectral: Option<f64>,
    pub lambda1_max_exact: Option<bool>,
    /// Whether the greedy-optimality certificate applied.
    pub certified: Option<bool>,
    pub elapsed_ms: u64,
    pub error: Option<String>,
}

/// Cumulative Table-style buckets: `b(i)` counts ratios strictly below `i`,
/// `a10` counts ratios of 10 or more. `b10 + a10` partitions the systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CumulativeBuckets {
    pub b2: usize,
    pub b4: usize,
    pub b6: usize,
    pub b8: usize,
    pub b10: usize,
    pub a10: usize,
}

/// Disjoint-bin reading of the same histogram: `[1,2), [2,4), ..., [10,inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PerBinBuckets {
    pub below_2: usize,
    pub from_2_to_4: usize,
    pub from_4_to_6: usize,
    pub from_6_to_8: usize,
    pub from_8_to_10: usize,
    pub at_least_10: usize,
}

/// Aggregate statistics over a campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignStats {
    /// Systems that evaluated successfully (the statistics population).
    pub num_systems: usize,
    pub attempted: usize,
    pub failed: usize,
    /// Both bucket readings are published; their definitions differ only in
    /// whether counts accumulate.
    pub cumulative: CumulativeBuckets,
    pub per_bin: PerBinBuckets,
    /// Mean realized ratio; 0 when the population is empty.
    pub mean_ratio: f64,
    /// Coefficient of variation (sample standard deviation over mean);
    /// 0 when fewer than two systems.
    pub cv_ratio: f64,
    pub max_ratio: f64,
    /// Systems where the optimality certificate applied.
    pub certificate_hits: usize,
    /// Systems whose realized ratio exceeded the improved bound by more
    /// than the violation slack.
    pub rnew_violations: usize,
    /// Systems whose realized ratio exceeded the baseline bound by more
    /// than the violation slack.
    pub rold_violations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignOutcome {
    pub stats: CampaignStats,
    pub records: Vec<SystemRecord>,
}

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("workers must be at least 1")]
    ZeroWorkers,
    #[error("{failed} of {attempted} systems failed, above the 1% budget")]
    TooManyFailures { failed: usize, attempted: usize },
    #[error("worker pool: {0}")]
    Pool(String),
}

/// Runs `num_systems` independent systems drawn from `config` across
/// `workers` threads.
///
/// Individual system failures are recorded, not fatal; the campaign itself
/// fails only when more than 1% of the systems error. Records are returned
/// sorted by index, so the outcome is identical for any worker count.
pub fn run_campaign(
    config: &GeneratorConfig,
    num_systems: usize,
    workers: usize,
) -> Result<CampaignOutcome, CampaignError> {
    config.validate()?;
    if workers == 0 {
        return Err(CampaignError::ZeroWorkers);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CampaignError::Pool(e.to_string()))?;
    let mut records: Vec<SystemRecord> = pool.install(|| {
        (0..num_systems as u64)
            .into_par_iter()
            .map(|index| evaluate_system(config, index))
            .collect()
    });
    records.sort_by_key(|r| r.index);

    let failed = records.iter().filter(|r| r.error.is_some()).count();
    if failed as f64 > 0.01 * num_systems as f64 {
        return Err(CampaignError::TooManyFailures {
            failed,
            attempted: num_systems,
        });
    }
    let stats = compute_stats(&records);
    Ok(CampaignOutcome { stats, records })
}

/// Evaluates one system end to end: generate, greedy vs brute force, bound
/// report, certificate.
pub fn evaluate_system(config: &GeneratorConfig, index: u64) -> SystemRecord {
    let started = Instant::now();
    let mut record = SystemRecord {
        index,
        r: None,
        greedy_cost: None,
        opt_cost: None,
        greedy_picks: Vec::new(),
        r_old: None,
        r_new: None,
        r_spectral: None,
        lambda1_max_exact: None,
        certified: None,
        elapsed_ms: 0,
        error: None,
    };

    let model = match generate_random_system(config, index) {
        Ok(m) => m,
        Err(e) => {
            record.error = Some(format!("generation: {e}"));
            record.elapsed_ms = started.elapsed().as_millis() as u64;
            return record;
        }
    };

    match performance_ratio(&model, config.budget) {
        Ok(outcome) => {
            record.r = Some(outcome.r);
            record.greedy_cost = Some(outcome.greedy_cost);
            record.opt_cost = Some(outcome.optimal_cost);
            record.greedy_picks = outcome.greedy.picks.clone();
        }
        Err(e) => {
            record.error = Some(format!("ratio: {e}"));
            record.elapsed_ms = started.elapsed().as_millis() as u64;
            return record;
        }
    }

    match improved_ratio_bound(&model, config.budget, MTraceMode::Lyapunov) {
        Ok(report) => {
            record.r_old = Some(report.r_old);
            record.r_new = report.r_new;
            record.r_spectral = Some(report.r_spectral);
            record.lambda1_max_exact = Some(report.lambda1_max_exact);
        }
        Err(e) => {
            record.error = Some(format!("bounds: {e}"));
            record.elapsed_ms = started.elapsed().as_millis() as u64;
            return record;
        }
    }

    record.certified = Some(optimality_certificate(&model).applies);
    record.elapsed_ms = started.elapsed().as_millis() as u64;
    record
}

/// Aggregates records into campaign statistics.
pub fn compute_stats(records: &[SystemRecord]) -> CampaignStats {
    let attempted = records.len();
    let failed = records.iter().filter(|r| r.error.is_some()).count();
    let ratios: Vec<f64> = records.iter().filter_map(|r| r.r).collect();
    let num_systems = ratios.len();

    let mut cumulative = CumulativeBuckets::default();
    let mut per_bin = PerBinBuckets::default();
    for &r in &ratios {
        if r < 2.0 {
            cumulative.b2 += 1;
        }
        if r < 4.0 {
            cumulative.b4 += 1;
        }
        if r < 6.0 {
            cumulative.b6 += 1;
        }
        if r < 8.0 {
            cumulative.b8 += 1;
        }
        if r < 10.0 {
            cumulative.b10 += 1;
        } else {
            cumulative.a10 += 1;
        }
        match r {
            x if x < 2.0 => per_bin.below_2 += 1,
            x if x < 4.0 => per_bin.from_2_to_4 += 1,
            x if x < 6.0 => per_bin.from_4_to_6 += 1,
            x if x < 8.0 => per_bin.from_6_to_8 += 1,
            x if x < 10.0 => per_bin.from_8_to_10 += 1,
            _ => per_bin.at_least_10 += 1,
        }
    }

    let mean_ratio = if num_systems > 0 {
        ratios.iter().sum::<f64>() / num_systems as f64
    } else {
        0.0
    };
    let cv_ratio = if num_systems > 1 && mean_ratio > 0.0 {
        let var = ratios
            .iter()
            .map(|r| (r - mean_ratio).powi(2))
            .sum::<f64>()
            / (num_systems - 1) as f64;
        var.sqrt() / mean_ratio
    } else {
        0.0
    };
    let max_ratio = ratios.iter().copied().fold(0.0_f64, f64::max);

    let certificate_hits = records
        .iter()
        .filter(|r| r.certified == Some(true))
        .count();
    let rnew_violations = records
        .iter()
        .filter(|rec| match (rec.r, rec.r_new) {
            (Some(r), Some(bound)) => r > bound + RATIO_VIOLATION_TOL,
            _ => false,
        })
        .count();
    let rold_violations = records
        .iter()
        .filter(|rec| match (rec.r, rec.r_old) {
            (Some(r), Some(bound)) => r > bound + RATIO_VIOLATION_TOL,
            _ => false,
        })
        .count();

    CampaignStats {
        num_systems,
        attempted,
        failed,
        cumulative,
        per_bin,
        mean_ratio,
        cv_ratio,
        max_ratio,
        certificate_hits,
        rnew_violations,
        rold_violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> GeneratorConfig {
        GeneratorConfig {
            n: 3,
            sensors: 5,
            budget: 2,
            seed: 42,
            ..GeneratorConfig::default()
        }
    }

    #[test]
    fn empty_campaign_has_zero_stats() {
        let outcome = run_campaign(&small_config(), 0, 1).unwrap();
        assert_eq!(outcome.stats.num_systems, 0);
        assert_eq!(outcome.stats.cumulative, CumulativeBuckets::default());
        assert_eq!(outcome.stats.mean_ratio, 0.0);
        assert_eq!(outcome.stats.max_ratio, 0.0);
        assert!(outcome.records.is_empty());
    }

    #[test]
    fn bucket_identities_hold() {
        let outcome = run_campaign(&small_config(), 40, 2).unwrap();
        let s = &outcome.stats;
        let c = &s.cumulative;
        assert!(c.b2 <= c.b4 && c.b4 <= c.b6 && c.b6 <= c.b8 && c.b8 <= c.b10);
        assert_eq!(c.b10 + c.a10, s.num_systems);
        let p = &s.per_bin;
        assert_eq!(
            p.below_2 + p.from_2_to_4 + p.from_4_to_6 + p.from_6_to_8 + p.from_8_to_10
                + p.at_least_10,
            s.num_systems
        );
        assert_eq!(p.below_2, c.b2);
        assert_eq!(p.below_2 + p.from_2_to_4, c.b4);
        assert!(s.max_ratio >= s.mean_ratio && s.mean_ratio >= 1.0);
    }

    #[test]
    fn worker_count_does_not_change_records() {
        let cfg = small_config();
        let one = run_campaign(&cfg, 12, 1).unwrap();
        let four = run_campaign(&cfg, 12, 4).unwrap();
        assert_eq!(one.stats, four.stats);
        for (a, b) in one.records.iter().zip(&four.records) {
            assert_eq!(a.index, b.index);
            assert_eq!(a.r, b.r);
            assert_eq!(a.r_old, b.r_old);
            assert_eq!(a.r_new, b.r_new);
            assert_eq!(a.greedy_picks, b.greedy_picks);
            assert_eq!(a.certified, b.certified);
        }
    }

    #[test]
    fn zero_workers_rejected() {
        assert!(matches!(
            run_campaign(&small_config(), 1, 0),
            Err(CampaignError::ZeroWorkers)
        ));
    }
}
