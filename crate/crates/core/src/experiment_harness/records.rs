//! Campaign file outputs: line-delimited records, the stats document, the
//! CSV summary, and histogram CSVs.
//!
//! The CSV summary is the campaign's determinism surface: floats are written
//! in Rust's shortest round-trip form and records are ordered by index, so
//! two runs with the same seed produce byte-identical files regardless of
//! worker count.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::campaign::{CampaignStats, SystemRecord};
use super::generator::GeneratorConfig;

pub const RECORDS_FORMAT_NAME: &str = "kfss-records";
pub const RECORDS_FORMAT_VERSION: u32 = 1;

/// First line of a records file: identifies the campaign that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignHeader {
    pub format: String,
    pub version: u32,
    pub config: GeneratorConfig,
    pub num_systems: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum RecordLine {
    Header(CampaignHeader),
    Record(SystemRecord),
}

#[derive(Debug, Error)]
pub enum RecordsError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed records file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("records file has no header line")]
    MissingHeader,
    #[error("unsupported records format {found:?}")]
    UnsupportedFormat { found: String },
    #[error("unsupported records version {found}")]
    UnsupportedVersion { found: u32 },
}

/// Writes a header line followed by one JSON record per line.
pub fn write_records(
    path: &Path,
    config: &GeneratorConfig,
    records: &[SystemRecord],
) -> Result<(), RecordsError> {
    let mut out = BufWriter::new(File::create(path)?);
    let header = RecordLine::Header(CampaignHeader {
        format: RECORDS_FORMAT_NAME.to_string(),
        version: RECORDS_FORMAT_VERSION,
        config: config.clone(),
        num_systems: records.len(),
    });
    serde_json::to_writer(&mut out, &header)?;
    out.write_all(b"\n")?;
    for record in records {
        serde_json::to_writer(&mut out, &RecordLine::Record(record.clone()))?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a records file back into its header and records.
pub fn read_records(path: &Path) -> Result<(CampaignHeader, Vec<SystemRecord>), RecordsError> {
    let reader = BufReader::new(File::open(path)?);
    let mut header: Option<CampaignHeader> = None;
    let mut records = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<RecordLine>(&line)? {
            RecordLine::Header(h) => {
                if h.format != RECORDS_FORMAT_NAME {
                    return Err(RecordsError::UnsupportedFormat { found: h.format });
                }
                if h.version != RECORDS_FORMAT_VERSION {
                    return Err(RecordsError::UnsupportedVersion { found: h.version });
                }
                header = Some(h);
            }
            RecordLine::Record(r) => records.push(r),
        }
    }
    let header = header.ok_or(RecordsError::MissingHeader)?;
    Ok((header, records))
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v}")).unwrap_or_default()
}

/// CSV summary with columns `index,r,r_old,r_new,certified,greedy_cost,opt_cost`.
/// Missing values are empty fields.
pub fn write_summary_csv(path: &Path, records: &[SystemRecord]) -> Result<(), RecordsError> {
    let mut out = String::from("index,r,r_old,r_new,certified,greedy_cost,opt_cost\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.index,
            fmt_opt(r.r),
            fmt_opt(r.r_old),
            fmt_opt(r.r_new),
            r.certified.map(|c| c.to_string()).unwrap_or_default(),
            fmt_opt(r.greedy_cost),
            fmt_opt(r.opt_cost),
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Histogram CSV with both bucket readings, labeled: disjoint bins first,
/// cumulative `b(i)`/`a(10)` rows after.
pub fn write_histogram_csv(path: &Path, stats: &CampaignStats) -> Result<(), RecordsError> {
    let p = &stats.per_bin;
    let c = &stats.cumulative;
    let mut out = String::from("bucket,count\n");
    for (label, count) in [
        ("1<=r<2", p.below_2),
        ("2<=r<4", p.from_2_to_4),
        ("4<=r<6", p.from_4_to_6),
        ("6<=r<8", p.from_6_to_8),
        ("8<=r<10", p.from_8_to_10),
        ("r>=10", p.at_least_10),
        ("b(2)", c.b2),
        ("b(4)", c.b4),
        ("b(6)", c.b6),
        ("b(8)", c.b8),
        ("b(10)", c.b10),
        ("a(10)", c.a10),
    ] {
        out.push_str(&format!("{label},{count}\n"));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Stats as a standalone pretty JSON document.
pub fn write_stats_json(path: &Path, stats: &CampaignStats) -> Result<(), RecordsError> {
    let json = serde_json::to_string_pretty(stats)?;
    fs::write(path, json + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment_harness::run_campaign;

    #[test]
    fn records_round_trip() {
        let cfg = GeneratorConfig {
            n: 2,
            sensors: 3,
            budget: 2,
            seed: 5,
            ..GeneratorConfig::default()
        };
        let outcome = run_campaign(&cfg, 4, 1).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("records.jsonl");
        write_records(&path, &cfg, &outcome.records).unwrap();
        let (header, records) = read_records(&path).unwrap();
        assert_eq!(header.config, cfg);
        assert_eq!(header.num_systems, 4);
        assert_eq!(records, outcome.records);
    }

    #[test]
    fn summary_csv_shape_and_determinism() {
        let cfg = GeneratorConfig {
            n: 2,
            sensors: 3,
            budget: 2,
            seed: 5,
            ..GeneratorConfig::default()
        };
        let a = run_campaign(&cfg, 5, 1).unwrap();
        let b = run_campaign(&cfg, 5, 3).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let pa = dir.path().join("a.csv");
        let pb = dir.path().join("b.csv");
        write_summary_csv(&pa, &a.records).unwrap();
        write_summary_csv(&pb, &b.records).unwrap();
        let ca = fs::read(&pa).unwrap();
        let cb = fs::read(&pb).unwrap();
        assert_eq!(ca, cb, "summary CSV must be byte-identical across worker counts");
        let text = String::from_utf8(ca).unwrap();
        assert!(text.starts_with("index,r,r_old,r_new,certified,greedy_cost,opt_cost\n"));
        assert_eq!(text.lines().count(), 6);
    }

    #[test]
    fn histogram_counts_sum_to_population() {
        let cfg = GeneratorConfig {
            n: 2,
            sensors: 4,
            budget: 2,
            seed: 9,
            ..GeneratorConfig::default()
        };
        let outcome = run_campaign(&cfg, 10, 2).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("hist.csv");
        write_histogram_csv(&path, &outcome.stats).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let bin_total: usize = text
            .lines()
            .skip(1)
            .take(6)
            .map(|l| l.rsplit(',').next().unwrap().parse::<usize>().unwrap())
            .sum();
        assert_eq!(bin_total, outcome.stats.num_systems);
    }
}
