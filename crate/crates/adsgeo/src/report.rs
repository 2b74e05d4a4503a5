//! Report entries, the JSON report and CSV writers.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use crate::config::{Command, RunConfig};

pub const SCHEMA: &str = "adsgeo-report/1";

/// One verified quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEntry {
    pub check_name: String,
    pub metric_id: String,
    /// Position within the check (point or ε index).
    pub index: usize,
    pub params: BTreeMap<String, f64>,
    /// Chart coordinates when the check is pointwise.
    pub point: Vec<f64>,
    /// Interval covered when the check spans a range.
    pub range: Option<[f64; 2]>,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub details: BTreeMap<String, f64>,
    /// Error message when the check could not be evaluated.
    pub cause: Option<String>,
    pub wall_time_s: f64,
}

/// What a check measured; `residual` defaults to `|lhs - rhs|`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Measure {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: Option<f64>,
    pub point: Vec<f64>,
    pub range: Option<[f64; 2]>,
    pub details: BTreeMap<String, f64>,
}

impl Measure {
    /// `lhs` compared against `rhs`.
    pub fn compare(lhs: f64, rhs: f64) -> Self {
        Measure {
            lhs,
            rhs,
            ..Measure::default()
        }
    }

    /// A magnitude that should vanish.
    pub fn zero(value: f64) -> Self {
        Measure::compare(value, 0.0)
    }

    /// A control that must exceed `threshold`; residual is `threshold - value`
    /// so it passes against tolerance 0.
    pub fn exceeds(value: f64, threshold: f64) -> Self {
        Measure {
            lhs: value,
            rhs: threshold,
            residual: Some(threshold - value),
            ..Measure::default()
        }
    }

    /// A control that must stay below `threshold`.
    pub fn below(value: f64, threshold: f64) -> Self {
        Measure {
            lhs: value,
            rhs: threshold,
            residual: Some(value - threshold),
            ..Measure::default()
        }
    }

    pub fn with_residual(mut self, residual: f64) -> Self {
        self.residual = Some(residual);
        self
    }

    pub fn at(mut self, point: &[f64]) -> Self {
        self.point = point.to_vec();
        self
    }

    pub fn over(mut self, lo: f64, hi: f64) -> Self {
        self.range = Some([lo, hi]);
        self
    }

    pub fn detail(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }
}

/// Identity of an entry before it is evaluated.
#[derive(Debug, Clone)]
pub struct EntryId<'a> {
    pub check: &'a str,
    pub metric: &'a str,
    pub index: usize,
    pub params: &'a [(&'a str, f64)],
}

/// Runs one check; errors become failed entries carrying their cause.
pub fn evaluate<E: std::fmt::Display>(
    cfg: &RunConfig,
    id: EntryId<'_>,
    f: impl FnOnce() -> Result<Measure, E>,
) -> ReportEntry {
    let start = Instant::now();
    let outcome = f();
    let wall_time_s = start.elapsed().as_secs_f64();
    let tolerance = cfg.tolerance(id.check);
    let params = id.params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    match outcome {
        Ok(m) => {
            let residual = m.residual.unwrap_or((m.lhs - m.rhs).abs());
            ReportEntry {
                check_name: id.check.to_string(),
                metric_id: id.metric.to_string(),
                index: id.index,
                params,
                point: m.point,
                range: m.range,
                lhs: m.lhs,
                rhs: m.rhs,
                residual,
                tolerance,
                pass: residual <= tolerance,
                details: m.details,
                cause: None,
                wall_time_s,
            }
        }
        Err(e) => ReportEntry {
            check_name: id.check.to_string(),
            metric_id: id.metric.to_string(),
            index: id.index,
            params,
            point: Vec::new(),
            range: None,
            lhs: f64::NAN,
            rhs: f64::NAN,
            residual: f64::NAN,
            tolerance,
            pass: false,
            details: BTreeMap::new(),
            cause: Some(e.to_string()),
            wall_time_s,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub entries: usize,
    pub passed: usize,
    pub failed: usize,
}

/// A named numeric table destined for CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: Command,
    pub config: RunConfig,
    pub summary: Summary,
    pub entries: Vec<ReportEntry>,
    #[serde(skip)]
    pub tables: Vec<Table>,
}

impl Report {
    /// Sorts entries by check name then index and fills the summary.
    pub fn new(command: Command, config: RunConfig, mut entries: Vec<ReportEntry>, tables: Vec<Table>) -> Self {
        entries.sort_by(|a, b| a.check_name.cmp(&b.check_name).then(a.index.cmp(&b.index)));
        let passed = entries.iter().filter(|e| e.pass).count();
        Report {
            schema: SCHEMA,
            command,
            config,
            summary: Summary {
                entries: entries.len(),
                passed,
                failed: entries.len() - passed,
            },
            entries,
            tables,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    /// 0 when every entry passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// The entries as CSV, one row each.
    pub fn write_entries_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "check_name",
            "metric_id",
            "index",
            "point",
            "lhs",
            "rhs",
            "residual",
            "tolerance",
            "pass",
            "cause",
            "wall_time_s",
        ])?;
        for e in &self.entries {
            let point = e.point.iter().map(|x| num(*x)).collect::<Vec<_>>().join(";");
            w.write_record([
                e.check_name.clone(),
                e.metric_id.clone(),
                e.index.to_string(),
                point,
                num(e.lhs),
                num(e.rhs),
                num(e.residual),
                num(e.tolerance),
                e.pass.to_string(),
                e.cause.clone().unwrap_or_default(),
                num(e.wall_time_s),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// CSV number format: shortest round-trip digits, exponent form for very
/// small or large magnitudes (`1e-7`, `1.0`, `NaN`).
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

impl Table {
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|x| num(*x)))?;
        }
        w.flush()?;
        Ok(())
    }
}
