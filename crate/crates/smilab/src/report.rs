//! Run reports and their CSV / JSON renderings.

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use smilab_core::ensembles::DensityReport;
use smilab_core::identities::IdentitySuiteReport;
use smilab_core::tail::{CounterexampleReport, GinibreLowerReport, HagelsteinReport, TailReport};

use crate::config::ExperimentConfig;

pub const TAIL_HEADER: [&str; 10] = [
    "t",
    "threshold",
    "exceed_count",
    "trials",
    "empirical",
    "ci_lower",
    "ci_upper",
    "bound",
    "capped_bound",
    "pass",
];

pub const COUNTEREXAMPLE_HEADER: [&str; 6] =
    ["d", "trials", "median_norm", "scaled_median", "exceed_fraction", "pass"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "REPORT_ONLY")]
    ReportOnly,
}

impl Verdict {
    pub fn from_passed(passed: bool) -> Self {
        if passed {
            Self::Pass
        } else {
            Self::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pass => "PASS",
            Self::Fail => "FAIL",
            Self::ReportOnly => "REPORT_ONLY",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Tail(TailReport),
    Counterexample(CounterexampleReport),
    Hagelstein(HagelsteinReport),
    GinibreLower(GinibreLowerReport),
    IdentitySuite(IdentitySuiteReport),
    Density(DensityReport),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub config: ExperimentConfig,
    pub payload: Payload,
    /// Seconds. The only field that differs between repeated runs.
    pub wall_time: f64,
    pub excluded_draws: u64,
    pub verdict: Verdict,
}

/// Renders a float with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl RunReport {
    /// CSV table for experiments that have one.
    pub fn csv(&self) -> Option<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.payload {
            Payload::Tail(r) => {
                w.write_record(TAIL_HEADER).ok()?;
                for k in 0..r.t_grid.len() {
                    w.write_record([
                        fmt_float(r.t_grid[k]),
                        fmt_float(r.thresholds[k]),
                        r.exceed_counts[k].to_string(),
                        r.trials.to_string(),
                        fmt_float(r.empirical[k]),
                        fmt_float(r.ci_lower[k]),
                        fmt_float(r.ci_upper[k]),
                        fmt_float(r.bound[k]),
                        fmt_float(r.capped_bound[k]),
                        r.point_pass[k].to_string(),
                    ])
                    .ok()?;
                }
            }
            Payload::Counterexample(r) => {
                w.write_record(COUNTEREXAMPLE_HEADER).ok()?;
                for row in &r.rows {
                    w.write_record([
                        fmt_float(row.d),
                        row.trials.to_string(),
                        fmt_float(row.median_norm),
                        fmt_float(row.scaled_median),
                        fmt_float(row.exceed_fraction),
                        row.pass.to_string(),
                    ])
                    .ok()?;
                }
            }
            _ => return None,
        }
        String::from_utf8(w.into_inner().ok()?).ok()
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only serialisable data")
    }

    /// Writes `<experiment>.json` and, when available, `<experiment>.csv` into `dir`.
    pub fn write_to(&self, dir: &Path) -> io::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let stem = self.config.experiment.name();
        let mut written = Vec::new();
        if let Some(csv) = self.csv() {
            let path = dir.join(format!("{stem}.csv"));
            std::fs::write(&path, csv)?;
            written.push(path);
        }
        let path = dir.join(format!("{stem}.json"));
        let mut f = std::fs::File::create(&path)?;
        f.write_all(self.json().as_bytes())?;
        f.write_all(b"\n")?;
        written.push(path);
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        assert_eq!(fmt_float(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_float(8.0), "8.0000000000000000e0");
        for x in [0.1, 1.0 / 3.0, 2.0 / std::f64::consts::PI, 1e-300, 6.02e23] {
            assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn verdict_strings() {
        assert_eq!(serde_json::to_string(&Verdict::ReportOnly).unwrap(), "\"REPORT_ONLY\"");
        assert_eq!(Verdict::from_passed(false).as_str(), "FAIL");
    }
}
