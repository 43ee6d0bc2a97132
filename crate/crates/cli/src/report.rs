//! Plot data and JSON sidecars for single scenarios.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use pulsecorr_core::pipeline::CorrelationReport;
use pulsecorr_core::signal::SampledSignal;
use serde::{Deserialize, Serialize};

use crate::config::{ScenarioFile, SCHEMA_VERSION};
use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefinedPeak {
    pub lag: f64,
    pub rho: f64,
}

/// Everything in a [`CorrelationReport`] except the lag table, which lives in
/// the two-column file named by `rho_by_lag_file`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sidecar {
    pub schema_version: u32,
    pub rho_max: f64,
    pub best_lag: i64,
    pub rho_signed_at_best: f64,
    pub refined_peak: Option<RefinedPeak>,
    pub doppler_factor: f64,
    pub rest_frame_angle_deg: Option<f64>,
    pub rho_by_lag_file: String,
    pub lag_count: usize,
    pub warnings: Vec<String>,
    pub scenario: Option<ScenarioFile>,
}

impl Sidecar {
    pub fn new(report: &CorrelationReport, rho_by_lag_file: String) -> Self {
        Sidecar {
            schema_version: SCHEMA_VERSION,
            rho_max: report.rho_max,
            best_lag: report.best_lag,
            rho_signed_at_best: report.rho_signed_at_best,
            refined_peak: report
                .refined_peak
                .map(|(lag, rho)| RefinedPeak { lag, rho }),
            doppler_factor: report.doppler_factor,
            rest_frame_angle_deg: report.rest_frame_angle.map(f64::to_degrees),
            rho_by_lag_file,
            lag_count: report.rho_by_lag.len(),
            warnings: report.warnings.clone(),
            scenario: report.scenario.as_ref().map(ScenarioFile::from),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportFiles {
    pub rho_by_lag: PathBuf,
    pub sidecar: PathBuf,
}

fn write(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn with_suffix(stem: &Path, suffix: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn rho_table(report: &CorrelationReport) -> String {
    let mut out = String::from("# lag_samples rho\n");
    for (lag, rho) in &report.rho_by_lag {
        writeln!(out, "{lag} {rho}").unwrap();
    }
    out
}

/// Write `<stem>.rho.dat` and `<stem>.json`.
pub fn dump_report(report: &CorrelationReport, stem: &Path) -> Result<ReportFiles> {
    let rho_path = with_suffix(stem, ".rho.dat");
    let sidecar_path = with_suffix(stem, ".json");
    let name = rho_path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    write(&rho_path, rho_table(report).as_bytes())?;
    let mut json = serde_json::to_string_pretty(&Sidecar::new(report, name))?;
    json.push('\n');
    write(&sidecar_path, json.as_bytes())?;
    Ok(ReportFiles {
        rho_by_lag: rho_path,
        sidecar: sidecar_path,
    })
}

pub fn load_sidecar(path: &Path) -> Result<Sidecar> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut de = serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        CliError::Parse {
            path: path.to_path_buf(),
            field,
            line: inner.line(),
            column: inner.column(),
            message: inner.to_string(),
        }
    })
}

/// Two columns, time in seconds and amplitude.
pub fn write_signal(signal: &SampledSignal, path: &Path) -> Result<()> {
    let mut out = String::from("# time_s amplitude\n");
    for (n, v) in signal.samples.iter().enumerate() {
        writeln!(out, "{:e} {:e}", signal.time(n), v).unwrap();
    }
    write(path, out.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use pulsecorr_core::pipeline::max_abs_correlation;

    #[test]
    fn table_layout() {
        let f = SampledSignal::new(0.0, 1.0, vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        let r = max_abs_correlation(&f, &f, 1, false).unwrap();
        assert_eq!(
            rho_table(&r),
            "# lag_samples rho\n-1 -0.33333333333333337\n0 1\n1 -0.33333333333333337\n"
        );
        let s = Sidecar::new(&r, "x.rho.dat".into());
        assert_eq!((s.best_lag, s.lag_count, s.scenario), (0, 3, None));
    }
}
