//! Batch execution and the summary table.

use std::fs;
use std::path::{Path, PathBuf};

use pulsecorr_core::pipeline::{run_scenario_full, ScenarioConfig, ScenarioRun};
use rayon::prelude::*;

use crate::config::SweepConfig;
use crate::error::{CliError, Result};
use crate::report::{dump_report, write_signal};

pub const CSV_HEADER: [&str; 15] = [
    "scenario_id",
    "kernel",
    "radius_m",
    "beta_x",
    "beta_y",
    "beta_z",
    "orient_x",
    "orient_y",
    "orient_z",
    "carrier_hz",
    "sigma_s",
    "doppler_factor",
    "rho_max",
    "best_lag",
    "error",
];

#[derive(Debug)]
pub struct SweepRow {
    pub scenario_id: usize,
    pub config: ScenarioConfig,
    pub outcome: std::result::Result<ScenarioRun, pulsecorr_core::Error>,
}

impl SweepRow {
    fn record(&self) -> Vec<String> {
        let c = &self.config;
        let b = c.velocity.beta();
        let mut rec = vec![
            self.scenario_id.to_string(),
            c.kernel.name().to_string(),
            c.kernel.radius().map(|r| r.to_string()).unwrap_or_default(),
            b[0].to_string(),
            b[1].to_string(),
            b[2].to_string(),
            c.orientation[0].to_string(),
            c.orientation[1].to_string(),
            c.orientation[2].to_string(),
            c.pulse.carrier_frequency.to_string(),
            c.pulse.width.to_string(),
        ];
        match &self.outcome {
            Ok(run) => rec.extend([
                run.report.doppler_factor.to_string(),
                run.report.rho_max.to_string(),
                run.report.best_lag.to_string(),
                String::new(),
            ]),
            Err(e) => rec.extend([String::new(), String::new(), String::new(), e.to_string()]),
        }
        rec
    }
}

/// Run every scenario on a pool of `jobs` threads. Rows come back in input
/// order and each scenario is itself deterministic, so the result does not
/// depend on `jobs`.
pub fn run_rows(scenarios: Vec<ScenarioConfig>, jobs: usize) -> Result<Vec<SweepRow>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Pool(e.to_string()))?;
    Ok(pool.install(|| {
        scenarios
            .into_par_iter()
            .enumerate()
            .map(|(scenario_id, config)| SweepRow {
                scenario_id,
                outcome: run_scenario_full(&config),
                config,
            })
            .collect()
    }))
}

pub fn summary_csv(rows: &[SweepRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.into_inner()
        .map_err(|e| CliError::io("<csv buffer>", e.into_error()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub csv_path: PathBuf,
    pub files_dir: PathBuf,
    pub rows: usize,
    pub failures: usize,
}

/// Directory next to the CSV holding per-scenario files.
pub fn files_dir(csv_path: &Path) -> PathBuf {
    let stem = csv_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sweep".into());
    csv_path.with_file_name(format!("{stem}_files"))
}

/// Write per-scenario reports and, if asked, the f / g_raw / g signals.
pub fn write_row_files(rows: &[SweepRow], dir: &Path, emit_signals: bool) -> Result<()> {
    for row in rows {
        let Ok(run) = &row.outcome else { continue };
        let stem = dir.join(format!("scenario_{:03}", row.scenario_id));
        dump_report(&run.report, &stem)?;
        if emit_signals {
            let name = |s: &str| dir.join(format!("scenario_{:03}.{s}.dat", row.scenario_id));
            write_signal(&run.backscatter.transmitted, &name("f"))?;
            write_signal(&run.backscatter.received_raw, &name("g_raw"))?;
            write_signal(&run.received, &name("g"))?;
        }
    }
    Ok(())
}

/// Run the sweep and write `out_dir/output_path` plus its companion files.
pub fn run_sweep(config: &SweepConfig, out_dir: &Path) -> Result<SweepSummary> {
    let rows = run_rows(config.scenarios(), config.jobs)?;
    let csv_path = out_dir.join(&config.output_path);
    if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(&csv_path, summary_csv(&rows)?).map_err(|e| CliError::io(&csv_path, e))?;
    let dir = files_dir(&csv_path);
    write_row_files(&rows, &dir, config.emit_signals)?;
    Ok(SweepSummary {
        csv_path,
        files_dir: dir,
        rows: rows.len(),
        failures: rows.iter().filter(|r| r.outcome.is_err()).count(),
    })
}
