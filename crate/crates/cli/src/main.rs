use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pulsecorr_cli::checks::{self, Check};
use pulsecorr_cli::config::{load_config, load_scenario, SweepFile};
use pulsecorr_cli::report::{dump_report, write_signal};
use pulsecorr_cli::sweep::run_sweep;
use pulsecorr_cli::{CliError, Result};
use pulsecorr_core::pipeline::run_scenario_full;
use pulsecorr_core::Complex64;

/// Backscatter of a Gaussian pulse from a uniformly moving target, and the
/// lag-maximized correlation between transmitted and received signals.
#[derive(Parser)]
#[command(name = "pulsecorr", version)]
struct Cli {
    /// Output directory (defaults to the current directory).
    #[arg(long, global = true, env = "PULSECORR_OUT_DIR")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the base scenario of a config and write its report.
    Simulate {
        config: PathBuf,
        /// Also write f, g_raw and g as two-column files.
        #[arg(long)]
        emit_signals: bool,
    },
    /// Run every scenario of a sweep config and write the summary CSV.
    Sweep {
        config: PathBuf,
        /// Worker threads; overrides the config's `jobs`.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        emit_signals: bool,
    },
    /// Parse and check a config without running it.
    Validate { config: PathBuf },
    /// Compare the library against its brute-force oracles.
    Oracle {
        #[arg(long, global = true, default_value_t = 0)]
        seed: u64,
        #[command(subcommand)]
        which: OracleCommand,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Two-way Doppler factor against the 4x4 boost matrix.
    Doppler {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        beta_x: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        beta_y: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        beta_z: f64,
    },
    /// Pearson coefficient against the two-pass formula.
    Pearson {
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        #[arg(long, default_value_t = 512)]
        samples: usize,
    },
    /// Lag scan against the brute-force scan.
    Lag {
        #[arg(long, default_value_t = 1024)]
        samples: usize,
    },
    /// Largest correlation between two independent noise records.
    Noise {
        #[arg(long, default_value_t = 4096)]
        samples: usize,
    },
    /// Parseval, round trip and naive DFT.
    Spectral {
        #[arg(long, default_value_t = 1024)]
        samples: usize,
    },
    /// Sphere efficiencies against the fixed-point series.
    Mie {
        #[arg(long)]
        x: f64,
        #[arg(long, default_value_t = 1.5)]
        m_re: f64,
        #[arg(long, default_value_t = 0.0)]
        m_im: f64,
        /// Perfectly conducting sphere (ignores the index).
        #[arg(long)]
        pec: bool,
    },
}

fn out_dir(cli_out: Option<PathBuf>) -> PathBuf {
    cli_out.unwrap_or_else(|| PathBuf::from("."))
}

fn stem_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".into())
}

fn simulate(config: &Path, out: &Path, emit_signals: bool) -> Result<ExitCode> {
    let cfg = load_scenario(config)?;
    let run = match run_scenario_full(&cfg.base) {
        Ok(run) => run,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(1));
        }
    };
    let stem = out.join(stem_of(config));
    let files = dump_report(&run.report, &stem)?;
    if emit_signals || cfg.emit_signals {
        let name = |s: &str| out.join(format!("{}.{s}.dat", stem_of(config)));
        write_signal(&run.backscatter.transmitted, &name("f"))?;
        write_signal(&run.backscatter.received_raw, &name("g_raw"))?;
        write_signal(&run.received, &name("g"))?;
    }
    let r = &run.report;
    println!("rho_max = {}", r.rho_max);
    println!("best_lag = {}", r.best_lag);
    println!("doppler_factor = {}", r.doppler_factor);
    if let Some(theta) = r.rest_frame_angle {
        println!("rest_frame_angle_deg = {}", theta.to_degrees());
    }
    println!("report = {}", files.sidecar.display());
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
    Ok(ExitCode::SUCCESS)
}

fn sweep(config: &Path, out: &Path, jobs: Option<usize>, emit_signals: bool) -> Result<ExitCode> {
    let mut cfg = load_config(config)?;
    if let Some(j) = jobs {
        if j == 0 {
            return Err(CliError::Validation(vec![
                "--jobs must be at least 1".into()
            ]));
        }
        cfg.jobs = j;
    }
    cfg.emit_signals |= emit_signals;
    let summary = run_sweep(&cfg, out)?;
    println!(
        "{} rows written to {} ({} failed)",
        summary.rows,
        summary.csv_path.display(),
        summary.failures
    );
    Ok(if summary.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn validate(config: &Path) -> Result<ExitCode> {
    let file = SweepFile::read(config)?;
    let cfg = file.validate(false)?;
    let n = cfg.scenarios().len();
    println!("ok: {n} scenario{}", if n == 1 { "" } else { "s" });
    Ok(ExitCode::SUCCESS)
}

fn oracle(seed: u64, which: OracleCommand) -> Result<ExitCode> {
    let check: Check = match which {
        OracleCommand::Doppler {
            beta_x,
            beta_y,
            beta_z,
        } => checks::doppler([beta_x, beta_y, beta_z])?,
        OracleCommand::Pearson { pairs, samples } => checks::pearson_pairs(seed, pairs, samples)?,
        OracleCommand::Lag { samples } => checks::lag(seed, samples)?,
        OracleCommand::Noise { samples } => checks::noise_pair(seed, samples)?,
        OracleCommand::Spectral { samples } => checks::spectral(seed, samples)?,
        OracleCommand::Mie { x, m_re, m_im, pec } => {
            checks::mie_sphere(x, (!pec).then(|| Complex64::new(m_re, m_im)))?
        }
    };
    println!("{check}");
    Ok(if check.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = out_dir(cli.out);
    let result = match cli.command {
        Command::Simulate {
            config,
            emit_signals,
        } => simulate(&config, &out, emit_signals),
        Command::Sweep {
            config,
            jobs,
            emit_signals,
        } => sweep(&config, &out, jobs, emit_signals),
        Command::Validate { config } => validate(&config),
        Command::Oracle { seed, which } => oracle(seed, which),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
