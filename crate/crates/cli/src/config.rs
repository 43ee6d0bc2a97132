//! JSON sweep configuration.
//!
//! Physical quantities carry their unit in the field name: frequencies in THz
//! (`carrier_thz`, `freq_t_thz`), times in fs, radii in um. Velocities are
//! dimensionless beta components. Unknown keys are rejected.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "base": {
//!     "pulse": { "carrier_thz": 20.0, "sigma_fs": 50.0 },
//!     "kernel": { "kind": "dielectric_sphere", "radius_um": 1.0 }
//!   },
//!   "sweep_velocities": [ { "beta_z": 0.2 }, { "beta_x": 0.2 } ],
//!   "output_path": "table.csv",
//!   "jobs": 4
//! }
//! ```

use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};

use pulsecorr_core::pipeline::{LagScanConfig, SamplingConfig, ScenarioConfig};
use pulsecorr_core::relativity::BoostVelocity;
use pulsecorr_core::scatterkernel::{KernelSpec, MaterialModel};
use pulsecorr_core::signal::PulseSpec;
use pulsecorr_core::{Complex64, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

const THZ: f64 = 1.0e12;
const FS: f64 = 1.0e-15;
const UM: f64 = 1.0e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub schema_version: u32,
    pub base: ScenarioFile,
    #[serde(default)]
    pub sweep_velocities: Vec<BetaFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_kernels: Option<Vec<KernelFile>>,
    /// Echoed per row; sphere kernels do not depend on it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_orientations: Option<Vec<Vec3File>>,
    #[serde(default = "default_output")]
    pub output_path: PathBuf,
    #[serde(default)]
    pub emit_signals: bool,
    #[serde(default = "default_jobs")]
    pub jobs: usize,
}

fn default_output() -> PathBuf {
    PathBuf::from("sweep.csv")
}

fn default_jobs() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub pulse: PulseFile,
    #[serde(default)]
    pub velocity: BetaFile,
    pub kernel: KernelFile,
    #[serde(default = "Vec3File::z")]
    pub orientation: Vec3File,
    #[serde(default = "Vec3File::z")]
    pub incidence_direction: Vec3File,
    #[serde(default = "Vec3File::minus_z")]
    pub observation_direction: Vec3File,
    /// Defaults to W = 8 sigma, N = 4096 when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SamplingFile>,
    #[serde(default)]
    pub lag_scan: LagScanFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseFile {
    pub carrier_thz: f64,
    pub sigma_fs: f64,
    #[serde(default)]
    pub delay_fs: f64,
    #[serde(default = "one")]
    pub amplitude: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaFile {
    #[serde(default)]
    pub beta_x: f64,
    #[serde(default)]
    pub beta_y: f64,
    #[serde(default)]
    pub beta_z: f64,
}

impl BetaFile {
    fn vector(&self) -> Vector3<f64> {
        Vector3::new(self.beta_x, self.beta_y, self.beta_z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Vec3File {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3File {
    fn z() -> Self {
        Vec3File {
            x: 0.0,
            y: 0.0,
            z: 1.0,
        }
    }

    fn minus_z() -> Self {
        Vec3File {
            x: 0.0,
            y: 0.0,
            z: -1.0,
        }
    }

    fn vector(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }
}

impl From<&Vector3<f64>> for Vec3File {
    fn from(v: &Vector3<f64>) -> Self {
        Vec3File {
            x: v[0],
            y: v[1],
            z: v[2],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelFile {
    FlatMirror {
        #[serde(default = "one")]
        reflectivity_re: f64,
        #[serde(default)]
        reflectivity_im: f64,
    },
    PecSphere {
        radius_um: f64,
    },
    DielectricSphere {
        radius_um: f64,
        /// Silicon carbide when absent.
        #[serde(default)]
        material: MaterialFile,
    },
}

/// Lorentz oscillator; the frequencies are ordinary (not angular) frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialFile {
    pub eps_inf: f64,
    pub freq_t_thz: f64,
    pub freq_l_thz: f64,
    pub damping_thz: f64,
}

impl Default for MaterialFile {
    fn default() -> Self {
        MaterialFile::from(&MaterialModel::silicon_carbide())
    }
}

impl From<&MaterialModel> for MaterialFile {
    fn from(m: &MaterialModel) -> Self {
        MaterialFile {
            eps_inf: m.eps_inf,
            freq_t_thz: m.omega_t / TAU / THZ,
            freq_l_thz: m.omega_l / TAU / THZ,
            damping_thz: m.damping / TAU / THZ,
        }
    }
}

impl MaterialFile {
    fn model(&self) -> MaterialModel {
        MaterialModel {
            eps_inf: self.eps_inf,
            omega_t: TAU * self.freq_t_thz * THZ,
            omega_l: TAU * self.freq_l_thz * THZ,
            damping: TAU * self.damping_thz * THZ,
        }
    }
}

impl KernelFile {
    pub fn spec(&self) -> KernelSpec {
        match *self {
            KernelFile::FlatMirror {
                reflectivity_re,
                reflectivity_im,
            } => KernelSpec::FlatMirror {
                reflectivity: Complex64::new(reflectivity_re, reflectivity_im),
            },
            KernelFile::PecSphere { radius_um } => KernelSpec::PecSphere {
                radius: radius_um * UM,
            },
            KernelFile::DielectricSphere {
                radius_um,
                material,
            } => KernelSpec::DielectricSphere {
                radius: radius_um * UM,
                material: material.model(),
            },
        }
    }
}

impl From<&KernelSpec> for KernelFile {
    fn from(k: &KernelSpec) -> Self {
        match k {
            KernelSpec::FlatMirror { reflectivity } => KernelFile::FlatMirror {
                reflectivity_re: reflectivity.re,
                reflectivity_im: reflectivity.im,
            },
            KernelSpec::PecSphere { radius } => KernelFile::PecSphere {
                radius_um: radius / UM,
            },
            KernelSpec::DielectricSphere { radius, material } => KernelFile::DielectricSphere {
                radius_um: radius / UM,
                material: MaterialFile::from(material),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingFile {
    pub window_half_width_fs: f64,
    pub n_samples: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LagScanFile {
    /// Samples; N/2 - 1 when absent.
    #[serde(default)]
    pub max_lag: Option<usize>,
    #[serde(default)]
    pub refine: bool,
}

impl ScenarioFile {
    /// Build the scenario, returning every violated invariant instead of the
    /// first. The velocity falls back to rest when it is invalid so that the
    /// remaining checks still run.
    pub fn scenario(&self) -> (ScenarioConfig, Vec<String>) {
        let mut problems = Vec::new();
        let pulse = PulseSpec {
            carrier_frequency: self.pulse.carrier_thz * THZ,
            width: self.pulse.sigma_fs * FS,
            delay: self.pulse.delay_fs * FS,
            amplitude: self.pulse.amplitude,
        };
        let velocity = match velocity(&self.velocity) {
            Ok(v) => v,
            Err(e) => {
                problems.push(format!("velocity: {e}"));
                BoostVelocity::rest()
            }
        };
        let mut config = ScenarioConfig::new(pulse, velocity, self.kernel.spec());
        config.orientation = self.orientation.vector();
        config.incidence_direction = self.incidence_direction.vector();
        config.observation_direction = self.observation_direction.vector();
        if let Some(s) = &self.sampling {
            config.sampling = SamplingConfig {
                window_half_width: s.window_half_width_fs * FS,
                n_samples: s.n_samples,
            };
        }
        config.lag_scan = LagScanConfig {
            max_lag: self.lag_scan.max_lag,
            refine: self.lag_scan.refine,
        };
        problems.extend(config.violations());
        (config, problems)
    }
}

impl From<&ScenarioConfig> for ScenarioFile {
    /// Echo with every default filled in.
    fn from(c: &ScenarioConfig) -> Self {
        let beta = c.velocity.beta();
        ScenarioFile {
            pulse: PulseFile {
                carrier_thz: c.pulse.carrier_frequency / THZ,
                sigma_fs: c.pulse.width / FS,
                delay_fs: c.pulse.delay / FS,
                amplitude: c.pulse.amplitude,
            },
            velocity: BetaFile {
                beta_x: beta[0],
                beta_y: beta[1],
                beta_z: beta[2],
            },
            kernel: KernelFile::from(&c.kernel),
            orientation: Vec3File::from(&c.orientation),
            incidence_direction: Vec3File::from(&c.incidence_direction),
            observation_direction: Vec3File::from(&c.observation_direction),
            sampling: Some(SamplingFile {
                window_half_width_fs: c.sampling.window_half_width / FS,
                n_samples: c.sampling.n_samples,
            }),
            lag_scan: LagScanFile {
                max_lag: Some(c.max_lag()),
                refine: c.lag_scan.refine,
            },
        }
    }
}

fn velocity(b: &BetaFile) -> std::result::Result<BoostVelocity, String> {
    let v = b.vector();
    if !v.iter().all(|c| c.is_finite()) {
        return Err("beta components must be finite".into());
    }
    BoostVelocity::new(v).map_err(|e| e.to_string())
}

/// Validated sweep.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub base: ScenarioConfig,
    pub velocities: Vec<BoostVelocity>,
    pub kernels: Vec<KernelSpec>,
    pub orientations: Vec<Vector3<f64>>,
    pub output_path: PathBuf,
    pub emit_signals: bool,
    pub jobs: usize,
}

impl SweepConfig {
    /// One scenario per (kernel, orientation, velocity), in that nesting order.
    pub fn scenarios(&self) -> Vec<ScenarioConfig> {
        let mut out = Vec::new();
        for kernel in &self.kernels {
            for orientation in &self.orientations {
                for velocity in &self.velocities {
                    let mut s = self.base.clone();
                    s.kernel = *kernel;
                    s.orientation = *orientation;
                    s.velocity = *velocity;
                    out.push(s);
                }
            }
        }
        out
    }
}

impl SweepFile {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        let parsed: SweepFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let field = e.path().to_string();
            let inner = e.into_inner();
            CliError::Parse {
                path: path.to_path_buf(),
                field,
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            }
        })?;
        de.end().map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            field: ".".into(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Ok(parsed)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        SweepFile::parse(&text, path)
    }

    /// Check every invariant and build the sweep. `require_sweep` demands a
    /// non-empty velocity list.
    pub fn validate(&self, require_sweep: bool) -> Result<SweepConfig> {
        let mut problems = Vec::new();
        if self.schema_version != SCHEMA_VERSION {
            problems.push(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        let (base, base_problems) = self.base.scenario();
        problems.extend(base_problems.into_iter().map(|p| format!("base: {p}")));
        if self.jobs == 0 {
            problems.push("jobs must be at least 1".into());
        }
        if require_sweep && self.sweep_velocities.is_empty() {
            problems.push("sweep_velocities must not be empty".into());
        }
        let mut velocities = Vec::new();
        for (i, b) in self.sweep_velocities.iter().enumerate() {
            match velocity(b) {
                Ok(v) => velocities.push(v),
                Err(e) => problems.push(format!("sweep_velocities[{i}]: {e}")),
            }
        }
        let kernels = match &self.sweep_kernels {
            None => vec![base.kernel],
            Some(list) => {
                if list.is_empty() {
                    problems.push("sweep_kernels, when given, must not be empty".into());
                }
                let specs: Vec<KernelSpec> = list.iter().map(KernelFile::spec).collect();
                for (i, k) in specs.iter().enumerate() {
                    problems.extend(
                        k.violations()
                            .into_iter()
                            .map(|p| format!("sweep_kernels[{i}]: {p}")),
                    );
                }
                specs
            }
        };
        let orientations = match &self.sweep_orientations {
            None => vec![base.orientation],
            Some(list) => {
                if list.is_empty() {
                    problems.push("sweep_orientations, when given, must not be empty".into());
                }
                let vs: Vec<Vector3<f64>> = list.iter().map(Vec3File::vector).collect();
                for (i, v) in vs.iter().enumerate() {
                    if !((v.norm() - 1.0).abs() <= 1e-9) {
                        problems.push(format!("sweep_orientations[{i}] must be a unit vector"));
                    }
                }
                vs
            }
        };
        if !problems.is_empty() {
            return Err(CliError::Validation(problems));
        }
        let velocities = if velocities.is_empty() {
            vec![base.velocity]
        } else {
            velocities
        };
        Ok(SweepConfig {
            base,
            velocities,
            kernels,
            orientations,
            output_path: self.output_path.clone(),
            emit_signals: self.emit_signals,
            jobs: self.jobs,
        })
    }
}

/// Read and validate a sweep configuration.
pub fn load_config(path: &Path) -> Result<SweepConfig> {
    SweepFile::read(path)?.validate(true)
}

/// Read a configuration and keep only its base scenario.
pub fn load_scenario(path: &Path) -> Result<SweepConfig> {
    let file = SweepFile::read(path)?;
    let mut cfg = file.validate(false)?;
    cfg.velocities = vec![cfg.base.velocity];
    cfg.kernels = vec![cfg.base.kernel];
    cfg.orientations = vec![cfg.base.orientation];
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<SweepFile> {
        SweepFile::parse(text, Path::new("test.json"))
    }

    const BASE: &str = r#""base": {
        "pulse": { "carrier_thz": 20.0, "sigma_fs": 50.0 },
        "kernel": { "kind": "dielectric_sphere", "radius_um": 1.0 }
    }"#;

    #[test]
    fn receding_row() {
        let text = format!(
            r#"{{ "schema_version": 1, {BASE}, "sweep_velocities": [{{ "beta_z": 0.2 }}] }}"#
        );
        let cfg = parse(&text).unwrap().validate(true).unwrap();
        let rows = cfg.scenarios();
        assert_eq!(rows.len(), 1);
        let s = &rows[0];
        assert_eq!(*s.velocity.beta(), Vector3::new(0.0, 0.0, 0.2));
        assert_eq!(s.incidence_direction, Vector3::z());
        assert_eq!(s.observation_direction, -Vector3::z());
        assert_eq!(s.pulse.carrier_frequency, 20.0e12);
        assert!((s.sampling.window_half_width - 400e-15).abs() < 1e-27);
        assert_eq!(s.sampling.n_samples, 4096);
        let echo = ScenarioFile::from(s);
        let sampling = echo.sampling.unwrap();
        assert!((sampling.window_half_width_fs - 400.0).abs() < 1e-9);
        assert_eq!(sampling.n_samples, 4096);
        match echo.kernel {
            KernelFile::DielectricSphere { material, .. } => {
                assert!((material.freq_t_thz - 23.79).abs() < 1e-12)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn superluminal_is_a_validation_error() {
        let text = format!(
            r#"{{ "schema_version": 1, {BASE}, "sweep_velocities": [{{ "beta_z": 1.1 }}] }}"#
        );
        match parse(&text).unwrap().validate(true) {
            Err(CliError::Validation(v)) => {
                assert_eq!(v.len(), 1);
                assert!(v[0].starts_with("sweep_velocities[0]"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn every_violation_is_listed() {
        let text = r#"{
            "schema_version": 2,
            "base": {
                "pulse": { "carrier_thz": -1.0, "sigma_fs": 50.0 },
                "kernel": { "kind": "pec_sphere", "radius_um": 0.0 },
                "velocity": { "beta_x": 0.9, "beta_y": 0.9 },
                "sampling": { "window_half_width_fs": 100.0, "n_samples": 1000 }
            },
            "sweep_velocities": [],
            "jobs": 0
        }"#;
        match parse(text).unwrap().validate(true) {
            Err(CliError::Validation(v)) => assert!(v.len() >= 7, "{v:#?}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = format!(r#"{{ "schema_version": 1, {BASE}, "sweep_velocitys": [] }}"#);
        assert!(matches!(parse(&text), Err(CliError::Parse { .. })));
        let text = r#"{ "schema_version": 1, "base": {
            "pulse": { "carrier_thz": 20.0, "sigma_fs": 50.0, "sigma_ps": 1.0 },
            "kernel": { "kind": "flat_mirror" } } }"#;
        match parse(text) {
            Err(CliError::Parse { field, line, .. }) => {
                assert_eq!(field, "base.pulse.sigma_ps");
                assert_eq!(line, 2);
            }
            other => panic!("{other:?}"),
        }
        let text = r#"{ "schema_version": 1, "base": {
            "pulse": { "carrier_thz": 20.0, "sigma_fs": 50.0 },
            "kernel": { "kind": "pec_sphere", "radius_um": 1.0, "colour": "red" } } }"#;
        assert!(matches!(parse(text), Err(CliError::Parse { .. })));
    }

    #[test]
    fn sweep_nesting_order() {
        let text = format!(
            r#"{{ "schema_version": 1, {BASE},
                "sweep_velocities": [{{}}, {{ "beta_x": 0.2 }}],
                "sweep_kernels": [{{ "kind": "flat_mirror" }}, {{ "kind": "pec_sphere", "radius_um": 2.0 }}],
                "sweep_orientations": [{{ "x": 1, "y": 0, "z": 0 }}, {{ "x": 0, "y": 1, "z": 0 }}, {{ "x": 0, "y": 0, "z": 1 }}]
            }}"#
        );
        let rows = parse(&text).unwrap().validate(true).unwrap().scenarios();
        assert_eq!(rows.len(), 12);
        assert_eq!(rows[0].kernel.name(), "flat_mirror");
        assert_eq!(rows[1].velocity.beta()[0], 0.2);
        assert_eq!(rows[2].orientation, Vector3::y());
        assert_eq!(rows[6].kernel.radius(), Some(2.0e-6));
    }
}
