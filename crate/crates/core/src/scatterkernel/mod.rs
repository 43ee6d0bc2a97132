//! Far-field scattering response of the target at rest.
//!
//! Amplitudes follow the usual S1/S2 convention: with `e_perp` normal to the
//! scattering plane and `e_par` in it, the scattered far field is
//! `exp(ikr)/(-ikr) * [S2 E_par e_par_s + S1 E_perp e_perp]`.

mod material;
mod mie;

use std::f64::consts::PI;

use num_complex::Complex64;

pub use material::{permittivity, MaterialModel};
pub use mie::{
    amplitude_sums, angular_functions, default_order, efficiency_sums, mie_coefficients,
    pec_mie_coefficients,
};

use crate::relativity::C;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    /// Frequency- and angle-independent reflector, S1 = S2 = reflectivity.
    FlatMirror { reflectivity: Complex64 },
    /// Perfectly conducting sphere of the given radius (m).
    PecSphere { radius: f64 },
    /// Homogeneous Lorentz-oscillator sphere.
    DielectricSphere {
        radius: f64,
        material: MaterialModel,
    },
}

impl KernelSpec {
    pub fn flat_mirror() -> Self {
        KernelSpec::FlatMirror {
            reflectivity: Complex64::new(1.0, 0.0),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::FlatMirror { .. } => "flat_mirror",
            KernelSpec::PecSphere { .. } => "pec_sphere",
            KernelSpec::DielectricSphere { .. } => "dielectric_sphere",
        }
    }

    pub fn radius(&self) -> Option<f64> {
        match *self {
            KernelSpec::FlatMirror { .. } => None,
            KernelSpec::PecSphere { radius } | KernelSpec::DielectricSphere { radius, .. } => {
                Some(radius)
            }
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            KernelSpec::FlatMirror { reflectivity } => {
                if !(reflectivity.re.is_finite() && reflectivity.im.is_finite()) {
                    out.push("mirror reflectivity must be finite".to_string());
                }
            }
            KernelSpec::PecSphere { radius } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    out.push(format!("sphere radius must be positive, got {radius}"));
                }
            }
            KernelSpec::DielectricSphere { radius, material } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    out.push(format!("sphere radius must be positive, got {radius}"));
                }
                out.extend(material.violations());
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidKernel(v.join("; ")))
        }
    }

    /// Size parameter `omega a / c` for sphere kernels.
    pub fn size_parameter(&self, omega: f64) -> Option<f64> {
        self.radius().map(|r| omega * r / C)
    }

    /// Frequency-dependent part of the spherical-wave prefactor, `1/(-i x)`
    /// for spheres (range and radius dropped), 1 for the mirror.
    pub fn far_field_factor(&self, omega: f64) -> Complex64 {
        match self.size_parameter(omega) {
            None => Complex64::new(1.0, 0.0),
            Some(x) => Complex64::new(0.0, 1.0 / x),
        }
    }

    /// Coefficients a_n, b_n at angular frequency `omega`, or `None` for the mirror.
    pub fn coefficients(&self, omega: f64) -> Result<Option<(Vec<Complex64>, Vec<Complex64>)>> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::NonPositiveFrequency(omega));
        }
        match self {
            KernelSpec::FlatMirror { .. } => Ok(None),
            KernelSpec::PecSphere { radius } => {
                let x = omega * radius / C;
                pec_mie_coefficients(x, default_order(x)).map(Some)
            }
            KernelSpec::DielectricSphere { radius, material } => {
                let x = omega * radius / C;
                let m = permittivity(material, omega)?.sqrt();
                mie_coefficients(x, m, default_order(x)).map(Some)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterAmplitude {
    /// Perpendicular polarization.
    pub s1: Complex64,
    /// Parallel polarization.
    pub s2: Complex64,
    /// Radians.
    pub scattering_angle: f64,
}

pub fn scattering_amplitude(
    kernel: &KernelSpec,
    omega_k: f64,
    theta: f64,
) -> Result<ScatterAmplitude> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::InvalidAngle(theta));
    }
    let (s1, s2) = match (kernel, kernel.coefficients(omega_k)?) {
        (KernelSpec::FlatMirror { reflectivity }, _) => (*reflectivity, *reflectivity),
        (_, Some((a, b))) => amplitude_sums(&a, &b, theta.cos()),
        (_, None) => unreachable!("sphere kernels always produce coefficients"),
    };
    Ok(ScatterAmplitude {
        s1,
        s2,
        scattering_angle: theta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Efficiencies {
    pub q_ext: f64,
    pub q_sca: f64,
    pub q_abs: f64,
}

/// Extinction, scattering and absorption efficiencies of a sphere kernel.
pub fn efficiencies(kernel: &KernelSpec, omega_k: f64) -> Result<Efficiencies> {
    let x = kernel
        .size_parameter(omega_k)
        .ok_or_else(|| Error::InvalidKernel("efficiencies need a sphere kernel".into()))?;
    let (a, b) = kernel.coefficients(omega_k)?.expect("sphere");
    let (q_ext, q_sca) = efficiency_sums(x, &a, &b);
    Ok(Efficiencies {
        q_ext,
        q_sca,
        q_abs: q_ext - q_sca,
    })
}

/// `|Q_ext - (4/x^2) Re S(0)| / Q_ext`.
pub fn optical_theorem_residual(kernel: &KernelSpec, omega_k: f64) -> Result<f64> {
    let x = kernel
        .size_parameter(omega_k)
        .ok_or_else(|| Error::InvalidKernel("optical theorem needs a sphere kernel".into()))?;
    let q = efficiencies(kernel, omega_k)?;
    let forward = scattering_amplitude(kernel, omega_k, 0.0)?;
    Ok((q.q_ext - 4.0 / (x * x) * forward.s1.re).abs() / q.q_ext)
}
