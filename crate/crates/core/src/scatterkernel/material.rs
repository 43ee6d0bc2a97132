//! Lorentz phonon-oscillator permittivity.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::{Error, Result};

/// Single transverse-optical phonon resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialModel {
    /// High-frequency permittivity.
    pub eps_inf: f64,
    /// Transverse optical phonon angular frequency, rad/s.
    pub omega_t: f64,
    /// Longitudinal optical phonon angular frequency, rad/s.
    pub omega_l: f64,
    /// Damping rate, rad/s.
    pub damping: f64,
}

impl MaterialModel {
    pub fn new(eps_inf: f64, omega_t: f64, omega_l: f64, damping: f64) -> Result<Self> {
        let m = MaterialModel {
            eps_inf,
            omega_t,
            omega_l,
            damping,
        };
        m.validate()?;
        Ok(m)
    }

    /// Silicon carbide: eps_inf 6.7, TO 23.79 THz, LO 29.07 THz, damping 0.1428 THz.
    pub fn silicon_carbide() -> Self {
        MaterialModel {
            eps_inf: 6.7,
            omega_t: TAU * 23.79e12,
            omega_l: TAU * 29.07e12,
            damping: TAU * 0.1428e12,
        }
    }

    /// Every violated invariant, in field order.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.eps_inf >= 1.0 && self.eps_inf.is_finite()) {
            out.push(format!("eps_inf must be >= 1, got {}", self.eps_inf));
        }
        if !(self.omega_t > 0.0 && self.omega_t.is_finite()) {
            out.push(format!("omega_t must be positive, got {}", self.omega_t));
        }
        if !(self.omega_l > self.omega_t && self.omega_l.is_finite()) {
            out.push(format!(
                "omega_l ({}) must exceed omega_t ({})",
                self.omega_l, self.omega_t
            ));
        }
        if !(self.damping >= 0.0 && self.damping.is_finite()) {
            out.push(format!("damping must be >= 0, got {}", self.damping));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidMaterial(v.join("; ")))
        }
    }

    /// Zero-frequency limit `eps_inf (omega_l / omega_t)^2`.
    pub fn static_permittivity(&self) -> f64 {
        self.eps_inf * (self.omega_l / self.omega_t).powi(2)
    }
}

/// `eps_inf (wL^2 - w^2 - i g w) / (wT^2 - w^2 - i g w)`; `Im > 0` is loss.
pub fn permittivity(material: &MaterialModel, omega: f64) -> Result<Complex64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::NonPositiveFrequency(omega));
    }
    if material.damping == 0.0 && (omega - material.omega_t).abs() <= 1e-12 * material.omega_t {
        return Err(Error::PoleAtResonance(material.omega_t));
    }
    let w2 = omega * omega;
    let loss = Complex64::new(0.0, -material.damping * omega);
    let num = Complex64::from(material.omega_l * material.omega_l - w2) + loss;
    let den = Complex64::from(material.omega_t * material.omega_t - w2) + loss;
    Ok(num / den * material.eps_inf)
}
