//! Pure Lorentz boosts of free-space plane waves between the radar frame K'
//! and the target rest frame K.
//!
//! The two frames share axes and origin at t = t' = 0. A [`BoostVelocity`]
//! is the target velocity measured in K'; boosting with it maps K' quantities
//! to K, and boosting with [`BoostVelocity::inverse`] maps them back.

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::{Error, Result};

/// Speed of light in vacuum, m/s (exact).
pub const C: f64 = 299_792_458.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostVelocity {
    beta: Vector3<f64>,
    gamma: f64,
}

impl BoostVelocity {
    pub fn new(beta: Vector3<f64>) -> Result<Self> {
        let b2 = beta.norm_squared();
        if !(b2 < 1.0) {
            return Err(Error::SuperluminalVelocity(b2.sqrt()));
        }
        Ok(BoostVelocity {
            beta,
            gamma: 1.0 / (1.0 - b2).sqrt(),
        })
    }

    pub fn from_components(bx: f64, by: f64, bz: f64) -> Result<Self> {
        Self::new(Vector3::new(bx, by, bz))
    }

    pub fn rest() -> Self {
        BoostVelocity {
            beta: Vector3::zeros(),
            gamma: 1.0,
        }
    }

    pub fn beta(&self) -> &Vector3<f64> {
        &self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn is_rest(&self) -> bool {
        self.beta == Vector3::zeros()
    }

    pub fn inverse(&self) -> Self {
        BoostVelocity {
            beta: -self.beta,
            gamma: self.gamma,
        }
    }

    /// (gamma - 1) / beta^2 written so it stays finite as beta -> 0.
    fn coupling(&self) -> f64 {
        self.gamma * self.gamma / (self.gamma + 1.0)
    }
}

/// Angular frequency and wave vector of a free-space wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourWaveVector {
    /// rad/s.
    pub omega: f64,
    /// rad/m.
    pub k: Vector3<f64>,
}

impl FourWaveVector {
    /// Wave of angular frequency `omega` travelling along `direction`.
    pub fn along(omega: f64, direction: &Vector3<f64>) -> Self {
        FourWaveVector {
            omega,
            k: direction.normalize() * (omega / C),
        }
    }

    pub fn direction(&self) -> Vector3<f64> {
        self.k.normalize()
    }

    /// `(|k| - omega/c) / (omega/c)`.
    pub fn null_residual(&self) -> f64 {
        let k0 = self.omega / C;
        (self.k.norm() - k0) / k0
    }
}

/// Transform a wave four-vector from K' into the frame moving with `v`.
pub fn boost_wave(wave: &FourWaveVector, v: &BoostVelocity) -> FourWaveVector {
    if v.is_rest() {
        return *wave;
    }
    let b = &v.beta;
    let bk = b.dot(&wave.k);
    let omega = v.gamma * (wave.omega - C * bk);
    let k = wave.k + b * (v.coupling() * bk - v.gamma * wave.omega / C);
    FourWaveVector { omega, k }
}

fn cross_real(b: &Vector3<f64>, f: &Vector3<Complex64>) -> Vector3<Complex64> {
    Vector3::new(
        f[2] * b[1] - f[1] * b[2],
        f[0] * b[2] - f[2] * b[0],
        f[1] * b[0] - f[0] * b[1],
    )
}

/// Transform complex field amplitudes into the frame moving with `v`.
///
/// `h` is the magnetic field in electric-field units, `c B` (equivalently
/// `eta0 H` in free space). Components along `beta` are unchanged; the
/// perpendicular parts become `gamma (E + beta x cB)` and `gamma (cB - beta x E)`.
pub fn boost_fields(
    e: &Vector3<Complex64>,
    h: &Vector3<Complex64>,
    v: &BoostVelocity,
) -> (Vector3<Complex64>, Vector3<Complex64>) {
    if v.is_rest() {
        return (*e, *h);
    }
    let b = &v.beta;
    let g = v.gamma;
    let b2 = b.norm_squared();
    let parallel = |f: &Vector3<Complex64>| {
        let along = f[0] * b[0] + f[1] * b[1] + f[2] * b[2];
        b.map(|bi| along * (bi / b2))
    };
    let e_par = parallel(e);
    let h_par = parallel(h);
    let g = Complex64::from(g);
    let e_k = e_par + (e - e_par + cross_real(b, h)) * g;
    let h_k = h_par + (h - h_par - cross_real(b, e)) * g;
    (e_k, h_k)
}

/// Propagation direction in K of a wave travelling along `direction` in K'.
pub fn aberrate_direction(direction: &Vector3<f64>, v: &BoostVelocity) -> Vector3<f64> {
    if v.is_rest() {
        return *direction;
    }
    boost_wave(&FourWaveVector::along(1.0, direction), v).direction()
}

/// Ratio of received to transmitted frequency after elastic scattering in K.
///
/// The outbound leg along `incidence` contributes `gamma (1 - beta.i)`; the
/// return leg, which arrives along `observation` in K', contributes
/// `1 / (gamma (1 - beta.o))`.
pub fn two_way_doppler_factor(
    v: &BoostVelocity,
    incidence: &Vector3<f64>,
    observation: &Vector3<f64>,
) -> f64 {
    if v.is_rest() {
        return 1.0;
    }
    (1.0 - v.beta.dot(incidence)) / (1.0 - v.beta.dot(observation))
}

/// Complex field vector `a * u` for a real direction `u`.
pub fn scaled(u: &Vector3<f64>, a: Complex64) -> Vector3<Complex64> {
    u.map(|x| a * x)
}
