//! Plane-wave line decomposition of sampled signals and direct-summation
//! synthesis at arbitrary (possibly off-grid) line frequencies.

use std::f64::consts::TAU;

use nalgebra::Vector3;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::signal::{check_power_of_two, SampledSignal};
use crate::{Error, Result};

/// One monochromatic plane-wave component.
///
/// Contributes `Re(amplitude * exp(-i 2 pi frequency t))` to the field along
/// `pol_e`, with `t` the absolute time of the radar frame.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralLine {
    /// Hz.
    pub frequency: f64,
    pub amplitude: Complex64,
    pub direction: Vector3<f64>,
    pub pol_e: Vector3<f64>,
    pub pol_h: Vector3<f64>,
}

impl SpectralLine {
    pub fn omega(&self) -> f64 {
        TAU * self.frequency
    }
}

/// One-sided spectrum of a real signal of `base_count` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub lines: Vec<SpectralLine>,
    pub base_sample_interval: f64,
    pub base_count: usize,
}

impl Spectrum {
    /// Energy the lines carry on their original grid, i.e. the sum of squared
    /// samples of the signal they reconstruct.
    pub fn energy(&self) -> f64 {
        let nyquist = self.base_count / 2;
        let n = self.base_count as f64;
        self.lines
            .iter()
            .enumerate()
            .map(|(k, l)| {
                let w = if k == 0 || k == nyquist { 1.0 } else { 0.5 };
                w * n * l.amplitude.norm_sqr()
            })
            .sum()
    }

    /// Fraction of the energy held by the zero-frequency line.
    pub fn dc_fraction(&self) -> f64 {
        let total = self.energy();
        if total == 0.0 {
            return 0.0;
        }
        self.base_count as f64 * self.lines[0].amplitude.norm_sqr() / total
    }

    /// Same lines with every frequency multiplied by `factor`.
    pub fn scale_frequencies(mut self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::NonPositiveFactor(factor));
        }
        for l in &mut self.lines {
            l.frequency *= factor;
        }
        Ok(self)
    }

    /// Index of the line with the largest amplitude.
    pub fn peak_index(&self) -> usize {
        self.lines
            .iter()
            .enumerate()
            .fold((0, -1.0), |(bi, bv), (i, l)| {
                let v = l.amplitude.norm();
                if v > bv {
                    (i, v)
                } else {
                    (bi, bv)
                }
            })
            .0
    }
}

const GEOMETRY_TOL: f64 = 1e-9;

fn check_unit(v: &Vector3<f64>, what: &str) -> Result<()> {
    if !((v.norm() - 1.0).abs() <= GEOMETRY_TOL) {
        return Err(Error::Geometry(format!("{what} is not a unit vector")));
    }
    Ok(())
}

/// Decompose a real signal into N/2 + 1 plane-wave lines travelling along
/// `direction` with electric field along `pol_e`.
pub fn forward_transform(
    signal: &SampledSignal,
    direction: &Vector3<f64>,
    pol_e: &Vector3<f64>,
) -> Result<Spectrum> {
    let n = signal.len();
    check_power_of_two(n)?;
    check_unit(direction, "propagation direction")?;
    check_unit(pol_e, "polarization")?;
    if direction.dot(pol_e).abs() > GEOMETRY_TOL {
        return Err(Error::Geometry(
            "polarization is not orthogonal to the propagation direction".into(),
        ));
    }
    let pol_h = direction.cross(pol_e);

    let mut buf: Vec<Complex64> = signal.samples.iter().map(|&s| Complex64::from(s)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let period = n as f64 * signal.sample_interval;
    let nyquist = n / 2;
    let lines = (0..=nyquist)
        .map(|k| {
            let frequency = k as f64 / period;
            let weight = if k == 0 || k == nyquist { 1.0 } else { 2.0 };
            let mut x = buf[k];
            if k == 0 || k == nyquist {
                x.im = 0.0;
            }
            // s_n = sum_k Re(A_k exp(-i w_k t_n)) with t_n measured from t = 0
            let shift = Complex64::from_polar(1.0, TAU * frequency * signal.start_time);
            let amplitude = if k == 0 {
                x * (weight / n as f64)
            } else {
                x.conj() * shift * (weight / n as f64)
            };
            SpectralLine {
                frequency,
                amplitude,
                direction: *direction,
                pol_e: *pol_e,
                pol_h,
            }
        })
        .collect();
    Ok(Spectrum {
        lines,
        base_sample_interval: signal.sample_interval,
        base_count: n,
    })
}

/// Evaluate the line sum at one instant. Lines are added in index order.
pub fn evaluate(spectrum: &Spectrum, t: f64) -> f64 {
    spectrum
        .lines
        .iter()
        .map(|l| {
            let (s, c) = (l.omega() * t).sin_cos();
            // Re(A exp(-i phi)) = A.re cos(phi) + A.im sin(phi)
            l.amplitude.re * c + l.amplitude.im * s
        })
        .sum()
}

/// Sum the lines at each of `times` (uniformly spaced).
///
/// Lines are summed directly, so they may sit anywhere in frequency, which is
/// what the Doppler-mapped spectra need. Blocks of samples are computed
/// concurrently; each sample accumulates its lines in index order, so the
/// result does not depend on the thread count.
pub fn synthesize(spectrum: &Spectrum, times: &[f64]) -> Result<SampledSignal> {
    if times.len() < 2 {
        return Err(Error::InvalidSignal(
            "need at least two sample times".into(),
        ));
    }
    let dt = times[1] - times[0];
    let uniform = times.windows(2).all(|w| {
        let step = w[1] - w[0];
        (step - dt).abs() <= 1e-9 * dt.abs()
    });
    if !uniform || !(dt > 0.0) {
        return Err(Error::InvalidSignal(
            "synthesis times must be increasing and uniformly spaced".into(),
        ));
    }
    let mut samples = vec![0.0; times.len()];
    samples
        .par_chunks_mut(BLOCK)
        .enumerate()
        .for_each(|(b, out)| synthesize_block(spectrum, &times[b * BLOCK..], dt, out));
    SampledSignal::new(times[0], dt, samples)
}

const BLOCK: usize = 64;

// Each line's phasor is anchored exactly at the block's first sample and then
// advanced by a fixed rotation, which keeps the drift to a few ulps per block.
fn synthesize_block(spectrum: &Spectrum, times: &[f64], dt: f64, out: &mut [f64]) {
    let t0 = times[0];
    for l in &spectrum.lines {
        let w = l.omega();
        let (s, c) = (w * t0).sin_cos();
        let (ss, cs) = (w * dt).sin_cos();
        // Re(A exp(-i w t)) with z = A exp(-i w t)
        let mut z = l.amplitude * Complex64::new(c, -s);
        let step = Complex64::new(cs, -ss);
        for o in out.iter_mut() {
            *o += z.re;
            z *= step;
        }
    }
}

/// Synthesize on `start + n * dt`, n = 0..count.
pub fn synthesize_grid(
    spectrum: &Spectrum,
    start: f64,
    dt: f64,
    count: usize,
) -> Result<SampledSignal> {
    let times: Vec<f64> = (0..count).map(|n| start + n as f64 * dt).collect();
    let mut out = synthesize(spectrum, &times)?;
    out.sample_interval = dt;
    Ok(out)
}

/// `|sum s_n^2 - E(spectrum)| / sum s_n^2`; zero for an all-zero signal.
pub fn parseval_check(signal: &SampledSignal, spectrum: &Spectrum) -> f64 {
    let time_energy = signal.energy();
    if time_energy == 0.0 {
        return 0.0;
    }
    (time_energy - spectrum.energy()).abs() / time_energy
}
