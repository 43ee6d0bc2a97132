//! Transmitted pulse synthesis and uniformly sampled real signals.

use std::f64::consts::TAU;

use nalgebra::Vector3;

use crate::spectral;
use crate::{Error, Result};

/// Gaussian-modulated carrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    /// Carrier frequency, Hz.
    pub carrier_frequency: f64,
    /// Gaussian width parameter sigma, s.
    pub width: f64,
    /// Pulse centre, s.
    pub delay: f64,
    pub amplitude: f64,
}

impl PulseSpec {
    /// Unit-amplitude pulse centred on t = 0.
    pub fn new(carrier_frequency: f64, width: f64) -> Result<Self> {
        let spec = PulseSpec {
            carrier_frequency,
            width,
            delay: 0.0,
            amplitude: 1.0,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// 20 THz carrier under a 50 fs envelope.
    pub fn terahertz() -> Self {
        PulseSpec::new(20.0e12, 50.0e-15).unwrap()
    }

    /// 20 GHz carrier under a 50 ns envelope.
    pub fn gigahertz() -> Self {
        PulseSpec::new(20.0e9, 50.0e-9).unwrap()
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(self.carrier_frequency) {
            return Err(Error::InvalidPulse(format!(
                "carrier frequency must be positive, got {}",
                self.carrier_frequency
            )));
        }
        if !ok(self.width) {
            return Err(Error::InvalidPulse(format!(
                "width must be positive, got {}",
                self.width
            )));
        }
        if !ok(self.amplitude) {
            return Err(Error::InvalidPulse(format!(
                "amplitude must be positive, got {}",
                self.amplitude
            )));
        }
        if !self.delay.is_finite() {
            return Err(Error::InvalidPulse("delay must be finite".into()));
        }
        Ok(())
    }

    /// Default sampling window half-width, 8 sigma.
    pub fn default_window(&self) -> f64 {
        8.0 * self.width
    }
}

/// `A exp(-(t - t0)^2 / (2 sigma^2)) cos(2 pi nu (t - t0))`.
pub fn gaussian_carrier(spec: &PulseSpec, t: f64) -> f64 {
    let dt = t - spec.delay;
    let envelope = (-(dt * dt) / (2.0 * spec.width * spec.width)).exp();
    spec.amplitude * envelope * (TAU * spec.carrier_frequency * dt).cos()
}

/// Real samples on the grid `start_time + n * sample_interval`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    pub start_time: f64,
    pub sample_interval: f64,
    pub samples: Vec<f64>,
}

impl SampledSignal {
    pub fn new(start_time: f64, sample_interval: f64, samples: Vec<f64>) -> Result<Self> {
        if !(sample_interval.is_finite() && sample_interval > 0.0) {
            return Err(Error::InvalidSignal(format!(
                "sample interval must be positive, got {sample_interval}"
            )));
        }
        if !start_time.is_finite() {
            return Err(Error::InvalidSignal("start time must be finite".into()));
        }
        if samples.len() < 2 {
            return Err(Error::InvalidSignal(format!(
                "need at least 2 samples, got {}",
                samples.len()
            )));
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::InvalidSignal(format!("sample {i} is not finite")));
        }
        Ok(SampledSignal {
            start_time,
            sample_interval,
            samples,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, n: usize) -> f64 {
        self.start_time + n as f64 * self.sample_interval
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|n| self.time(n)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, s| m.max(s.abs()))
    }

    /// Sum of squared samples.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s * s).sum()
    }
}

pub(crate) fn check_power_of_two(n: usize) -> Result<()> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    Ok(())
}

/// Sample `spec` at `n_samples` points covering `[t0 - W, t0 + W)`.
pub fn sample_pulse(
    spec: &PulseSpec,
    window_half_width: f64,
    n_samples: usize,
) -> Result<SampledSignal> {
    spec.validate()?;
    check_power_of_two(n_samples)?;
    let min = 6.0 * spec.width;
    // allow W = 6 sigma up to rounding in the caller's arithmetic
    if !(window_half_width >= min * (1.0 - 1e-12)) {
        return Err(Error::WindowTooNarrow {
            window: window_half_width,
            min,
        });
    }
    let dt = 2.0 * window_half_width / n_samples as f64;
    let start = spec.delay - window_half_width;
    let samples = (0..n_samples)
        .map(|n| gaussian_carrier(spec, start + n as f64 * dt))
        .collect();
    SampledSignal::new(start, dt, samples)
}

/// Resample `s(factor * t)` onto the signal's own grid.
///
/// Goes through the line spectrum: every line frequency is multiplied by
/// `factor` and the result is summed directly at the original sample times,
/// so there is no interpolation kernel involved. Content pushed above the
/// Nyquist frequency aliases, and content stretched past the window wraps.
pub fn rescale_time_axis(signal: &SampledSignal, factor: f64) -> Result<SampledSignal> {
    if !(factor.is_finite() && factor > 0.0) {
        return Err(Error::NonPositiveFactor(factor));
    }
    if factor == 1.0 {
        return Ok(signal.clone());
    }
    let spectrum = spectral::forward_transform(signal, &Vector3::z(), &Vector3::x())?
        .scale_frequencies(factor)?;
    spectral::synthesize(&spectrum, &signal.times())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn peak_and_half_period() {
        let p = PulseSpec::terahertz();
        assert_eq!(gaussian_carrier(&p, 0.0), 1.0);
        let v = gaussian_carrier(&p, 25.0e-15);
        assert_relative_eq!(v, -(-0.125f64).exp(), max_relative = 1e-12);
        assert_relative_eq!(v, -0.8825, epsilon = 5e-5);
        assert_eq!(gaussian_carrier(&PulseSpec::gigahertz(), 0.0), 1.0);
    }

    #[test]
    fn even_symmetry() {
        let p = PulseSpec::terahertz();
        for k in 1..50 {
            let d = k as f64 * 3.7e-15;
            assert_eq!(gaussian_carrier(&p, d), gaussian_carrier(&p, -d));
        }
        // off-origin centres round t - t0, so only near-exact
        let mut q = p;
        q.delay = 3.0e-14;
        for k in 1..50 {
            let d = k as f64 * 3.7e-15;
            let (a, b) = (
                gaussian_carrier(&q, q.delay + d),
                gaussian_carrier(&q, q.delay - d),
            );
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn sampled_grid() {
        let p = PulseSpec::terahertz();
        let s = sample_pulse(&p, 400e-15, 4096).unwrap();
        assert_relative_eq!(s.sample_interval, 800e-15 / 4096.0, max_relative = 1e-15);
        assert_eq!(s.samples[2048], 1.0);
        assert_eq!(s.start_time, -400e-15);
    }

    #[test]
    fn energy_matches_gaussian_integral() {
        let p = PulseSpec::terahertz();
        let s = sample_pulse(&p, 400e-15, 4096).unwrap();
        let sigma = p.width;
        let carrier = (TAU * p.carrier_frequency * sigma).powi(2);
        let expect = sigma * std::f64::consts::PI.sqrt() / 2.0 * (1.0 + (-carrier).exp());
        assert_relative_eq!(s.energy() * s.sample_interval, expect, max_relative = 1e-10);
        assert_relative_eq!(expect, 4.4311e-14, max_relative = 1e-4);
    }

    #[test]
    fn window_guards() {
        let p = PulseSpec::terahertz();
        assert!(matches!(
            sample_pulse(&p, 100e-15, 4096),
            Err(Error::WindowTooNarrow { .. })
        ));
        assert!(matches!(
            sample_pulse(&p, 400e-15, 3000),
            Err(Error::NotPowerOfTwo(3000))
        ));
        assert!(matches!(
            sample_pulse(&p, 400e-15, 1),
            Err(Error::NotPowerOfTwo(1))
        ));
    }

    #[test]
    fn confinement_at_six_sigma() {
        let p = PulseSpec::terahertz();
        let s = sample_pulse(&p, 6.0 * p.width, 1024).unwrap();
        let bound = (-18.0f64).exp() * p.amplitude * (1.0 + 1e-12);
        assert!(s.samples[0].abs() <= bound);
        // the grid is half-open, so the last sample sits one interval inside +W
        let inner = 6.0 * p.width - s.sample_interval;
        let last_bound = (-(inner * inner) / (2.0 * p.width * p.width)).exp() * (1.0 + 1e-12);
        assert!(s.samples[1023].abs() <= last_bound);
        assert!(s.samples[1023].abs() <= 1.1 * bound);
    }

    #[test]
    fn invalid_pulses() {
        assert!(PulseSpec::new(0.0, 1e-15).is_err());
        assert!(PulseSpec::new(1e12, -1e-15).is_err());
        let mut p = PulseSpec::terahertz();
        p.amplitude = 0.0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn signal_validation() {
        assert!(SampledSignal::new(0.0, 0.0, vec![1.0, 2.0]).is_err());
        assert!(SampledSignal::new(0.0, 1.0, vec![1.0]).is_err());
        assert!(SampledSignal::new(0.0, 1.0, vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn rescale_identity_and_tone() {
        let n = 64;
        let dt = 1.0 / 16.0;
        let tone: Vec<f64> = (0..n).map(|i| (TAU * i as f64 * dt).cos()).collect();
        let s = SampledSignal::new(0.0, dt, tone).unwrap();
        assert_eq!(rescale_time_axis(&s, 1.0).unwrap(), s);
        let doubled = rescale_time_axis(&s, 2.0).unwrap();
        for (i, v) in doubled.samples.iter().enumerate() {
            assert!((v - (2.0 * TAU * i as f64 * dt).cos()).abs() < 1e-12);
        }
        assert!(matches!(
            rescale_time_axis(&s, 0.0),
            Err(Error::NonPositiveFactor(_))
        ));
        assert!(matches!(
            rescale_time_axis(&s, -1.0),
            Err(Error::NonPositiveFactor(_))
        ));
    }
}
