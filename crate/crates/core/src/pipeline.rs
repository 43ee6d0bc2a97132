//! Frame-hopping backscatter simulation, Doppler removal and lag-maximized
//! Pearson correlation.

use nalgebra::Vector3;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::relativity::{
    aberrate_direction, boost_fields, boost_wave, scaled, two_way_doppler_factor, BoostVelocity,
    FourWaveVector,
};
use crate::scatterkernel::{scattering_amplitude, KernelSpec, ScatterAmplitude};
use crate::signal::{sample_pulse, PulseSpec, SampledSignal};
use crate::spectral::{forward_transform, synthesize, synthesize_grid, SpectralLine, Spectrum};
use crate::{Error, Result};

/// Lines whose return frequency deviates from `D * omega'` by more than this
/// (relative) indicate a geometry bug.
pub const DOPPLER_CONSTANCY_TOL: f64 = 1e-9;

/// Below this `|i x o|` the scattering plane is treated as degenerate.
const COLLINEAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingConfig {
    /// Half-width W of the sampling window, s.
    pub window_half_width: f64,
    pub n_samples: usize,
}

impl SamplingConfig {
    /// W = 8 sigma, N = 4096.
    pub fn default_for(pulse: &PulseSpec) -> Self {
        SamplingConfig {
            window_half_width: pulse.default_window(),
            n_samples: 4096,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LagScanConfig {
    /// Largest |lag| in samples; `None` scans to N/2 - 1.
    pub max_lag: Option<usize>,
    /// Also report a parabolic sub-sample estimate of the peak.
    pub refine: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub pulse: PulseSpec,
    pub velocity: BoostVelocity,
    pub kernel: KernelSpec,
    /// Target orientation. Carried through to reports; sphere kernels ignore it.
    pub orientation: Vector3<f64>,
    pub incidence_direction: Vector3<f64>,
    pub observation_direction: Vector3<f64>,
    pub sampling: SamplingConfig,
    pub lag_scan: LagScanConfig,
}

impl ScenarioConfig {
    /// Transmit along +z', receive along -z', default sampling and lag scan.
    pub fn new(pulse: PulseSpec, velocity: BoostVelocity, kernel: KernelSpec) -> Self {
        ScenarioConfig {
            sampling: SamplingConfig::default_for(&pulse),
            pulse,
            velocity,
            kernel,
            orientation: Vector3::z(),
            incidence_direction: Vector3::z(),
            observation_direction: -Vector3::z(),
            lag_scan: LagScanConfig::default(),
        }
    }

    pub fn max_lag(&self) -> usize {
        self.lag_scan
            .max_lag
            .unwrap_or(self.sampling.n_samples / 2 - 1)
    }

    /// Every violated invariant.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Err(e) = self.pulse.validate() {
            out.push(e.to_string());
        }
        out.extend(self.kernel.violations());
        let unit = |v: &Vector3<f64>, what: &str, out: &mut Vec<String>| {
            if !((v.norm() - 1.0).abs() <= 1e-9) {
                out.push(format!("{what} must be a unit vector (|v| = {})", v.norm()));
            }
        };
        unit(&self.orientation, "orientation", &mut out);
        unit(&self.incidence_direction, "incidence direction", &mut out);
        unit(
            &self.observation_direction,
            "observation direction",
            &mut out,
        );
        let n = self.sampling.n_samples;
        if n < 2 || !n.is_power_of_two() {
            out.push(format!("n_samples {n} is not a power of two >= 2"));
        } else if self.max_lag() >= n / 2 {
            out.push(format!(
                "max_lag {} must be below N/2 = {}",
                self.max_lag(),
                n / 2
            ));
        }
        let min = 6.0 * self.pulse.width;
        if !(self.sampling.window_half_width >= min * (1.0 - 1e-12)) {
            out.push(format!(
                "window half-width {:e} s is narrower than 6 sigma ({:e} s)",
                self.sampling.window_half_width, min
            ));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSignal(v.join("; ")))
        }
    }

    /// Transmit polarization: x' projected off the incidence direction (y' if
    /// the two are parallel).
    pub fn transmit_polarization(&self) -> Vector3<f64> {
        transverse_to(&Vector3::x(), &self.incidence_direction)
    }

    /// Co-polarized receive direction for waves arriving along the
    /// observation direction.
    pub fn receive_polarization(&self) -> Vector3<f64> {
        transverse_to(&self.transmit_polarization(), &self.observation_direction)
    }
}

fn transverse_to(preferred: &Vector3<f64>, direction: &Vector3<f64>) -> Vector3<f64> {
    let d = direction.normalize();
    let p = preferred - d * preferred.dot(&d);
    if p.norm() > 1e-6 {
        p.normalize()
    } else {
        let alt = Vector3::y() - d * d.y;
        alt.normalize()
    }
}

/// Result of one frame-hopping simulation.
#[derive(Debug, Clone)]
pub struct Backscatter {
    /// Transmitted pulse f.
    pub transmitted: SampledSignal,
    /// Received lines before Doppler removal, at frequencies D * nu'.
    pub received_spectrum: Spectrum,
    /// Received signal before Doppler removal, sampled on the transmit grid
    /// dilated by 1/D so that the whole stretched or compressed return fits.
    pub received_raw: SampledSignal,
    pub doppler_factor: f64,
    /// Scattering angle in the rest frame, radians.
    pub rest_frame_angle: f64,
    pub warnings: Vec<String>,
}

/// Rest-frame scattering geometry shared by every line.
struct Geometry {
    observation: Vector3<f64>,
    theta: f64,
    /// (e_perp, e_par incident, e_par scattered), absent when collinear.
    basis: Option<(Vector3<f64>, Vector3<f64>, Vector3<f64>)>,
}

impl Geometry {
    fn new(incidence: Vector3<f64>, observation: Vector3<f64>) -> Self {
        let cos = incidence.dot(&observation).clamp(-1.0, 1.0);
        let normal = observation.cross(&incidence);
        let basis = (normal.norm() > COLLINEAR_TOL).then(|| {
            let perp = normal.normalize();
            (perp, incidence.cross(&perp), observation.cross(&perp))
        });
        Geometry {
            observation,
            theta: cos.acos(),
            basis,
        }
    }

    /// Scattered far-field polarization vector for incident field `e`.
    fn scatter(
        &self,
        e: &Vector3<Complex64>,
        amp: &ScatterAmplitude,
        ff: Complex64,
    ) -> Vector3<Complex64> {
        match &self.basis {
            // collinear limit: S1(pi) = -S2(pi), S1(0) = S2(0), polarization carried through
            None => {
                let t = amp.s1 * ff;
                e.map(|c| t * c)
            }
            Some((perp, par_i, par_s)) => {
                let proj = |u: &Vector3<f64>| e[0] * u[0] + e[1] * u[1] + e[2] * u[2];
                scaled(par_s, amp.s2 * ff * proj(par_i)) + scaled(perp, amp.s1 * ff * proj(perp))
            }
        }
    }
}

/// K' -> K -> scatter -> K' for every line of the transmitted pulse.
pub fn simulate_backscatter(config: &ScenarioConfig) -> Result<Backscatter> {
    config.validate()?;
    let v = &config.velocity;
    let back = v.inverse();
    let inc = config.incidence_direction.normalize();
    let obs = config.observation_direction.normalize();
    let pol_tx = config.transmit_polarization();
    let pol_rx = config.receive_polarization();
    let pol_rx_h = obs.cross(&pol_rx);

    let f = sample_pulse(
        &config.pulse,
        config.sampling.window_half_width,
        config.sampling.n_samples,
    )?;
    let spectrum = forward_transform(&f, &inc, &pol_tx)?;
    let mut warnings = Vec::new();
    let dc = spectrum.dc_fraction();
    if dc > 1e-6 {
        warnings.push(format!(
            "DC line holds {dc:.3e} of the pulse energy; it is scattered with the kernel value of the lowest positive frequency"
        ));
    }

    let d = two_way_doppler_factor(v, &inc, &obs);
    let geometry = Geometry::new(aberrate_direction(&inc, v), aberrate_direction(&obs, v));
    let lowest_rest_omega = spectrum
        .lines
        .get(1)
        .map(|l| boost_wave(&FourWaveVector::along(l.omega(), &inc), v).omega)
        .ok_or_else(|| Error::InvalidSignal("spectrum has no positive-frequency line".into()))?;

    let lines: Vec<(SpectralLine, f64)> = spectrum
        .lines
        .par_iter()
        .map(|line| {
            let omega_tx = line.omega();
            let e = scaled(&line.pol_e, line.amplitude);
            let h = scaled(&line.pol_h, line.amplitude);
            let (e_rest, _) = boost_fields(&e, &h, v);

            let (omega_rest, kernel_omega) = if omega_tx > 0.0 {
                let w = boost_wave(&FourWaveVector::along(omega_tx, &inc), v);
                (w.omega, w.omega)
            } else {
                (0.0, lowest_rest_omega)
            };
            let amp = scattering_amplitude(&config.kernel, kernel_omega, geometry.theta)?;
            let ff = config.kernel.far_field_factor(kernel_omega);
            let e_sca = geometry.scatter(&e_rest, &amp, ff);
            let h_sca = geometry.observation.map(Complex64::from).cross(&e_sca);
            let (e_rx, _) = boost_fields(&e_sca, &h_sca, &back);

            let (omega_rx, deviation) = if omega_tx > 0.0 {
                let w = boost_wave(
                    &FourWaveVector::along(omega_rest, &geometry.observation),
                    &back,
                );
                let dir_err = (w.direction() - obs).norm();
                let ratio_err = (w.omega / omega_tx - d).abs() / d;
                (w.omega, ratio_err.max(dir_err))
            } else {
                (0.0, 0.0)
            };
            let amplitude = e_rx[0] * pol_rx[0] + e_rx[1] * pol_rx[1] + e_rx[2] * pol_rx[2];
            Ok((
                SpectralLine {
                    // ratio form keeps the frequency bit-exact when the boosts are identities
                    frequency: if omega_tx > 0.0 {
                        line.frequency * (omega_rx / omega_tx)
                    } else {
                        0.0
                    },
                    amplitude,
                    direction: obs,
                    pol_e: pol_rx,
                    pol_h: pol_rx_h,
                },
                deviation,
            ))
        })
        .collect::<Result<_>>()?;

    let worst = lines.iter().fold(0.0f64, |m, (_, dev)| m.max(*dev));
    if !(worst <= DOPPLER_CONSTANCY_TOL) {
        return Err(Error::AssertionFailure(format!(
            "per-line Doppler ratio or return direction deviates by {worst:e}"
        )));
    }
    let received_spectrum = Spectrum {
        lines: lines.into_iter().map(|(l, _)| l).collect(),
        base_sample_interval: spectrum.base_sample_interval,
        base_count: spectrum.base_count,
    };
    let received_raw = synthesize_grid(
        &received_spectrum,
        f.start_time / d,
        f.sample_interval / d,
        f.len(),
    )?;
    Ok(Backscatter {
        transmitted: f,
        received_spectrum,
        received_raw,
        doppler_factor: d,
        rest_frame_angle: geometry.theta,
        warnings,
    })
}

/// Divide every line frequency by `doppler_factor`.
pub fn remove_doppler_spectrum(spectrum: &Spectrum, doppler_factor: f64) -> Result<Spectrum> {
    if !(doppler_factor.is_finite() && doppler_factor > 0.0) {
        return Err(Error::NonPositiveFactor(doppler_factor));
    }
    spectrum.clone().scale_frequencies(1.0 / doppler_factor)
}

/// Time-domain Doppler removal: `g(t) = g_raw(t / D)`, realized by relabelling
/// the time axis (every sample time multiplied by D). No interpolation; a raw
/// signal sampled on the dilated grid lands back on the transmit grid.
pub fn remove_doppler(g_raw: &SampledSignal, doppler_factor: f64) -> Result<SampledSignal> {
    if !(doppler_factor.is_finite() && doppler_factor > 0.0) {
        return Err(Error::NonPositiveFactor(doppler_factor));
    }
    if doppler_factor == 1.0 {
        return Ok(g_raw.clone());
    }
    SampledSignal::new(
        g_raw.start_time * doppler_factor,
        g_raw.sample_interval * doppler_factor,
        g_raw.samples.clone(),
    )
}

fn centered(x: &[f64]) -> (Vec<f64>, f64) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    let c: Vec<f64> = x.iter().map(|v| v - mean).collect();
    let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
    (c, norm)
}

fn pearson_slices(f: &[f64], g: &[f64]) -> Option<f64> {
    let (fc, fnorm) = centered(f);
    let (gc, gnorm) = centered(g);
    if fnorm == 0.0 || gnorm == 0.0 {
        return None;
    }
    let cov: f64 = fc.iter().zip(&gc).map(|(a, b)| a * b).sum();
    Some((cov / (fnorm * gnorm)).clamp(-1.0, 1.0))
}

/// Sample Pearson correlation coefficient of two equally long signals.
pub fn pearson(f: &SampledSignal, g: &SampledSignal) -> Result<f64> {
    if f.len() != g.len() {
        return Err(Error::LengthMismatch(f.len(), g.len()));
    }
    pearson_slices(&f.samples, &g.samples).ok_or(Error::DegenerateSignal)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    /// (lag in samples, rho), lags ascending from -max_lag.
    pub rho_by_lag: Vec<(i64, f64)>,
    /// Largest |rho| over all lags.
    pub rho_max: f64,
    pub best_lag: i64,
    pub rho_signed_at_best: f64,
    /// Parabolic sub-sample (lag, |rho|) peak estimate, when requested.
    pub refined_peak: Option<(f64, f64)>,
    pub doppler_factor: f64,
    /// Rest-frame scattering angle, radians.
    pub rest_frame_angle: Option<f64>,
    pub scenario: Option<ScenarioConfig>,
    pub warnings: Vec<String>,
}

fn shifted_into(f: &[f64], lag: i64, out: &mut [f64]) {
    let n = f.len() as i64;
    for (i, o) in out.iter_mut().enumerate() {
        let src = i as i64 - lag;
        *o = if (0..n).contains(&src) {
            f[src as usize]
        } else {
            0.0
        };
    }
}

/// Correlate `g` against copies of `f` delayed by every integer lag in
/// `[-max_lag, max_lag]` (zeros shifted in) and keep the largest |rho|.
///
/// Ties go to the smallest |lag|, then to the negative lag. A lag that moves
/// all of `f`'s variation out of the window scores 0.
pub fn max_abs_correlation(
    f: &SampledSignal,
    g: &SampledSignal,
    max_lag: usize,
    refine: bool,
) -> Result<CorrelationReport> {
    let n = f.len();
    if n != g.len() {
        return Err(Error::LengthMismatch(n, g.len()));
    }
    if max_lag >= n / 2 {
        return Err(Error::InvalidLag {
            max_lag,
            half: n / 2,
        });
    }
    pearson(f, g)?;
    let (gc, gnorm) = centered(&g.samples);
    let max_lag = max_lag as i64;
    let rho_by_lag: Vec<(i64, f64)> = (-max_lag..=max_lag)
        .into_par_iter()
        .map_init(
            || vec![0.0; n],
            |buf, lag| {
                shifted_into(&f.samples, lag, buf);
                let (fc, fnorm) = centered(buf);
                let rho = if fnorm == 0.0 {
                    0.0
                } else {
                    let cov: f64 = fc.iter().zip(&gc).map(|(a, b)| a * b).sum();
                    (cov / (fnorm * gnorm)).clamp(-1.0, 1.0)
                };
                (lag, rho)
            },
        )
        .collect();

    let at = |lag: i64| rho_by_lag[(lag + max_lag) as usize].1;
    let mut best_lag = 0;
    for step in 1..=max_lag {
        for lag in [-step, step] {
            if at(lag).abs() > at(best_lag).abs() {
                best_lag = lag;
            }
        }
    }
    let rho_signed_at_best = at(best_lag);
    let refined_peak = (refine && best_lag.abs() < max_lag).then(|| {
        let (ym, y0, yp) = (
            at(best_lag - 1).abs(),
            at(best_lag).abs(),
            at(best_lag + 1).abs(),
        );
        let curvature = ym - 2.0 * y0 + yp;
        if curvature == 0.0 {
            (best_lag as f64, y0)
        } else {
            let delta = 0.5 * (ym - yp) / curvature;
            (best_lag as f64 + delta, y0 - 0.25 * (ym - yp) * delta)
        }
    });
    Ok(CorrelationReport {
        rho_max: rho_signed_at_best.abs(),
        best_lag,
        rho_signed_at_best,
        refined_peak,
        rho_by_lag,
        doppler_factor: 1.0,
        rest_frame_angle: None,
        scenario: None,
        warnings: Vec::new(),
    })
}

/// Signals produced along the way by [`run_scenario_full`].
#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub backscatter: Backscatter,
    /// Received signal after Doppler removal, on the transmit grid.
    pub received: SampledSignal,
    pub report: CorrelationReport,
}

/// simulate -> remove Doppler (on the lines) -> lag-maximized correlation.
pub fn run_scenario_full(config: &ScenarioConfig) -> Result<ScenarioRun> {
    let backscatter = simulate_backscatter(config)?;
    let restored =
        remove_doppler_spectrum(&backscatter.received_spectrum, backscatter.doppler_factor)?;
    let f = &backscatter.transmitted;
    let received = synthesize(&restored, &f.times())?;
    let mut report = max_abs_correlation(f, &received, config.max_lag(), config.lag_scan.refine)?;
    report.doppler_factor = backscatter.doppler_factor;
    report.rest_frame_angle = Some(backscatter.rest_frame_angle);
    report.scenario = Some(config.clone());
    report.warnings = backscatter.warnings.clone();
    Ok(ScenarioRun {
        backscatter,
        received,
        report,
    })
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<CorrelationReport> {
    run_scenario_full(config).map(|r| r.report)
}
