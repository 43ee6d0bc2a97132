//! Core versus brute-force oracle comparisons behind `pulsecorr oracle`.

use std::fmt;

use pulsecorr_core::pipeline::{max_abs_correlation, pearson};
use pulsecorr_core::relativity::{two_way_doppler_factor, BoostVelocity};
use pulsecorr_core::scatterkernel::{
    amplitude_sums, default_order, efficiency_sums, mie_coefficients, pec_mie_coefficients,
};
use pulsecorr_core::signal::SampledSignal;
use pulsecorr_core::spectral::{forward_transform, parseval_check, synthesize};
use pulsecorr_core::{Complex64, Vector3};
use pulsecorr_oracle::{boost, dft, mie, stats};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub values: Vec<(String, String)>,
    pub deviation: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Check {
            name,
            values: Vec::new(),
            deviation: 0.0,
            tolerance,
        }
    }

    fn value(&mut self, key: &str, v: impl fmt::Display) {
        self.values.push((key.to_string(), v.to_string()));
    }

    fn deviate(&mut self, d: f64) {
        // NaN must fail the check
        if !(d <= self.deviation) {
            self.deviation = d;
        }
    }

    pub fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.values {
            writeln!(f, "{}.{k} = {v}", self.name)?;
        }
        write!(
            f,
            "{}: deviation {:e} (tolerance {:e}) {}",
            self.name,
            self.deviation,
            self.tolerance,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

fn signal(v: Vec<f64>) -> SampledSignal {
    SampledSignal::new(0.0, 1.0, v).expect("finite samples")
}

fn noise(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Two-way Doppler factor for +z' incidence, -z' observation.
pub fn doppler(beta: [f64; 3]) -> Result<Check> {
    let v = BoostVelocity::from_components(beta[0], beta[1], beta[2])?;
    let core = two_way_doppler_factor(&v, &Vector3::z(), &-Vector3::z());
    let oracle = boost::two_way_doppler(beta, [0.0, 0.0, 1.0], [0.0, 0.0, -1.0]);
    let mut c = Check::new("doppler", 1e-12);
    c.value("core", core);
    c.value("oracle", oracle);
    c.deviate((core - oracle).abs() / oracle);
    Ok(c)
}

/// Pearson coefficient against the two-pass oracle on random pairs.
pub fn pearson_pairs(seed: u64, pairs: usize, n: usize) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Check::new("pearson", 1e-12);
    for _ in 0..pairs {
        let f = noise(&mut rng, n);
        let mix = rng.gen_range(-1.0..1.0);
        let g: Vec<f64> = f
            .iter()
            .zip(noise(&mut rng, n))
            .map(|(a, b)| mix * a + b)
            .collect();
        let expect = stats::pearson(&f, &g).unwrap_or(f64::NAN);
        let rho = pearson(&signal(f), &signal(g))?;
        c.deviate((rho - expect).abs());
    }
    c.value("pairs", pairs);
    c.value("samples", n);
    Ok(c)
}

/// Lag scan on a noisy delayed copy against the brute-force scan.
pub fn lag(seed: u64, n: usize) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_lag = n / 2 - 1;
    let shift = rng.gen_range(-(max_lag as i64) / 2..=(max_lag as i64) / 2);
    let f = noise(&mut rng, n);
    let g: Vec<f64> = stats::shifted(&f, shift)
        .iter()
        .zip(noise(&mut rng, n))
        .map(|(a, b)| a + 0.25 * b)
        .collect();
    let report = max_abs_correlation(&signal(f.clone()), &signal(g.clone()), max_lag, false)?;
    let (lag, rho, _) = stats::best_lag(&f, &g, max_lag as i64).unwrap_or((0, f64::NAN, f64::NAN));
    let mut c = Check::new("lag", 1e-12);
    c.value("constructed_shift", shift);
    c.value("core_lag", report.best_lag);
    c.value("oracle_lag", lag);
    c.value("core_rho_max", report.rho_max);
    c.value("oracle_rho_max", rho);
    c.deviate((report.rho_max - rho).abs());
    if report.best_lag != lag || lag != shift {
        c.deviate(f64::INFINITY);
    }
    Ok(c)
}

/// Largest |rho| between two independent noise records; expected below 0.1.
pub fn noise_pair(seed: u64, n: usize) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = signal(noise(&mut rng, n));
    let g = signal(noise(&mut rng, n));
    let report = max_abs_correlation(&f, &g, n / 2 - 1, false)?;
    let mut c = Check::new("noise", 0.1);
    c.value("seed", seed);
    c.value("best_lag", report.best_lag);
    c.value("rho_max", report.rho_max);
    c.deviate(report.rho_max);
    Ok(c)
}

/// Parseval, round trip and naive-DFT agreement on a random signal.
pub fn spectral(seed: u64, n: usize) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = SampledSignal::new(rng.gen_range(-1.0..1.0), 0.5, noise(&mut rng, n))?;
    let spec = forward_transform(&s, &Vector3::z(), &Vector3::x())?;
    let parseval = parseval_check(&s, &spec);
    let back = synthesize(&spec, &s.times())?;
    let round_trip = back
        .samples
        .iter()
        .zip(&s.samples)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
        / s.max_abs();
    let naive = dft::dft(&s.samples);
    let scale = naive.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let mut bins = 0.0f64;
    for (k, line) in spec.lines.iter().enumerate() {
        let w = if k == 0 || k == n / 2 { 1.0 } else { 2.0 };
        let phase = Complex64::from_polar(1.0, -line.omega() * s.start_time);
        let raw = (line.amplitude * phase).conj() * (n as f64 / w);
        let mut expect = naive[k];
        if k == 0 || k == n / 2 {
            expect.im = 0.0;
        }
        bins = bins.max((raw - expect).norm() / scale);
    }
    let mut c = Check::new("spectral", 1e-10);
    c.value("parseval", format!("{parseval:e}"));
    c.value("round_trip", format!("{round_trip:e}"));
    c.value("naive_dft", format!("{bins:e}"));
    c.deviate(parseval);
    c.deviate(round_trip);
    c.deviate(bins);
    Ok(c)
}

/// Efficiencies and backscatter amplitude against the fixed-point series.
/// `m = None` selects the perfect conductor.
pub fn mie_sphere(x: f64, m: Option<Complex64>) -> Result<Check> {
    let n = default_order(x);
    let ((a, b), o) = match m {
        Some(m) => (mie_coefficients(x, m, n)?, mie::dielectric_summary(x, m, n)),
        None => (pec_mie_coefficients(x, n)?, mie::pec_summary(x, n)),
    };
    let (q_ext, q_sca) = efficiency_sums(x, &a, &b);
    let (back, _) = amplitude_sums(&a, &b, -1.0);
    let mut c = Check::new("mie", 1e-10);
    c.value("n_max", n);
    c.value("q_ext", q_ext);
    c.value("q_ext_oracle", o.q_ext);
    c.value("q_sca", q_sca);
    c.value("q_sca_oracle", o.q_sca);
    c.value("s1_back", back);
    c.value("s1_back_oracle", o.back_s1);
    c.deviate((q_ext - o.q_ext).abs() / o.q_ext.abs());
    c.deviate((q_sca - o.q_sca).abs() / o.q_sca.abs());
    c.deviate((back - o.back_s1).norm() / o.back_s1.norm());
    Ok(c)
}
