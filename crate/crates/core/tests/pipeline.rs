use std::f64::consts::{PI, TAU};

use nalgebra::Vector3;
use num_complex::Complex64;
use proptest::prelude::*;
use pulsecorr_core::pipeline::{
    max_abs_correlation, pearson, remove_doppler, remove_doppler_spectrum, run_scenario,
    run_scenario_full, simulate_backscatter, ScenarioConfig,
};
use pulsecorr_core::relativity::{BoostVelocity, C};
use pulsecorr_core::scatterkernel::{scattering_amplitude, KernelSpec, MaterialModel};
use pulsecorr_core::signal::{sample_pulse, PulseSpec, SampledSignal};
use pulsecorr_core::spectral::{forward_transform, synthesize, SpectralLine, Spectrum};
use pulsecorr_core::Error;
use pulsecorr_oracle::{dft, mie, stats};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn scenario(kernel: KernelSpec, beta: [f64; 3]) -> ScenarioConfig {
    let v = BoostVelocity::from_components(beta[0], beta[1], beta[2]).unwrap();
    ScenarioConfig::new(PulseSpec::terahertz(), v, kernel)
}

fn sic() -> KernelSpec {
    KernelSpec::DielectricSphere {
        radius: 1.0e-6,
        material: MaterialModel::silicon_carbide(),
    }
}

fn pec() -> KernelSpec {
    KernelSpec::PecSphere { radius: 1.0e-6 }
}

fn sig(v: Vec<f64>) -> SampledSignal {
    SampledSignal::new(0.0, 1.0, v).unwrap()
}

// Echo for motion along the line of sight, built from the naive DFT and the
// fixed-point series. Each line picks up S1(pi) * i/x at the rest-frame
// frequency gamma (1 - beta) omega; the remaining per-line factors are a
// common positive constant and drop out of the correlation.
fn collinear_echo(
    radius: f64,
    material: Option<MaterialModel>,
    beta_z: f64,
) -> (Vec<f64>, Vec<f64>) {
    let cfg = scenario(KernelSpec::PecSphere { radius }, [0.0, 0.0, beta_z]);
    let f = sample_pulse(
        &cfg.pulse,
        cfg.sampling.window_half_width,
        cfg.sampling.n_samples,
    )
    .unwrap();
    let n = f.len();
    let x = dft::dft(&f.samples);
    let period = n as f64 * f.sample_interval;
    let shift = (1.0 - beta_z) / (1.0 - beta_z * beta_z).sqrt();
    let mut lines: Vec<(f64, Complex64)> = (0..=n / 2)
        .map(|k| {
            let w = if k == 0 || k == n / 2 { 1.0 } else { 2.0 };
            let mut xk = x[k];
            if k == 0 || k == n / 2 {
                xk.im = 0.0;
            }
            let omega = TAU * k as f64 / period;
            let a = xk.conj() * Complex64::from_polar(w / n as f64, omega * f.start_time);
            (omega, a)
        })
        .collect();
    let peak = lines.iter().fold(0.0f64, |m, l| m.max(l.1.norm()));
    lines.retain(|l| l.1.norm() > 1e-13 * peak);
    let lowest = TAU / period * shift;
    let echo: Vec<(f64, Complex64)> = lines
        .iter()
        .map(|&(omega, a)| {
            let omega_k = if omega > 0.0 { omega * shift } else { lowest };
            let xs = omega_k * radius / C;
            let order = mie::default_order(xs);
            let s1 = match material {
                None => mie::pec_summary(xs, order).back_s1,
                Some(m) => {
                    let w2 = omega_k * omega_k;
                    let loss = Complex64::new(0.0, m.damping * omega_k);
                    let eps = m.eps_inf * (m.omega_l * m.omega_l - w2 - loss)
                        / (m.omega_t * m.omega_t - w2 - loss);
                    mie::dielectric_summary(xs, eps.sqrt(), order).back_s1
                }
            };
            (omega, a * s1 * Complex64::new(0.0, 1.0 / xs))
        })
        .collect();
    let g = f
        .times()
        .iter()
        .map(|&t| dft::sum_lines(&echo, t))
        .collect();
    (f.samples, g)
}

fn proportional(a: &[f64], b: &[f64]) -> f64 {
    // residual of the best fit a ~ c b, relative to max |a|
    let c = a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / b.iter().map(|y| y * y).sum::<f64>();
    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    a.iter()
        .zip(b)
        .fold(0.0f64, |m, (x, y)| m.max((x - c * y).abs()))
        / scale
}

#[test]
fn mirror_at_rest_returns_the_pulse() {
    let run = run_scenario_full(&scenario(KernelSpec::flat_mirror(), [0.0; 3])).unwrap();
    let bs = &run.backscatter;
    assert_eq!(bs.doppler_factor, 1.0);
    assert!(proportional(&bs.received_raw.samples, &bs.transmitted.samples) <= 1e-10);
    assert_eq!(run.report.best_lag, 0);
    assert!((run.report.rho_max - 1.0).abs() <= 1e-12);
    assert!(run.report.warnings.is_empty());
}

#[test]
fn receding_mirror_is_dilated() {
    let run = run_scenario_full(&scenario(KernelSpec::flat_mirror(), [0.0, 0.0, 0.2])).unwrap();
    let bs = &run.backscatter;
    assert!((bs.doppler_factor - 2.0 / 3.0).abs() <= 1e-12);
    let peak = &bs.received_spectrum.lines[bs.received_spectrum.peak_index()];
    assert!((peak.frequency - 40.0e12 / 3.0).abs() <= 1e-6 * 40.0e12 / 3.0);
    // g_raw lives on the grid t_n / D, where f(D t) = f(t_n)
    assert!(
        (bs.received_raw.sample_interval * bs.doppler_factor - bs.transmitted.sample_interval)
            .abs()
            < 1e-28
    );
    assert!(proportional(&bs.received_raw.samples, &bs.transmitted.samples) <= 1e-10);
    assert!(run.report.rho_max >= 1.0 - 1e-3);
    assert_eq!(run.report.best_lag, 0);

    let relabelled = remove_doppler(&bs.received_raw, bs.doppler_factor).unwrap();
    assert!((relabelled.start_time - bs.transmitted.start_time).abs() < 1e-27);
    let rho = pearson(&relabelled, &bs.transmitted).unwrap();
    assert!(rho >= 1.0 - 1e-3);
}

#[test]
fn transverse_motion_changes_the_rest_frame_angle() {
    let bs = simulate_backscatter(&scenario(pec(), [0.2, 0.0, 0.0])).unwrap();
    assert!((bs.doppler_factor - 1.0).abs() <= 1e-12);
    assert!((bs.rest_frame_angle - (-0.92f64).acos()).abs() <= 1e-12);
    assert!((bs.rest_frame_angle.to_degrees() - 156.93).abs() < 5e-3);
}

#[test]
fn every_line_shares_the_doppler_factor() {
    let cases: [([f64; 3], [f64; 3], [f64; 3]); 5] = [
        ([0.0, 0.0, 0.2], [0.0, 0.0, 1.0], [0.0, 0.0, -1.0]),
        ([0.3, -0.2, 0.5], [0.0, 0.0, 1.0], [0.0, 0.0, -1.0]),
        ([0.0, 0.0, -0.9], [0.0, 0.0, 1.0], [0.0, 0.0, -1.0]),
        ([0.1, 0.4, 0.0], [0.0, 0.0, 1.0], [0.6, 0.0, -0.8]),
        ([-0.2, 0.1, 0.3], [0.0, 0.6, 0.8], [0.0, 0.0, -1.0]),
    ];
    for (beta, inc, obs) in cases {
        for kernel in [KernelSpec::flat_mirror(), pec(), sic()] {
            let mut cfg = scenario(kernel, beta);
            cfg.incidence_direction = Vector3::from(inc);
            cfg.observation_direction = Vector3::from(obs);
            let bs = simulate_backscatter(&cfg).unwrap();
            let tx = forward_transform(
                &bs.transmitted,
                &cfg.incidence_direction,
                &cfg.transmit_polarization(),
            )
            .unwrap();
            for (l_tx, l_rx) in tx.lines.iter().zip(&bs.received_spectrum.lines).skip(1) {
                let ratio = l_rx.frequency / l_tx.frequency;
                assert!((ratio - bs.doppler_factor).abs() <= 1e-12 * bs.doppler_factor);
                assert!((l_rx.direction - cfg.observation_direction).norm() <= 1e-12);
            }
            let report = run_scenario(&cfg).unwrap();
            assert!(report
                .rho_by_lag
                .iter()
                .all(|(_, r)| (-1.0..=1.0).contains(r)));
            assert_eq!(report.rho_max, report.rho_signed_at_best.abs());
        }
    }
}

#[test]
fn rest_reduces_to_stationary_computation() {
    for kernel in [KernelSpec::flat_mirror(), pec(), sic()] {
        let cfg = scenario(kernel, [0.0; 3]);
        let run = run_scenario_full(&cfg).unwrap();

        let f = sample_pulse(
            &cfg.pulse,
            cfg.sampling.window_half_width,
            cfg.sampling.n_samples,
        )
        .unwrap();
        let tx = forward_transform(&f, &Vector3::z(), &Vector3::x()).unwrap();
        let lowest = tx.lines[1].omega();
        let lines: Vec<SpectralLine> = tx
            .lines
            .iter()
            .map(|l| {
                let omega = if l.frequency > 0.0 { l.omega() } else { lowest };
                let s = scattering_amplitude(&kernel, omega, PI).unwrap();
                SpectralLine {
                    amplitude: (s.s1 * kernel.far_field_factor(omega)) * l.amplitude,
                    direction: -Vector3::z(),
                    pol_h: -Vector3::y(),
                    ..*l
                }
            })
            .collect();
        let echo = Spectrum { lines, ..tx };
        let g = synthesize(&echo, &f.times()).unwrap();
        assert_eq!(g.samples, run.received.samples, "{}", kernel.name());
        assert_eq!(g.samples, run.backscatter.received_raw.samples);
        let report = max_abs_correlation(&f, &g, cfg.max_lag(), false).unwrap();
        assert_eq!(report.rho_by_lag, run.report.rho_by_lag);
        assert_eq!(report.best_lag, run.report.best_lag);
    }
}

const GOLDEN_TOL: f64 = 1e-9;

#[test]
fn conductor_sphere_golden() {
    let r = run_scenario(&scenario(pec(), [0.0; 3])).unwrap();
    assert!((r.rho_max - 0.977_173_164_414_452).abs() <= GOLDEN_TOL);
    assert_eq!(r.best_lag, 1);

    let (f, g) = collinear_echo(1.0e-6, None, 0.0);
    let (lag, rho, _) = stats::best_lag(&f, &g, 2047).unwrap();
    assert_eq!(lag, r.best_lag);
    assert!((rho - r.rho_max).abs() <= GOLDEN_TOL);
}

#[test]
fn silicon_carbide_goldens() {
    let sic_m = MaterialModel::silicon_carbide();
    let mut values = Vec::new();
    for (beta_z, golden, golden_lag) in [
        (-0.2, 0.649_404_074_465_958_7, 272),
        (0.0, 0.615_421_311_474_342_2, -5),
        (0.2, 0.973_467_369_124_143_2, 1),
    ] {
        let r = run_scenario(&scenario(sic(), [0.0, 0.0, beta_z])).unwrap();
        assert!(
            (r.rho_max - golden).abs() <= GOLDEN_TOL,
            "beta_z={beta_z}: {}",
            r.rho_max
        );
        assert_eq!(r.best_lag, golden_lag);
        let (f, g) = collinear_echo(1.0e-6, Some(sic_m), beta_z);
        let (lag, rho, _) = stats::best_lag(&f, &g, 2047).unwrap();
        assert_eq!(lag, golden_lag);
        assert!((rho - golden).abs() <= GOLDEN_TOL);
        values.push(r.rho_max);
    }
    for i in 0..3 {
        for j in i + 1..3 {
            assert!((values[i] - values[j]).abs() > 0.01);
        }
    }
    for (beta, golden) in [
        ([0.2, 0.0, 0.0], 0.788_461_958_686_073_9),
        ([0.0, 0.2, 0.0], 0.812_120_802_494_515_7),
    ] {
        let r = run_scenario(&scenario(sic(), beta)).unwrap();
        assert!((r.rho_max - golden).abs() <= GOLDEN_TOL);
        assert_eq!(r.best_lag, 1);
        assert!((r.rho_max - values[1]).abs() > 0.01);
    }
}

#[test]
fn doppler_removal_restores_carrier() {
    let dt = 1.0e-15;
    let tone: Vec<f64> = (0..1024)
        .map(|n| (TAU * 40.0e12 / 3.0 * n as f64 * dt).cos())
        .collect();
    let s = SampledSignal::new(0.0, dt, tone).unwrap();
    assert_eq!(remove_doppler(&s, 1.0).unwrap(), s);
    let g = remove_doppler(&s, 2.0 / 3.0).unwrap();
    for (n, v) in g.samples.iter().enumerate() {
        assert!((v - (TAU * 20.0e12 * g.time(n)).cos()).abs() < 1e-9);
    }
    let spec = forward_transform(&s, &Vector3::z(), &Vector3::x()).unwrap();
    let restored = remove_doppler_spectrum(&spec, 2.0 / 3.0).unwrap();
    for (a, b) in spec.lines.iter().zip(&restored.lines) {
        assert!((b.frequency - a.frequency * 1.5).abs() <= 1e-15 * b.frequency.max(1.0));
    }
    assert!(matches!(
        remove_doppler(&s, 0.0),
        Err(Error::NonPositiveFactor(_))
    ));
    assert!(matches!(
        remove_doppler_spectrum(&spec, -1.0),
        Err(Error::NonPositiveFactor(_))
    ));
}

fn noise(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

#[test]
fn pearson_matches_two_pass_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let n = rng.gen_range(2..600);
        let f = noise(&mut rng, n);
        let mix = rng.gen_range(-1.0..1.0);
        let g: Vec<f64> = f
            .iter()
            .zip(noise(&mut rng, n))
            .map(|(a, b)| mix * a + b + 3.0)
            .collect();
        let expect = stats::pearson(&f, &g).unwrap();
        let rho = pearson(&sig(f), &sig(g)).unwrap();
        assert!((rho - expect).abs() <= 1e-12);
    }
    let f = sig(vec![1.0, 2.0, 3.0, 4.0]);
    let g = sig(vec![1.0, 2.0, 3.0, 5.0]);
    assert!((pearson(&f, &g).unwrap() - 0.982_707_629_823_990_8).abs() <= 1e-15);
    assert!(matches!(
        pearson(&f, &sig(vec![2.0; 4])),
        Err(Error::DegenerateSignal)
    ));
    assert!(matches!(
        pearson(&f, &sig(vec![1.0; 5])),
        Err(Error::LengthMismatch(4, 5))
    ));
}

#[test]
fn lag_scan_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..20 {
        let n = 128;
        let f = noise(&mut rng, n);
        let shift = rng.gen_range(-40i64..40);
        let g: Vec<f64> = stats::shifted(&f, shift)
            .iter()
            .zip(noise(&mut rng, n))
            .map(|(a, b)| a + 0.5 * b)
            .collect();
        let report = max_abs_correlation(&sig(f.clone()), &sig(g.clone()), 63, false).unwrap();
        let (lag, abs, signed) = stats::best_lag(&f, &g, 63).unwrap();
        assert_eq!(report.best_lag, lag);
        assert!((report.rho_max - abs).abs() <= 1e-12);
        assert!((report.rho_signed_at_best - signed).abs() <= 1e-12);
        for &(l, rho) in &report.rho_by_lag {
            let expect = stats::pearson(&stats::shifted(&f, l), &g).unwrap_or(0.0);
            assert!((rho - expect).abs() <= 1e-12);
        }
    }
}

#[test]
fn constructed_shift_is_recovered() {
    let f = sample_pulse(&PulseSpec::terahertz(), 400e-15, 4096).unwrap();
    let g = SampledSignal {
        samples: stats::shifted(&f.samples, 7),
        ..f.clone()
    };
    let r = max_abs_correlation(&f, &g, 2047, true).unwrap();
    assert_eq!(r.best_lag, 7);
    assert!((r.rho_max - 1.0).abs() <= 1e-12);
    let (peak_lag, peak) = r.refined_peak.unwrap();
    assert!((peak_lag - 7.0).abs() < 0.5 && peak >= r.rho_max - 1e-12);

    let impulse = |i: usize| sig((0..8).map(|n| if n == i { 1.0 } else { 0.0 }).collect());
    let r = max_abs_correlation(&impulse(2), &impulse(5), 3, false).unwrap();
    assert_eq!(r.best_lag, 3);
    assert!((r.rho_max - 1.0).abs() <= 1e-15);
}

#[test]
fn uncorrelated_noise_stays_low() {
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = sig(noise(&mut rng, 4096));
        let g = sig(noise(&mut rng, 4096));
        let r = max_abs_correlation(&f, &g, 2047, false).unwrap();
        assert!(r.rho_max < 0.1, "seed {seed}: {}", r.rho_max);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pearson_is_scale_and_offset_invariant(
        seed in any::<u64>(),
        a in 1e-3f64..1e3,
        b in -1e3f64..1e3,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = noise(&mut rng, 256);
        let g = noise(&mut rng, 256);
        let moved: Vec<f64> = g.iter().map(|v| a * v + b).collect();
        let base = pearson(&sig(f.clone()), &sig(g.clone())).unwrap();
        let rho = pearson(&sig(f.clone()), &sig(moved.clone())).unwrap();
        prop_assert!((rho - base).abs() <= 1e-12);
        prop_assert_eq!(pearson(&sig(f.clone()), &sig(g.clone())).unwrap(), pearson(&sig(g.clone()), &sig(f.clone())).unwrap());

        let r0 = max_abs_correlation(&sig(f.clone()), &sig(g), 40, false).unwrap();
        let r1 = max_abs_correlation(&sig(f), &sig(moved), 40, false).unwrap();
        prop_assert!((r0.rho_max - r1.rho_max).abs() <= 1e-12);
        prop_assert!((0.0..=1.0).contains(&r0.rho_max));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn flat_mirror_is_transparent(
        bx in -0.3f64..0.3,
        by in -0.3f64..0.3,
        bz in -0.3f64..0.3,
    ) {
        let r = run_scenario(&scenario(KernelSpec::flat_mirror(), [bx, by, bz])).unwrap();
        prop_assert!(r.rho_max >= 0.999);
        prop_assert_eq!(r.best_lag, 0);
    }
}
