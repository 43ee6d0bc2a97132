//! Naive discrete Fourier transform.

use num_complex::Complex64;
use std::f64::consts::TAU;

/// Full-length DFT, X_k = sum_n x_n exp(-2 pi i k n / N), by direct summation.
pub fn dft(samples: &[f64]) -> Vec<Complex64> {
    let n = samples.len();
    (0..n)
        .map(|k| {
            samples
                .iter()
                .enumerate()
                .map(|(j, &x)| {
                    // reduce k*j mod n first so the phase stays accurate
                    let phase = -TAU * ((k * j) % n) as f64 / n as f64;
                    Complex64::from_polar(x, phase)
                })
                .sum()
        })
        .collect()
}

pub fn energy(samples: &[f64]) -> f64 {
    samples.iter().map(|x| x * x).sum()
}

/// Evaluate sum_j Re(a_j exp(-i omega_j t)) term by term.
pub fn sum_lines(lines: &[(f64, Complex64)], t: f64) -> f64 {
    lines
        .iter()
        .map(|(omega, a)| (a * Complex64::from_polar(1.0, -omega * t)).re)
        .sum()
}
