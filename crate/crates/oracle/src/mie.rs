//! Mie series in fixed-point arithmetic.
//!
//! Riccati-Bessel functions come from their power series (psi) and an upward
//! recurrence seeded with Taylor-series sin/cos (chi); the coefficients use the
//! textbook psi/xi ratio form rather than logarithmic derivatives. Everything is
//! carried at `hp::FRAC_BITS` bits and rounded to f64 only at the end.
//! Time convention exp(-i omega t), outgoing wave xi_n = psi_n + i x y_n.

use crate::hp::{sin_cos, CFixed, Fixed, FRAC_BITS};
use num_complex::Complex64;

/// psi_n(z) = z j_n(z) by its power series.
fn psi(z: &CFixed, n: usize) -> CFixed {
    let mut lead = z.clone();
    for _ in 0..n {
        lead = &lead * z;
    }
    // divide by (2n+1)!! one factor at a time
    let mut term = lead;
    for k in (1..=2 * n as i64 + 1).step_by(2) {
        term = term.div_int(k);
    }
    let minus_z2 = -&(z * z);
    let mut sum = term.clone();
    let zmag = z.to_c64().norm();
    let mut k = 1i64;
    loop {
        term = (&term * &minus_z2).div_int(2 * k * (2 * n as i64 + 2 * k + 1));
        sum = &sum + &term;
        if k as f64 > zmag && term.is_below(FRAC_BITS - 16) {
            break;
        }
        k += 1;
    }
    sum
}

/// psi_n and psi_n' for n = 0..=n_max.
fn psi_table(z: &CFixed, n_max: usize) -> (Vec<CFixed>, Vec<CFixed>) {
    let vals: Vec<CFixed> = (0..=n_max).map(|n| psi(z, n)).collect();
    let mut ders = Vec::with_capacity(n_max + 1);
    // psi_0' = cos z = psi_{-1}; only n >= 1 is used
    ders.push(CFixed::zero());
    for n in 1..=n_max {
        let ratio = &vals[n] / z;
        ders.push(&vals[n - 1] - &ratio.mul_int(n as i64));
    }
    (vals, ders)
}

/// x y_n(x) and its derivative by upward recurrence.
fn chi_table(x: &Fixed, n_max: usize) -> (Vec<Fixed>, Vec<Fixed>) {
    let (s, c) = sin_cos(x);
    let mut y = vec![-&c];
    y.push(&(-&(&c / x)) - &s);
    for n in 1..n_max {
        let next = &(&y[n] / x).mul_int(2 * n as i64 + 1) - &y[n - 1];
        y.push(next);
    }
    let mut d = vec![s.clone()];
    for n in 1..=n_max {
        d.push(&y[n - 1] - &(&y[n] / x).mul_int(n as i64));
    }
    (y, d)
}

type Table = Vec<(CFixed, CFixed)>;

fn xi(x: &Fixed, n_max: usize) -> (Vec<CFixed>, Vec<CFixed>, Vec<CFixed>, Vec<CFixed>) {
    let xc = CFixed::real(x.clone());
    let (p, dp) = psi_table(&xc, n_max);
    let (y, dy) = chi_table(x, n_max);
    let xi: Vec<CFixed> = p
        .iter()
        .zip(&y)
        .map(|(a, b)| CFixed::new(a.re.clone(), b.clone()))
        .collect();
    let dxi: Vec<CFixed> = dp
        .iter()
        .zip(&dy)
        .map(|(a, b)| CFixed::new(a.re.clone(), b.clone()))
        .collect();
    (p, dp, xi, dxi)
}

fn dielectric_hp(x: f64, m: Complex64, n_max: usize) -> Table {
    let xf = Fixed::from_f64(x);
    let mf = CFixed::from_c64(m);
    let mx = &mf * &CFixed::real(xf.clone());
    let (p, dp, xi, dxi) = xi(&xf, n_max);
    let (pm, dpm) = psi_table(&mx, n_max);
    (1..=n_max)
        .map(|n| {
            let a_num = &(&(&mf * &pm[n]) * &dp[n]) - &(&p[n] * &dpm[n]);
            let a_den = &(&(&mf * &pm[n]) * &dxi[n]) - &(&xi[n] * &dpm[n]);
            let b_num = &(&pm[n] * &dp[n]) - &(&(&mf * &p[n]) * &dpm[n]);
            let b_den = &(&pm[n] * &dxi[n]) - &(&(&mf * &xi[n]) * &dpm[n]);
            (&a_num / &a_den, &b_num / &b_den)
        })
        .collect()
}

fn pec_hp(x: f64, n_max: usize) -> Table {
    let (p, dp, xi, dxi) = xi(&Fixed::from_f64(x), n_max);
    (1..=n_max)
        .map(|n| (&dp[n] / &dxi[n], &p[n] / &xi[n]))
        .collect()
}

fn to_f64(t: &Table) -> (Vec<Complex64>, Vec<Complex64>) {
    t.iter().map(|(a, b)| (a.to_c64(), b.to_c64())).unzip()
}

/// a_n, b_n for n = 1..=n_max of a homogeneous sphere, relative index `m`.
pub fn dielectric_coefficients(
    x: f64,
    m: Complex64,
    n_max: usize,
) -> (Vec<Complex64>, Vec<Complex64>) {
    to_f64(&dielectric_hp(x, m, n_max))
}

/// Perfectly conducting sphere: a_n = psi_n'/xi_n', b_n = psi_n/xi_n.
pub fn pec_coefficients(x: f64, n_max: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    to_f64(&pec_hp(x, n_max))
}

/// Wiscombe-style truncation ceil(x + 4 x^(1/3) + 2).
pub fn default_order(x: f64) -> usize {
    (x + 4.0 * x.cbrt() + 2.0).ceil() as usize
}

#[derive(Clone, Debug)]
pub struct SeriesSummary {
    pub q_ext: f64,
    pub q_sca: f64,
    pub forward: Complex64,
    pub back_s1: Complex64,
    pub back_s2: Complex64,
}

fn summarize(x: f64, t: &Table) -> SeriesSummary {
    let mut ext = Fixed::zero();
    let mut sca = Fixed::zero();
    let mut fwd = CFixed::zero();
    let mut back = CFixed::zero();
    for (i, (a, b)) in t.iter().enumerate() {
        let n = i as i64 + 1;
        let w = 2 * n + 1;
        let sum = a + b;
        ext = &ext + &sum.re.mul_int(w);
        sca = &sca + &(&a.norm_sqr() + &b.norm_sqr()).mul_int(w);
        fwd = &fwd + &sum.mul_int(w);
        // pi_n(-1) = (-1)^(n+1) n(n+1)/2, tau_n(-1) = (-1)^n n(n+1)/2
        let diff = (a - b).mul_int(w);
        back = if n % 2 == 1 {
            &back + &diff
        } else {
            &back - &diff
        };
    }
    let xf = Fixed::from_f64(x);
    let x2 = &xf * &xf;
    let two = Fixed::from_int(2);
    let scale = &two / &x2;
    SeriesSummary {
        q_ext: (&ext * &scale).to_f64(),
        q_sca: (&sca * &scale).to_f64(),
        forward: fwd.div_int(2).to_c64(),
        back_s1: back.div_int(2).to_c64(),
        back_s2: (-&back).div_int(2).to_c64(),
    }
}

/// Efficiencies and forward/backward amplitudes for a dielectric sphere.
pub fn dielectric_summary(x: f64, m: Complex64, n_max: usize) -> SeriesSummary {
    summarize(x, &dielectric_hp(x, m, n_max))
}

pub fn pec_summary(x: f64, n_max: usize) -> SeriesSummary {
    summarize(x, &pec_hp(x, n_max))
}

/// S1, S2 at cos(theta) = `mu` from f64 coefficients, with the angular
/// functions carried in fixed point.
pub fn amplitudes(a: &[Complex64], b: &[Complex64], mu: f64) -> (Complex64, Complex64) {
    let muf = Fixed::from_f64(mu);
    let mut pi_prev = Fixed::zero();
    let mut pi_cur = Fixed::from_int(1);
    let mut s1 = CFixed::zero();
    let mut s2 = CFixed::zero();
    for (i, (an, bn)) in a.iter().zip(b).enumerate() {
        let n = i as i64 + 1;
        if n > 1 {
            let next = &(&muf * &pi_cur).mul_int(2 * n - 1).div_int(n - 1)
                - &pi_prev.mul_int(n).div_int(n - 1);
            pi_prev = std::mem::replace(&mut pi_cur, next);
        }
        let tau = &(&muf * &pi_cur).mul_int(n) - &pi_prev.mul_int(n + 1);
        let an = CFixed::from_c64(*an);
        let bn = CFixed::from_c64(*bn);
        let pr = CFixed::real(pi_cur.clone());
        let tr = CFixed::real(tau);
        let w = 2 * n + 1;
        let d = n * (n + 1);
        s1 = &s1 + &(&(&an * &pr) + &(&bn * &tr)).mul_int(w).div_int(d);
        s2 = &s2 + &(&(&an * &tr) + &(&bn * &pr)).mul_int(w).div_int(d);
    }
    (s1.to_c64(), s2.to_c64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rayleigh_limit() {
        let x = 0.01;
        let m = Complex64::new(1.5, 0.0);
        let (a, _) = dielectric_coefficients(x, m, 3);
        let m2 = m * m;
        let expect = Complex64::new(0.0, -2.0 / 3.0) * x.powi(3) * (m2 - 1.0) / (m2 + 2.0);
        assert!((a[0] - expect).norm() / expect.norm() < 1e-3);
    }

    #[test]
    fn index_matched_sphere_is_invisible() {
        let (a, b) = dielectric_coefficients(2.0, Complex64::new(1.0, 0.0), 10);
        for (x, y) in a.iter().zip(&b) {
            assert!(x.norm() < 1e-30 && y.norm() < 1e-30);
        }
    }

    #[test]
    fn pec_unitarity() {
        let (a, b) = pec_coefficients(3.0, 12);
        for c in a.iter().chain(&b) {
            assert!(((c - 0.5).norm() - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn lossless_energy_balance() {
        let s = dielectric_summary(5.0, Complex64::new(1.5, 0.0), default_order(5.0));
        assert!((s.q_ext - s.q_sca).abs() < 1e-14);
        assert!((s.q_ext - 4.0 / 25.0 * s.forward.re).abs() < 1e-13);
    }
}
