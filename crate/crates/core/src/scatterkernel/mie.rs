//! Mie coefficients for homogeneous and perfectly conducting spheres.
//!
//! Riccati-Bessel functions psi_n(x) = x j_n(x) and xi_n(x) = x h1_n(x).
//! Logarithmic derivatives D_n = psi_n'/psi_n are obtained by downward
//! recurrence for both the real size parameter and the complex internal
//! argument m x; psi_n(x) then follows from psi_{n-1}/psi_n = D_n + n/x, and
//! x y_n(x) is generated upward, where it is stable.

use num_complex::Complex64;

use crate::{Error, Result};

/// Wiscombe's truncation `ceil(x + 4 x^(1/3) + 2)`.
pub fn default_order(x: f64) -> usize {
    (x + 4.0 * x.cbrt() + 2.0).ceil() as usize
}

fn start_order(n_max: usize, z_abs: f64) -> usize {
    n_max.max(z_abs.ceil() as usize) + 16
}

fn log_derivative_real(x: f64, n_max: usize) -> Vec<f64> {
    let start = start_order(n_max, x);
    let mut d = vec![0.0; start + 1];
    for n in (1..=start).rev() {
        let r = n as f64 / x;
        d[n - 1] = r - 1.0 / (d[n] + r);
    }
    d.truncate(n_max + 1);
    d
}

fn log_derivative_complex(z: Complex64, n_max: usize) -> Vec<Complex64> {
    let start = start_order(n_max, z.norm());
    let mut d = vec![Complex64::from(0.0); start + 1];
    for n in (1..=start).rev() {
        let r = Complex64::from(n as f64) / z;
        d[n - 1] = r - (d[n] + r).inv();
    }
    d.truncate(n_max + 1);
    d
}

/// psi_n(x), xi_n(x) for n = 0..=n_max, plus D_n(x).
struct Riccati {
    psi: Vec<f64>,
    xi: Vec<Complex64>,
    d: Vec<f64>,
}

fn riccati(x: f64, n_max: usize) -> Riccati {
    let d = log_derivative_real(x, n_max);
    let mut psi = vec![x.sin()];
    for n in 1..=n_max {
        let prev = psi[n - 1];
        psi.push(prev / (d[n] + n as f64 / x));
    }
    let mut y = vec![-x.cos(), -x.cos() / x - x.sin()];
    for n in 1..n_max {
        let next = (2 * n + 1) as f64 / x * y[n] - y[n - 1];
        y.push(next);
    }
    let xi = psi
        .iter()
        .zip(&y)
        .map(|(&p, &q)| Complex64::new(p, q))
        .collect();
    Riccati { psi, xi, d }
}

fn check_finite(a: &[Complex64], b: &[Complex64], what: &str) -> Result<()> {
    if a.iter()
        .chain(b)
        .all(|c| c.re.is_finite() && c.im.is_finite())
    {
        Ok(())
    } else {
        Err(Error::ConvergenceFailure(format!(
            "non-finite {what} coefficient"
        )))
    }
}

fn check_args(x: f64, n_max: usize) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::ConvergenceFailure(format!(
            "size parameter must be positive, got {x}"
        )));
    }
    if n_max == 0 {
        return Err(Error::ConvergenceFailure("n_max must be at least 1".into()));
    }
    Ok(())
}

/// External coefficients a_n, b_n (index 0 holds n = 1) of a sphere with
/// size parameter `x` and relative refractive index `m`.
#[allow(clippy::needless_range_loop)]
pub fn mie_coefficients(
    x: f64,
    m: Complex64,
    n_max: usize,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    check_args(x, n_max)?;
    let r = riccati(x, n_max);
    let dm = log_derivative_complex(m * x, n_max);
    let mut a = Vec::with_capacity(n_max);
    let mut b = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let nx = n as f64 / x;
        let ta = dm[n] / m + nx;
        let tb = dm[n] * m + nx;
        a.push((ta * r.psi[n] - r.psi[n - 1]) / (ta * r.xi[n] - r.xi[n - 1]));
        b.push((tb * r.psi[n] - r.psi[n - 1]) / (tb * r.xi[n] - r.xi[n - 1]));
    }
    check_finite(&a, &b, "Mie")?;
    Ok((a, b))
}

/// Perfect conductor: a_n = psi_n'/xi_n', b_n = psi_n/xi_n. This is the
/// |m| -> infinity limit of [`mie_coefficients`].
pub fn pec_mie_coefficients(x: f64, n_max: usize) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    check_args(x, n_max)?;
    let r = riccati(x, n_max);
    let mut a = Vec::with_capacity(n_max);
    let mut b = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let dpsi = r.d[n] * r.psi[n];
        let dxi = r.xi[n - 1] - r.xi[n] * (n as f64 / x);
        a.push(Complex64::from(dpsi) / dxi);
        b.push(Complex64::from(r.psi[n]) / r.xi[n]);
    }
    check_finite(&a, &b, "PEC")?;
    Ok((a, b))
}

/// Angular functions pi_n(mu), tau_n(mu) for n = 1..=n_max (index 0 is n = 1).
pub fn angular_functions(mu: f64, n_max: usize) -> (Vec<f64>, Vec<f64>) {
    let mut pi = Vec::with_capacity(n_max);
    let mut tau = Vec::with_capacity(n_max);
    let (mut p_prev, mut p) = (0.0, 1.0);
    for n in 1..=n_max {
        if n > 1 {
            let nf = n as f64;
            let next = ((2.0 * nf - 1.0) * mu * p - nf * p_prev) / (nf - 1.0);
            p_prev = p;
            p = next;
        }
        pi.push(p);
        tau.push(n as f64 * mu * p - (n + 1) as f64 * p_prev);
    }
    (pi, tau)
}

/// S1, S2 at `mu = cos(theta)`.
pub fn amplitude_sums(a: &[Complex64], b: &[Complex64], mu: f64) -> (Complex64, Complex64) {
    let (pi, tau) = angular_functions(mu, a.len());
    let mut s1 = Complex64::from(0.0);
    let mut s2 = Complex64::from(0.0);
    for i in 0..a.len() {
        let n = (i + 1) as f64;
        let w = (2.0 * n + 1.0) / (n * (n + 1.0));
        s1 += (a[i] * pi[i] + b[i] * tau[i]) * w;
        s2 += (a[i] * tau[i] + b[i] * pi[i]) * w;
    }
    (s1, s2)
}

/// (Q_ext, Q_sca) from the coefficient series.
pub fn efficiency_sums(x: f64, a: &[Complex64], b: &[Complex64]) -> (f64, f64) {
    let mut ext = 0.0;
    let mut sca = 0.0;
    for (i, (an, bn)) in a.iter().zip(b).enumerate() {
        let w = (2 * i + 3) as f64;
        ext += w * (an + bn).re;
        sca += w * (an.norm_sqr() + bn.norm_sqr());
    }
    let s = 2.0 / (x * x);
    (s * ext, s * sca)
}
