//! Four-vector boost-matrix oracle.

/// 4x4 pure Lorentz boost taking contravariant components from the frame in
/// which the target moves with `beta` to the target's rest frame.
pub fn boost_matrix(beta: [f64; 3]) -> [[f64; 4]; 4] {
    let b2 = beta.iter().map(|b| b * b).sum::<f64>();
    let gamma = 1.0 / (1.0 - b2).sqrt();
    let mut m = [[0.0; 4]; 4];
    m[0][0] = gamma;
    for i in 0..3 {
        m[0][i + 1] = -gamma * beta[i];
        m[i + 1][0] = -gamma * beta[i];
        for j in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            let coupling = if b2 > 0.0 {
                (gamma - 1.0) * beta[i] * beta[j] / b2
            } else {
                0.0
            };
            m[i + 1][j + 1] = delta + coupling;
        }
    }
    m
}

pub fn apply(m: &[[f64; 4]; 4], v: [f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (row, o) in m.iter().zip(out.iter_mut()) {
        *o = row.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
    }
    out
}

/// Boost a free-space wave given as (omega, unit direction). Returns
/// (omega', unit direction').
pub fn boost_wave(omega: f64, dir: [f64; 3], beta: [f64; 3]) -> (f64, [f64; 3]) {
    let k = omega / crate::C;
    let v = [omega / crate::C, k * dir[0], k * dir[1], k * dir[2]];
    let out = apply(&boost_matrix(beta), v);
    let norm = (out[1] * out[1] + out[2] * out[2] + out[3] * out[3]).sqrt();
    (
        out[0] * crate::C,
        [out[1] / norm, out[2] / norm, out[3] / norm],
    )
}

/// Two-way Doppler factor by brute force: transmit leg boosted into the rest
/// frame, elastic scattering there, return leg boosted back.
///
/// The rest-frame direction of the return leg is found by boosting the
/// received wave (travelling along `observation` in the radar frame) into the
/// rest frame.
pub fn two_way_doppler(beta: [f64; 3], incidence: [f64; 3], observation: [f64; 3]) -> f64 {
    let omega = 1.0e14;
    let (omega_rest, _) = boost_wave(omega, incidence, beta);
    let (_, obs_rest) = boost_wave(1.0, observation, beta);
    let back = [-beta[0], -beta[1], -beta[2]];
    let (omega_back, _) = boost_wave(omega_rest, obs_rest, back);
    omega_back / omega
}
