//! Two-pass Pearson correlation and brute-force lag scan.

/// Literal two-pass evaluation of the sample Pearson coefficient.
/// Returns `None` when either input has zero variance.
pub fn pearson(f: &[f64], g: &[f64]) -> Option<f64> {
    assert_eq!(f.len(), g.len());
    let n = f.len() as f64;
    let mf = f.iter().sum::<f64>() / n;
    let mg = g.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut sf = 0.0;
    let mut sg = 0.0;
    for (a, b) in f.iter().zip(g) {
        num += (a - mf) * (b - mg);
        sf += (a - mf) * (a - mf);
        sg += (b - mg) * (b - mg);
    }
    if sf == 0.0 || sg == 0.0 {
        return None;
    }
    Some(num / (sf.sqrt() * sg.sqrt()))
}

/// `f` delayed by `lag` samples with zeros shifted in.
pub fn shifted(f: &[f64], lag: i64) -> Vec<f64> {
    let n = f.len() as i64;
    (0..n)
        .map(|i| {
            let src = i - lag;
            if (0..n).contains(&src) {
                f[src as usize]
            } else {
                0.0
            }
        })
        .collect()
}

/// Scan every lag in [-max_lag, max_lag]; returns (best_lag, |rho|, rho).
/// Ties go to the smallest |lag|, then to the negative lag. A lag that shifts
/// all of `f`'s variation out of the window scores 0; constant inputs give
/// `None`.
pub fn best_lag(f: &[f64], g: &[f64], max_lag: i64) -> Option<(i64, f64, f64)> {
    pearson(f, g)?;
    let mut best: Option<(i64, f64, f64)> = None;
    for lag in -max_lag..=max_lag {
        let rho = pearson(&shifted(f, lag), g).unwrap_or(0.0);
        let better = match best {
            None => true,
            Some((bl, babs, _)) => {
                rho.abs() > babs
                    || (rho.abs() == babs
                        && (lag.abs() < bl.abs() || (lag.abs() == bl.abs() && lag < bl)))
            }
        };
        if better {
            best = Some((lag, rho.abs(), rho));
        }
    }
    best
}
