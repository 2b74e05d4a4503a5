//! Power-law fits `y ≈ c x^p` by least squares in log-log space.

use crate::math;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PowerLaw {
    pub exponent: f64,
    pub prefactor: f64,
}

/// Fits `|y| = c x^p`. Returns `None` with fewer than two usable points
/// (zero or non-finite values are skipped).
pub fn power_law(x: &[f64], y: &[f64]) -> Option<PowerLaw> {
    let mut n = 0.0;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for (&xi, &yi) in x.iter().zip(y) {
        let ay = math::abs(yi);
        if xi <= 0.0 || ay == 0.0 || !ay.is_finite() {
            continue;
        }
        let (lx, ly) = (math::ln(xi), math::ln(ay));
        n += 1.0;
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    let det = n * sxx - sx * sx;
    if n < 2.0 || det == 0.0 {
        return None;
    }
    let p = (n * sxy - sx * sy) / det;
    let c = math::exp((sy - p * sx) / n);
    Some(PowerLaw {
        exponent: p,
        prefactor: c,
    })
}

/// Fits `y = L + c x^p` for the limit `L` using three consecutive points of a
/// geometric ladder (Aitken-style). Returns `(L, p)`.
pub fn limit_from_ladder(x: [f64; 3], y: [f64; 3]) -> Option<(f64, f64)> {
    let d1 = y[0] - y[1];
    let d2 = y[1] - y[2];
    if d1 == 0.0 && d2 == 0.0 {
        return Some((y[2], f64::INFINITY));
    }
    if d2 == 0.0 || d1 / d2 <= 0.0 {
        return None;
    }
    let ratio = x[0] / x[1];
    let p = math::ln(d1 / d2) / math::ln(ratio);
    let q = d1 / d2;
    let limit = y[2] - d2 / (q - 1.0);
    Some((limit, p))
}
