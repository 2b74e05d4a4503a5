//! Closed-form metrics used as exact test subjects.

use alloc::vec::Vec;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::field::{MetricField, Signature};
use crate::jet::Jet;
use crate::math;
use crate::real::Real;

/// Diagonal factors of the round metric in iterated polar angles:
/// `1, sin²θ_1, sin²θ_1 sin²θ_2, ...`.
pub fn sphere_factors(angles: &[Jet]) -> Vec<Jet> {
    let mut out = Vec::with_capacity(angles.len());
    let Some(first) = angles.first() else {
        return out;
    };
    let mut acc = first.lift(1.0);
    for (i, a) in angles.iter().enumerate() {
        out.push(acc);
        if i + 1 < angles.len() {
            acc = acc * a.sin().square();
        }
    }
    out
}

/// Diagonal metric `head_0, head_1, ..., warp * dσ₀` with the sphere angles
/// taken from `x[head.len()..]`.
fn warped(head: Vec<Jet>, warp: Jet, x: &[Jet]) -> Vec<Jet> {
    let k = head.len();
    let mut d = head;
    d.extend(sphere_factors(&x[k..]).into_iter().map(|s| s * warp));
    d
}

fn check_n(n: usize) -> Result<()> {
    if !(2..=5).contains(&n) {
        return Err(Error::InvalidParameter(alloc::format!(
            "boundary dimension n = {n} outside the supported range 2..=5"
        )));
    }
    Ok(())
}

/// Global AdS in `n + 1` dimensions:
/// `-(1 + r²) dt² + dr²/(1 + r²) + r² dσ₀`.
pub fn ads(n: usize) -> Result<MetricField> {
    static_spacetime(n, 0.0)
}

/// Positive root of `1 + r² - M / r^{n-2}`, i.e. of `r^n + r^{n-2} - M`.
pub fn horizon_radius(n: usize, mass: f64) -> Option<f64> {
    if mass <= 0.0 {
        return None;
    }
    let p = |r: f64| math::powi(r, n as i32) + math::powi(r, n as i32 - 2) - mass;
    let (mut lo, mut hi) = (0.0, 1.0);
    while p(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if p(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 * hi {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}

/// `V(r) = 1 + r² - M / r^{n-2}` as a jet.
pub fn schwarzschild_lapse_sq(n: usize, mass: f64, r: &Jet) -> Jet {
    let base = r.square() + 1.0;
    if mass == 0.0 {
        base
    } else {
        base - r.powi(2 - n as i32) * mass
    }
}

/// Radial window where `V > 0`; returns `(r_min, sample_lo)`.
pub fn exterior_window(n: usize, mass: f64) -> (f64, f64) {
    match horizon_radius(n, mass) {
        Some(rh) => (rh, (rh + 0.2).max(0.5)),
        None => (0.0, 0.5),
    }
}

/// Schwarzschild-AdS `-V dt² + V^{-1} dr² + r² dσ₀` on its exterior.
pub fn schwarzschild_ads(n: usize, mass: f64) -> Result<MetricField> {
    static_spacetime(n, mass)
}

fn static_spacetime(n: usize, mass: f64) -> Result<MetricField> {
    check_n(n)?;
    let (r_min, lo) = exterior_window(n, mass);
    let chart = Chart::global_ads(n)
        .with_domain_range(1, r_min, f64::INFINITY)
        .with_sample_range(1, lo, lo.max(3.0));
    Ok(MetricField::diagonal(chart, Signature::Lorentzian, move |x| {
        let r = &x[1];
        let v = schwarzschild_lapse_sq(n, mass, r);
        warped(alloc::vec![-v, v.recip()], r.square(), x)
    }))
}

/// `-V(r) dt² + f(r)^{-1} dr² + r² dσ₀` for jet-level profiles.
pub fn static_from_profiles(
    chart: Chart,
    v: impl Fn(&Jet) -> Jet + Send + Sync + 'static,
    f: impl Fn(&Jet) -> Jet + Send + Sync + 'static,
) -> MetricField {
    MetricField::diagonal(chart, Signature::Lorentzian, move |x| {
        let r = &x[1];
        warped(alloc::vec![-v(r), f(r).recip()], r.square(), x)
    })
}

/// Global AdS written in the FG chart `(s, t, θ)`:
/// `s^{-2}(ds² - (1 + s²/4)² dt² + (1 - s²/4)² dσ₀)`.
pub fn ads_fg(n: usize) -> Result<MetricField> {
    check_n(n)?;
    Ok(MetricField::diagonal(Chart::fg_gauge(n), Signature::Lorentzian, |x| {
        let s = &x[0];
        let inv = s.square().recip();
        let a = s.square() * 0.25 + 1.0;
        let b = 1.0 - s.square() * 0.25;
        warped(alloc::vec![inv, -(a.square() * inv)], b.square() * inv, x)
    }))
}

/// Hyperbolic space in the static slice chart: `dr²/(1 + r²) + r² dσ₀`.
pub fn hyperbolic_ball(n: usize) -> Result<MetricField> {
    check_n(n)?;
    Ok(MetricField::diagonal(
        Chart::radial_slice(n),
        Signature::Riemannian,
        |x| {
            let r = &x[0];
            warped(alloc::vec![(r.square() + 1.0).recip()], r.square(), x)
        },
    ))
}

/// Hyperbolic space in geodesic polar form `ds² + sinh²s dσ₀`.
pub fn hyperbolic_polar(n: usize) -> Result<MetricField> {
    check_n(n)?;
    Ok(MetricField::diagonal(
        Chart::geodesic_polar(n),
        Signature::Riemannian,
        |x| {
            let s = &x[0];
            warped(alloc::vec![s.lift(1.0)], s.sinh().square(), x)
        },
    ))
}

/// Unit round sphere `S^m`.
pub fn round_sphere(m: usize) -> MetricField {
    MetricField::diagonal(Chart::sphere(m), Signature::Riemannian, sphere_factors)
}

/// Euclidean `R^d` in Cartesian coordinates.
pub fn euclidean(d: usize) -> MetricField {
    MetricField::diagonal(
        Chart::cartesian(d),
        Signature::Riemannian,
        move |x| alloc::vec![x[0].lift(1.0); d],
    )
}

/// `-dt² + g_H` on the global AdS chart: stationary but not Einstein.
pub fn ultrastatic_hyperbolic(n: usize) -> Result<MetricField> {
    check_n(n)?;
    Ok(MetricField::diagonal(
        Chart::global_ads(n),
        Signature::Lorentzian,
        |x| {
            let r = &x[1];
            warped(alloc::vec![r.lift(-1.0), (r.square() + 1.0).recip()], r.square(), x)
        },
    ))
}
