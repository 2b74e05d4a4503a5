//! Near-boundary expansion for the warped ansatz
//! `g = s^{-2}(ds² - A(s)² dt² + B(s)² dσ₀)` and the radial change of
//! variables that puts a static metric into that form.
//!
//! With `P = A²`, `Q = B²`, `m = n - 1`, `D = s d/ds`, `ℓ = DP/2P`,
//! `μ = DQ/2Q` and `L(x) = (1 - x)² + Dx`, the vacuum equations
//! `Ric + n g = 0` reduce to
//!
//! ```text
//! E1 = L(ℓ) + m(1-μ)(1-ℓ) - n                                 (tt)
//! E2 = -m L(μ) - L(ℓ) + n                                     (ss)
//! E3 = (m-1) s²/Q - m(1-μ)² - Dμ - (1-μ)(1-ℓ) + n              (sphere)
//! ```
//!
//! each a power series in `s`. At order `k` the linearization in
//! `(P_k, Q_k)` has rank two except at `k = n`, where every row is
//! proportional to `(1, m)`: that is the free trace-free datum.

use alloc::vec;
use alloc::vec::Vec;

use crate::catalog::sphere_factors;
use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::field::{MetricField, Signature};
use crate::jet::Jet;
use crate::linalg;
use crate::math;
use crate::real::Real;
use crate::series::TruncatedSeries;

/// `g_s = -P(s) dt² + Q(s) dσ₀` with `P = A²`, `Q = B²`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct WarpedSeriesMetric {
    pub n: usize,
    pub a2: TruncatedSeries,
    pub b2: TruncatedSeries,
}

impl WarpedSeriesMetric {
    /// Exact AdS: `A² = (1 + s²/4)²`, `B² = (1 - s²/4)²`.
    pub fn ads(n: usize, order: usize) -> Self {
        let poly = |sign: f64| {
            TruncatedSeries::new(vec![1.0, 0.0, 0.5 * sign, 0.0, 1.0 / 16.0])
                .extend_polynomial(order)
                .truncate(order)
        };
        WarpedSeriesMetric {
            n,
            a2: poly(1.0),
            b2: poly(-1.0),
        }
    }

    pub fn order(&self) -> usize {
        self.a2.order().min(self.b2.order())
    }

    pub fn a(&self) -> Result<TruncatedSeries> {
        self.a2.sqrt()
    }

    pub fn b(&self) -> Result<TruncatedSeries> {
        self.b2.sqrt()
    }

    /// The truncated polynomials as a space-time metric on the FG chart.
    pub fn to_metric_field(&self) -> MetricField {
        let a2 = self.a2.coeffs().to_vec();
        let b2 = self.b2.coeffs().to_vec();
        MetricField::diagonal(Chart::fg_gauge(self.n), Signature::Lorentzian, move |x| {
            let s = &x[0];
            let inv = s.square().recip();
            let p = horner(&a2, s);
            let q = horner(&b2, s);
            let mut d = vec![inv, -(p * inv)];
            d.extend(sphere_factors(&x[2..]).into_iter().map(|f| f * q * inv));
            d
        })
    }
}

fn horner(c: &[f64], s: &Jet) -> Jet {
    c.iter().rev().fold(s.lift(0.0), |acc, &ck| acc * *s + ck)
}

/// The three vacuum equations as series, truncated to the operand order.
pub fn vacuum_equations(n: usize, p: &TruncatedSeries, q: &TruncatedSeries) -> Result<[TruncatedSeries; 3]> {
    let order = p.order().min(q.order());
    let nf = n as f64;
    let m = nf - 1.0;
    let one = TruncatedSeries::constant(1.0, order);
    let ell = (&p.euler() * &p.invert()?).scale(0.5);
    let mu = (&q.euler() * &q.invert()?).scale(0.5);
    let l2 = |x: &TruncatedSeries| {
        let d = &one - x;
        &(&d * &d) + &x.euler()
    };
    let om = &one - &mu;
    let ol = &one - &ell;
    let cross = &om * &ol;
    let e1 = &(&l2(&ell) + &cross.scale(m)) + &one.scale(-nf);
    let e2 = &(&l2(&mu).scale(-m) - &l2(&ell)) + &one.scale(nf);
    let s2_over_q = q.invert()?.mul_by_power(2).truncate(order);
    let e3 = &(&(&(&s2_over_q.scale(m - 1.0) - &(&om * &om).scale(m)) - &mu.euler()) - &cross) + &one.scale(nf);
    Ok([e1, e2, e3])
}

/// Order-`n` data of the recursion; only `τ_00` is free (the sphere part is
/// fixed by the trace condition).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FreeData {
    /// `g_s ∋ τ_00 s^n dt²`.
    pub tau_00: f64,
    /// `g_s ∋ τ_sph s^n dσ₀`.
    pub tau_sph: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Diagnostics {
    /// `-τ_00 + m τ_sph`, the `(-dt² + dσ₀)`-trace of the order-`n` term.
    pub trace: f64,
    /// Largest equation coefficient left after solving each order.
    pub equation_residual: f64,
    /// Largest odd coefficient of `A²`, `B²` below order `n`.
    pub odd_below_n: f64,
    /// Orders actually computed (may be below the request for even `n`).
    pub computed_order: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FgSolution {
    pub metric: WarpedSeriesMetric,
    pub free_data: Option<FreeData>,
    /// `α = P_n - P_n(AdS) = -τ_00`; absent when the expansion stops below `n`.
    pub alpha: Option<f64>,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RecursionOptions {
    /// Order-`n` seed `τ_00` (zero reproduces AdS).
    pub seed: f64,
    /// For even `n`, accept truncation below the `s^n log s` order.
    pub truncate_below_log: bool,
}

fn ads_coeff_p(k: usize) -> f64 {
    match k {
        0 => 1.0,
        2 => 0.5,
        4 => 1.0 / 16.0,
        _ => 0.0,
    }
}

fn ads_coeff_q(k: usize) -> f64 {
    match k {
        0 => 1.0,
        2 => -0.5,
        4 => 1.0 / 16.0,
        _ => 0.0,
    }
}

/// Order-`k` coefficients of the equations with `(P_k, Q_k)` replaced.
fn order_k_residual(n: usize, p: &[f64], q: &[f64], k: usize, pk: f64, qk: f64) -> Result<[f64; 3]> {
    let mut pp = p[..=k].to_vec();
    let mut qq = q[..=k].to_vec();
    pp[k] = pk;
    qq[k] = qk;
    let e = vacuum_equations(n, &TruncatedSeries::new(pp), &TruncatedSeries::new(qq))?;
    Ok([e[0].coeff(k), e[1].coeff(k), e[2].coeff(k)])
}

/// Solves the vacuum equations order by order up to `order` (`N`).
pub fn fg_recursion(n: usize, order: usize, opts: RecursionOptions) -> Result<FgSolution> {
    if !(3..=5).contains(&n) {
        return Err(Error::InvalidParameter(alloc::format!(
            "recursion supports n in 3..=5, got {n}"
        )));
    }
    if order < n {
        return Err(Error::InvalidParameter(alloc::format!(
            "expansion order {order} is below the boundary dimension {n}"
        )));
    }
    let even = n.is_multiple_of(2);
    if even && !opts.truncate_below_log {
        return Err(Error::LogTerm { n });
    }
    let top = if even { n - 1 } else { order };
    let m = (n - 1) as f64;

    let mut p = vec![0.0; top + 1];
    let mut q = vec![0.0; top + 1];
    p[0] = 1.0;
    q[0] = 1.0;
    let mut worst = 0.0f64;
    let mut free = None;
    for k in 1..=top {
        let eval = |p: &[f64], q: &[f64], pk: f64, qk: f64| order_k_residual(n, p, q, k, pk, qk);
        let r0 = eval(&p, &q, 0.0, 0.0)?;
        let rp = eval(&p, &q, 1.0, 0.0)?;
        let rq = eval(&p, &q, 0.0, 1.0)?;
        let jp: Vec<f64> = (0..3).map(|i| rp[i] - r0[i]).collect();
        let jq: Vec<f64> = (0..3).map(|i| rq[i] - r0[i]).collect();
        let rhs: Vec<f64> = r0.iter().map(|v| -v).collect();
        if k == n {
            let pk = ads_coeff_p(k) - opts.seed;
            let b: Vec<f64> = (0..3).map(|i| rhs[i] - jp[i] * pk).collect();
            let qk = linalg::least_squares(&jq, &b, 3, 1).ok_or(Error::Series("degenerate order-n system"))?[0];
            p[k] = pk;
            q[k] = qk;
            free = Some(FreeData {
                tau_00: ads_coeff_p(k) - pk,
                tau_sph: qk - ads_coeff_q(k),
            });
        } else {
            let mut a = vec![0.0; 6];
            for i in 0..3 {
                a[2 * i] = jp[i];
                a[2 * i + 1] = jq[i];
            }
            let x = linalg::least_squares(&a, &rhs, 3, 2).ok_or(Error::Series("singular recursion step"))?;
            p[k] = x[0];
            q[k] = x[1];
        }
        let after = eval(&p, &q, p[k], q[k])?;
        worst = after.iter().fold(worst, |w, v| w.max(math::abs(*v)));
    }

    let odd = (1..n.min(top + 1))
        .filter(|k| k % 2 == 1)
        .fold(0.0f64, |w, k| w.max(math::abs(p[k])).max(math::abs(q[k])));
    let trace = free.map_or(0.0, |f| -f.tau_00 + m * f.tau_sph);
    let alpha = free.map(|f| -f.tau_00);
    Ok(FgSolution {
        metric: WarpedSeriesMetric {
            n,
            a2: TruncatedSeries::new(p),
            b2: TruncatedSeries::new(q),
        },
        free_data: free,
        alpha,
        diagnostics: Diagnostics {
            trace,
            equation_residual: worst,
            odd_below_n: odd,
            computed_order: top,
        },
    })
}

/// A static metric `-V dt² + f^{-1} dr² + r² dσ₀` through the polynomials
/// `v(x) = V/r²` and `φ(x) = f/r²` in `x = 1/r` (coefficients past the
/// stored ones are zero).
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub n: usize,
    pub v: TruncatedSeries,
    pub phi: TruncatedSeries,
}

impl RadialProfile {
    /// `V = f = 1 + r² - M r^{2-n}`.
    pub fn schwarzschild_ads(n: usize, mass: f64, order: usize) -> Self {
        let v = TruncatedSeries::from_fn(order, |k| match k {
            0 => 1.0,
            2 => 1.0,
            _ if k == n => -mass,
            _ => 0.0,
        });
        RadialProfile {
            n,
            v: v.clone(),
            phi: v,
        }
    }
}

/// Result of [`radial_fg_gauge`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RadialGauge {
    pub solution: FgSolution,
    /// `x = 1/r` as a series in `s`.
    pub x_of_s: TruncatedSeries,
    /// `s` as a series in `x = 1/r`.
    pub s_of_x: TruncatedSeries,
    /// Largest coefficient of `|ds|²_{s²g} - 1` as a series in `x`.
    pub gauge_defect: f64,
}

/// Puts a static metric into FG form by solving `ds/s = -dr/√f`.
pub fn radial_fg_gauge(profile: &RadialProfile, order: usize) -> Result<RadialGauge> {
    let n = profile.n;
    let work = order + 2;
    let v = profile.v.extend_polynomial(work).truncate(work);
    let phi = profile.phi.extend_polynomial(work).truncate(work);
    if math::abs(v.coeff(0) - 1.0) > 1e-12 || math::abs(phi.coeff(0) - 1.0) > 1e-12 || v.coeff(1) != 0.0 {
        return Err(Error::Asymptotics("V and f must grow like r² + O(1)"));
    }
    if phi.coeff(0) <= 0.0 {
        return Err(Error::Horizon { r: f64::INFINITY });
    }
    let c = &phi.powf(-0.5)? - &TruncatedSeries::constant(1.0, work);
    let integrand = c.div_by_variable()?;
    let s_of_x = integrand.integrate().truncate(work - 1).exp().mul_by_power(1);
    let x_of_s = s_of_x.reversion()?;
    let q = x_of_s.div_by_variable()?;
    let q2inv = (&q * &q).invert()?;
    let p = &q2inv * &v.compose(&x_of_s)?.truncate(q2inv.order());
    let b2 = q2inv.truncate(order);
    let a2 = p.truncate(order);
    if a2.order() < order {
        return Err(Error::Series("gauge transform lost too many orders"));
    }

    // |ds|²_{s²g} = (x s_x / s)² φ
    let ratio = &s_of_x.euler().div_by_variable()? * &s_of_x.div_by_variable()?.invert()?;
    let gauge = &(&ratio * &ratio) * &phi;
    let gauge_defect = (&gauge - &TruncatedSeries::constant(1.0, gauge.order()))
        .truncate(order)
        .max_abs();

    let m = (n - 1) as f64;
    let (free, alpha) = if n <= order {
        let tau_00 = ads_coeff_p(n) - a2.coeff(n);
        let tau_sph = b2.coeff(n) - ads_coeff_q(n);
        (Some(FreeData { tau_00, tau_sph }), Some(-tau_00))
    } else {
        (None, None)
    };
    let eq = vacuum_equations(n, &a2, &b2)?;
    let equation_residual = eq.iter().fold(0.0f64, |w, e| w.max(e.max_abs()));
    let odd = (1..n.min(order + 1))
        .filter(|k| k % 2 == 1)
        .fold(0.0f64, |w, k| w.max(math::abs(a2.coeff(k))).max(math::abs(b2.coeff(k))));
    Ok(RadialGauge {
        solution: FgSolution {
            metric: WarpedSeriesMetric { n, a2, b2 },
            free_data: free,
            alpha,
            diagnostics: Diagnostics {
                trace: free.map_or(0.0, |f| -f.tau_00 + m * f.tau_sph),
                equation_residual,
                odd_below_n: odd,
                computed_order: order,
            },
        },
        x_of_s,
        s_of_x,
        gauge_defect,
    })
}
