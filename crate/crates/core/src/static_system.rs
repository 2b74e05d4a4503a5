//! Static vacuum triples `(Σ, h, √V)` in the radial gauge
//! `h = f(r)^{-1} dr² + r² dσ₀`, their residuals, and a shooting solver.
//!
//! With `m = n - 1`, the sphere component of `Ric[h] + nh = ∇²√V/√V` gives
//! `r f' = 2((m-1)(1-f) + n r²) - r f V'/V`, and eliminating `V''` between
//! `Δ√V = n√V` and the radial component gives `(ln V)' = (ln f)'`. The two
//! together are the reduced system
//!
//! ```text
//! f' = ((m-1)(1-f) + n r²) / r
//! V' = V f' / f
//! ```
//!
//! which is regular through `V = f = 0`, so horizons show up as sign changes.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::catalog;
use crate::chart::{Chart, ChartPoint};
use crate::error::{Error, Result};
use crate::fg::RadialProfile;
use crate::field::{MetricField, ScalarField, Signature};
use crate::jet::Jet;
use crate::math;
use crate::ode::{self, Stop, Tolerances};
use crate::real::Real;
use crate::series::TruncatedSeries;
use crate::tensor::{i2, Geometry};

pub use crate::catalog::horizon_radius;

type Profile = Arc<dyn Fn(&Jet) -> Jet + Send + Sync>;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Provenance {
    ClosedForm(String),
    Shooting,
}

/// Slice data `(h, √V)` with `V(r)`, `f(r)` on the radial slice chart.
#[derive(Clone)]
pub struct StaticTriple {
    pub n: usize,
    pub domain: (f64, f64),
    pub provenance: Provenance,
    /// Set for Schwarzschild-AdS with negative mass.
    pub naked_singularity: bool,
    /// Mass parameter of a closed-form Schwarzschild-AdS triple.
    pub mass: Option<f64>,
    v: Profile,
    f: Profile,
    chart: Chart,
}

impl fmt::Debug for StaticTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StaticTriple")
            .field("n", &self.n)
            .field("domain", &self.domain)
            .field("provenance", &self.provenance)
            .field("naked_singularity", &self.naked_singularity)
            .finish()
    }
}

impl StaticTriple {
    /// A triple from radial profiles. `sample` is the radial window random
    /// points are drawn from.
    pub fn from_profiles(
        n: usize,
        domain: (f64, f64),
        sample: (f64, f64),
        provenance: Provenance,
        v: impl Fn(&Jet) -> Jet + Send + Sync + 'static,
        f: impl Fn(&Jet) -> Jet + Send + Sync + 'static,
    ) -> Self {
        let chart = Chart::radial_slice(n)
            .with_domain_range(0, domain.0, domain.1)
            .with_sample_range(0, sample.0, sample.1);
        StaticTriple {
            n,
            domain,
            provenance,
            naked_singularity: false,
            mass: None,
            v: Arc::new(v),
            f: Arc::new(f),
            chart,
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn lapse_sq(&self) -> ScalarField {
        let v = self.v.clone();
        ScalarField::new(self.chart.clone(), move |x| v(&x[0]))
    }

    /// `√V`.
    pub fn lapse(&self) -> ScalarField {
        let v = self.v.clone();
        ScalarField::new(self.chart.clone(), move |x| v(&x[0]).sqrt())
    }

    pub fn radial_f(&self) -> ScalarField {
        let f = self.f.clone();
        ScalarField::new(self.chart.clone(), move |x| f(&x[0]))
    }

    pub fn v_at(&self, r: f64) -> f64 {
        (self.v)(&Jet::constant(1, 0, r)).value()
    }

    pub fn f_at(&self, r: f64) -> f64 {
        (self.f)(&Jet::constant(1, 0, r)).value()
    }

    /// `h = f^{-1} dr² + r² dσ₀`.
    pub fn slice_metric(&self) -> MetricField {
        let f = self.f.clone();
        MetricField::diagonal(self.chart.clone(), Signature::Riemannian, move |x| {
            let r = &x[0];
            let mut d = vec![f(r).recip()];
            d.extend(catalog::sphere_factors(&x[1..]).into_iter().map(|s| s * r.square()));
            d
        })
    }

    /// The space-time `-V dt² + h` on the global chart.
    pub fn spacetime(&self) -> MetricField {
        let (v, f) = (self.v.clone(), self.f.clone());
        let chart = Chart::global_ads(self.n)
            .with_domain_range(1, self.domain.0, self.domain.1)
            .with_sample_range(1, self.chart.sample_box()[0].lo, self.chart.sample_box()[0].hi);
        catalog::static_from_profiles(chart, move |r| v(r), move |r| f(r))
    }

    /// Same slice with `V` replaced by `V · k(r)` (for control cases).
    pub fn with_lapse_factor(&self, k: impl Fn(&Jet) -> Jet + Send + Sync + 'static) -> Self {
        let v = self.v.clone();
        let mut out = self.clone();
        out.v = Arc::new(move |r| v(r) * k(r));
        out.mass = None;
        out.provenance = Provenance::ClosedForm(String::from("perturbed"));
        out
    }

    /// `V/r²` and `f/r²` as polynomials in `1/r`, for closed-form triples.
    pub fn radial_profile(&self, order: usize) -> Option<RadialProfile> {
        self.mass.map(|m| RadialProfile::schwarzschild_ads(self.n, m, order))
    }

    fn check_point(&self, p: &ChartPoint) -> Result<()> {
        let v = self.lapse_sq().value(p)?;
        if v <= 0.0 {
            return Err(Error::VanishingLapse {
                value: v,
                location: alloc::format!("r = {}", p.coords[0]),
            });
        }
        Ok(())
    }
}

/// AdS slice: `V = f = 1 + r²`, i.e. `(R^n, g_H, √(1 + r²))`.
pub fn ads_triple(n: usize) -> Result<StaticTriple> {
    let mut t = schwarzschild_ads(n, 0.0)?;
    t.provenance = Provenance::ClosedForm(String::from("ads"));
    Ok(t)
}

/// `V = f = 1 + r² - M / r^{n-2}` outside the horizon.
pub fn schwarzschild_ads(n: usize, mass: f64) -> Result<StaticTriple> {
    if !(3..=5).contains(&n) {
        return Err(Error::InvalidParameter(alloc::format!("n = {n} outside 3..=5")));
    }
    if !mass.is_finite() {
        return Err(Error::InvalidParameter(String::from("mass must be finite")));
    }
    let lo = horizon_radius(n, mass).unwrap_or(0.0);
    let sample = if lo > 0.0 { (lo * 1.05, 10.0) } else { (0.1, 10.0) };
    let profile = move |r: &Jet| catalog::schwarzschild_lapse_sq(n, mass, r);
    let mut t = StaticTriple::from_profiles(
        n,
        (lo, f64::INFINITY),
        sample,
        Provenance::ClosedForm(String::from("schwarzschild-ads")),
        profile,
        profile,
    );
    t.naked_singularity = mass < 0.0;
    t.mass = Some(mass);
    Ok(t)
}

/// `(Δ√V - n√V, Ric[h] + n h - ∇²√V/√V)` at a point of the slice.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticResidual {
    pub laplace: f64,
    pub tensor: Vec<f64>,
    /// `max(1, max |n h_ab|)`, for relative comparisons.
    pub scale: f64,
}

impl StaticResidual {
    pub fn max_abs(&self) -> f64 {
        self.tensor
            .iter()
            .fold(math::abs(self.laplace), |m, v| m.max(math::abs(*v)))
    }

    pub fn relative(&self) -> f64 {
        self.max_abs() / self.scale
    }
}

pub fn static_residual(t: &StaticTriple, p: &ChartPoint) -> Result<StaticResidual> {
    t.check_point(p)?;
    let geo = Geometry::at(&t.slice_metric(), p, 2)?;
    let u = t.lapse().jet(p, 2)?;
    let n = t.n as f64;
    let laplace = geo.laplacian(&u).value() - n * u.value();
    let hess = geo.hessian(&u);
    let ric = geo.ricci();
    let h = geo.metric_values();
    let d = geo.dim();
    let mut tensor = vec![0.0; d * d];
    let mut scale = 1.0f64;
    for a in 0..d {
        for b in 0..d {
            let k = i2(d, a, b);
            tensor[k] = ric[k].value() + n * h[k] - hess[k].value() / u.value();
            scale = scale.max(math::abs(n * h[k]));
        }
    }
    Ok(StaticResidual { laplace, tensor, scale })
}

/// `W = V - |∇√V|²_h - 1`.
pub fn mass_aspect_w(t: &StaticTriple, p: &ChartPoint) -> Result<f64> {
    t.check_point(p)?;
    let geo = Geometry::at(&t.slice_metric(), p, 0)?;
    let u = t.lapse().jet(p, 1)?;
    Ok(u.value() * u.value() - geo.grad_norm_sq(&u).value() - 1.0)
}

/// Right-hand side of the reduced system in `y = (V, f)`.
pub fn reduced_rhs<T: Real>(n: usize, r: &T, y: &[T; 2]) -> [T; 2] {
    let nf = n as f64;
    let m = nf - 1.0;
    let (v, f) = (y[0].clone(), y[1].clone());
    let df = ((-f.clone() + 1.0) * (m - 1.0) + r.clone() * r.clone() * nf) / r.clone();
    let dv = v / f * df.clone();
    [dv, df]
}

/// Defect of closed-form data `(V, V')`, `(f, f')` in the reduced system.
pub fn reduced_ode_defect(n: usize, r: f64, v: [f64; 2], f: [f64; 2]) -> [f64; 2] {
    let rhs = reduced_rhs(n, &r, &[v[0], f[0]]);
    [v[1] - rhs[0], f[1] - rhs[1]]
}

/// Taylor coefficients of `(V, f)` about `r0` to degree `order`, obtained by
/// running the right-hand side over truncated series.
pub fn taylor_coefficients(n: usize, r0: f64, y0: [f64; 2], order: usize) -> [TruncatedSeries; 2] {
    let mut c: [Vec<f64>; 2] = [vec![y0[0]], vec![y0[1]]];
    for k in 0..order {
        let ys = [TruncatedSeries::new(c[0].clone()), TruncatedSeries::new(c[1].clone())];
        let r = TruncatedSeries::affine(r0, k);
        let rhs = reduced_rhs(n, &r, &ys);
        for j in 0..2 {
            c[j].push(rhs[j].coeff(k) / (k + 1) as f64);
        }
    }
    c.map(TruncatedSeries::new)
}

/// Regular-center data `V(0) = V₀`, `V'(0) = 0`, `f(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterData {
    pub v0: f64,
}

/// Series `(V, f)` about `r = 0` solving the cleared-denominator equations
/// order by order.
pub fn center_series(n: usize, center: CenterData, order: usize) -> Result<(TruncatedSeries, TruncatedSeries)> {
    if center.v0 <= 0.0 {
        return Err(Error::InvalidParameter(String::from("V0 must be positive")));
    }
    let mut a = vec![0.0; order + 2];
    let mut b = vec![0.0; order + 2];
    a[0] = center.v0;
    b[0] = 1.0;
    for k in 1..=order {
        let eval = |a: &[f64], b: &[f64], ak: f64, bk: f64| {
            let mut aa = a[..=k].to_vec();
            let mut bb = b[..=k].to_vec();
            aa[k] = ak;
            bb[k] = bk;
            let r = cleared_residuals(n, &TruncatedSeries::new(aa), &TruncatedSeries::new(bb));
            [r[0].coeff(k - 1), r[1].coeff(k)]
        };
        let r0 = eval(&a, &b, 0.0, 0.0);
        let ra = eval(&a, &b, 1.0, 0.0);
        let rb = eval(&a, &b, 0.0, 1.0);
        let m = [ra[0] - r0[0], rb[0] - r0[0], ra[1] - r0[1], rb[1] - r0[1]];
        let det = m[0] * m[3] - m[1] * m[2];
        if det == 0.0 {
            return Err(Error::Series("singular start-up system"));
        }
        a[k] = (-r0[0] * m[3] + r0[1] * m[1]) / det;
        b[k] = (-r0[1] * m[0] + r0[0] * m[2]) / det;
    }
    a.truncate(order + 1);
    b.truncate(order + 1);
    Ok((TruncatedSeries::new(a), TruncatedSeries::new(b)))
}

/// `R0 = 2Vfr V'' - f r V'² + r V f' V' + 2m V f V' - 4n r V²` and
/// `R2 = r V f' - 2V((m-1)(1-f) + n r²) + r f V'`, with `r` the series variable.
fn cleared_residuals(n: usize, v: &TruncatedSeries, f: &TruncatedSeries) -> [TruncatedSeries; 2] {
    let order = v.order().min(f.order());
    let nf = n as f64;
    let m = nf - 1.0;
    let r = TruncatedSeries::variable(order);
    let dv = v.differentiate().extend_polynomial(order);
    let ddv = dv.differentiate().extend_polynomial(order);
    let df = f.differentiate().extend_polynomial(order);
    let vf = v * f;
    let r0 =
        (&vf * &r).scale(2.0) * ddv - &(&(f * &r) * &dv) * &dv + &(&(&r * v) * &df) * &dv + (&vf * &dv).scale(2.0 * m)
            - (&(&r * v) * v).scale(4.0 * nf);
    let one = TruncatedSeries::constant(1.0, order);
    let bracket = (&one - f).scale(m - 1.0) + (&r * &r).scale(nf);
    let r2 = &(&(&r * v) * &df) - &(v * &bracket).scale(2.0) + (&(&r * f) * &dv);
    [r0, r2]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Outcome {
    /// Reached the requested end with `V, f > 0`.
    Global,
    /// `V` hit zero at finite radius.
    Horizon,
    /// Step-size underflow or loss of positivity other than `V = 0`.
    Blowup,
}

/// One stored sample with its local Taylor data.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub r: f64,
    pub v: TruncatedSeries,
    pub f: TruncatedSeries,
}

#[derive(Debug, Clone)]
pub struct ShootingResult {
    pub triple: StaticTriple,
    pub outcome: Outcome,
    pub event_radius: Option<f64>,
    pub samples: Arc<Vec<Sample>>,
    pub rejected_steps: usize,
}

impl ShootingResult {
    /// `(r, V, V', f)` at each stored sample.
    pub fn table(&self) -> Vec<(f64, f64, f64, f64)> {
        self.samples
            .iter()
            .map(|s| (s.r, s.v.coeff(0), s.v.coeff(1), s.f.coeff(0)))
            .collect()
    }

    /// `max |V - V₀(1+r²)| / (V₀(1+r²))` over the samples.
    pub fn scaled_ads_deviation(&self, v0: f64) -> f64 {
        self.samples.iter().fold(0.0, |m, s| {
            let exact = v0 * (1.0 + s.r * s.r);
            m.max(math::abs(s.v.coeff(0) - exact) / exact)
        })
    }

    /// `max |f - V|` and `max |f - V/V₀|` over the samples.
    pub fn f_minus_v(&self, v0: f64) -> (f64, f64) {
        self.samples.iter().fold((0.0, 0.0), |(a, b), s| {
            let (v, f) = (s.v.coeff(0), s.f.coeff(0));
            (a.max(math::abs(f - v)), b.max(math::abs(f - v / v0)))
        })
    }

    pub fn sample_points(&self) -> Result<Vec<ChartPoint>> {
        let chart = self.triple.chart();
        let mut coords = vec![0.0; self.triple.n];
        for (i, iv) in chart.sample_box()[1..].iter().enumerate() {
            coords[i + 1] = 0.5 * (iv.lo + iv.hi);
        }
        self.samples
            .iter()
            .filter(|s| chart.domain()[0].contains(s.r))
            .map(|s| {
                coords[0] = s.r;
                chart.point(&coords)
            })
            .collect()
    }
}

const TAYLOR_ORDER: usize = 8;

/// Integrates the reduced system from `(r0, (V, f))` to `r_end` in either
/// direction, stopping where `V` or `f` changes sign.
pub fn integrate_from(n: usize, r0: f64, y0: [f64; 2], r_end: f64, tol: &Tolerances) -> Result<ShootingResult> {
    integrate_with_prefix(n, r0, y0, r_end, tol, Vec::new())
}

fn integrate_with_prefix(
    n: usize,
    r0: f64,
    y0: [f64; 2],
    r_end: f64,
    tol: &Tolerances,
    mut samples: Vec<Sample>,
) -> Result<ShootingResult> {
    if !(3..=5).contains(&n) {
        return Err(Error::InvalidParameter(alloc::format!("n = {n} outside 3..=5")));
    }
    if y0[0] <= 0.0 || y0[1] <= 0.0 {
        return Err(Error::InvalidParameter(String::from(
            "initial V and f must be positive",
        )));
    }
    let rhs = |r: f64, y: &[f64], dy: &mut [f64]| {
        let out = reduced_rhs(n, &r, &[y[0], y[1]]);
        dy.copy_from_slice(&out);
    };
    let event = |_: f64, y: &[f64]| y[0].min(y[1]);
    let tr = ode::integrate(rhs, r0, &y0, r_end, tol, Some(event));
    let (outcome, event_radius) = match tr.stop {
        Stop::Completed => (Outcome::Global, None),
        Stop::Event { t } => {
            let (_, y) = tr.last();
            if math::abs(y[0]) < 1e-8 {
                (Outcome::Horizon, Some(t))
            } else {
                (Outcome::Blowup, Some(t))
            }
        }
        Stop::Blowup { .. } => (Outcome::Blowup, None),
    };
    let keep = match tr.stop {
        Stop::Event { .. } => tr.t.len() - 1,
        _ => tr.t.len(),
    };
    for (r, y) in tr.t.iter().zip(&tr.y).take(keep) {
        let [v, f] = taylor_coefficients(n, *r, [y[0], y[1]], TAYLOR_ORDER);
        samples.push(Sample { r: *r, v, f });
    }
    samples.sort_by(|a, b| a.r.total_cmp(&b.r));
    let samples = Arc::new(samples);
    let lo = samples.first().map_or(r0, |s| s.r);
    let hi = samples.last().map_or(r0, |s| s.r);
    let domain = (event_radius.map_or(0.0, |e| e.min(lo)), f64::INFINITY);
    let (sv, sf) = (samples.clone(), samples.clone());
    let triple = StaticTriple::from_profiles(
        n,
        domain,
        (lo, hi),
        Provenance::Shooting,
        move |r| eval_nearest(&sv, r, |s| &s.v),
        move |r| eval_nearest(&sf, r, |s| &s.f),
    );
    Ok(ShootingResult {
        triple,
        outcome,
        event_radius,
        samples,
        rejected_steps: tr.rejected,
    })
}

/// Evaluates the local Taylor polynomial of the sample nearest to `r`.
fn eval_nearest(samples: &[Sample], r: &Jet, pick: impl Fn(&Sample) -> &TruncatedSeries) -> Jet {
    let x = r.value();
    let idx = match samples.binary_search_by(|s| s.r.total_cmp(&x)) {
        Ok(i) => i,
        Err(0) => 0,
        Err(i) if i >= samples.len() => samples.len() - 1,
        Err(i) => {
            if x - samples[i - 1].r <= samples[i].r - x {
                i - 1
            } else {
                i
            }
        }
    };
    let s = &samples[idx];
    let dx = *r - s.r;
    pick(s).coeffs().iter().rev().fold(r.lift(0.0), |acc, &c| acc * dx + c)
}

/// Shoots outward from a regular center to `r_max`.
pub fn shoot(n: usize, center: CenterData, r_max: f64, tol: &Tolerances) -> Result<ShootingResult> {
    const START: f64 = 0.25;
    let (v, f) = center_series(n, center, 4)?;
    let y0 = [v.eval(START), f.eval(START)];
    integrate_with_prefix(n, START, y0, r_max, tol, Vec::new())
}
