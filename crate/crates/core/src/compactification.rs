//! The compactified slice `(Σ, u² h)` with `u = 1/(√V + 1)`, the Bochner
//! identity for `W = V - |∇√V|² - 1`, and boundary geometry near `s = 0`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::catalog;
use crate::chart::ChartPoint;
use crate::error::{Error, Result};
use crate::fg::radial_fg_gauge;
use crate::field::{MetricField, ScalarField, Signature};
use crate::fit;
use crate::jet::Jet;
use crate::math;
use crate::static_system::StaticTriple;
use crate::tensor::{self, i2, Geometry};

/// A static slice together with its compactification.
#[derive(Debug, Clone)]
pub struct CompactifiedSlice {
    pub base: StaticTriple,
    pub u: ScalarField,
    pub gbar: MetricField,
    /// Constant multiplying `u` (1 for the standard defining function).
    pub scale: f64,
}

impl CompactifiedSlice {
    pub fn new(base: StaticTriple) -> Self {
        CompactifiedSlice::scaled(base, 1.0)
    }

    /// Uses `c u` in place of `u`.
    pub fn scaled(base: StaticTriple, c: f64) -> Self {
        let lapse = base.lapse();
        let u = ScalarField::new(base.chart().clone(), move |x| (lapse.eval_jets(x) + 1.0).recip() * c);
        let h = base.slice_metric();
        let uu = u.clone();
        let gbar = MetricField::new(base.chart().clone(), Signature::Riemannian, move |x| {
            let w = uu.eval_jets(x).square();
            h.components_jets(x).into_iter().map(|g| g * w).collect()
        });
        CompactifiedSlice {
            base,
            u,
            gbar,
            scale: c,
        }
    }
}

fn positive_lapse(u: &Jet, p: &ChartPoint) -> Result<()> {
    if u.value().is_nan() || u.value() <= 0.0 {
        return Err(Error::VanishingLapse {
            value: u.value() * u.value(),
            location: alloc::format!("r = {}", p.coords[0]),
        });
    }
    Ok(())
}

/// The three terms of `ΔW + 2|∇²√V - √V h|² - (∇√V/√V)·∇W` and their sum.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BochnerTerms {
    pub w: f64,
    pub laplace_w: f64,
    pub hessian_defect_sq: f64,
    pub drift: f64,
    pub residual: f64,
}

/// `W = V - |∇√V|² - 1` as a jet one order below `u`.
fn mass_aspect_jet(geo: &Geometry, u: &Jet) -> Jet {
    let grad = geo.grad_norm_sq(u);
    u.truncate(grad.order()).square() - grad - 1.0
}

pub fn bochner_residual(t: &StaticTriple, p: &ChartPoint) -> Result<BochnerTerms> {
    let geo = Geometry::at(&t.slice_metric(), p, 3)?;
    let u = t.lapse().jet(p, 3)?;
    positive_lapse(&u, p)?;
    let w = mass_aspect_jet(&geo, &u);
    let laplace_w = geo.laplacian(&w).value();
    let hess = geo.hessian(&u);
    let h = geo.metric_values();
    let defect: Vec<f64> = hess.iter().zip(&h).map(|(a, g)| a.value() - u.value() * g).collect();
    let hessian_defect_sq = geo.norm_sq2(&defect);
    let drift = geo.inner_gradients(&u, &w).value() / u.value();
    Ok(BochnerTerms {
        w: w.value(),
        laplace_w,
        hessian_defect_sq,
        drift,
        residual: laplace_w + 2.0 * hessian_defect_sq - drift,
    })
}

/// Scalar curvature of `u² h` three ways.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConformalScalar {
    /// Curvature engine applied to `u² h`.
    pub direct: f64,
    /// `u^{-(n+2)/2}(-(4(n-1)/(n-2)) Δ u^{(n-2)/2} + R[h] u^{(n-2)/2})`.
    pub conformal_laplacian: f64,
    /// `n(n-1) W`.
    pub rhs: f64,
}

impl ConformalScalar {
    pub fn max_spread(&self) -> f64 {
        let a = math::abs(self.direct - self.rhs);
        let b = math::abs(self.conformal_laplacian - self.rhs);
        let c = math::abs(self.direct - self.conformal_laplacian);
        a.max(b).max(c)
    }
}

pub fn conformal_scalar_check(c: &CompactifiedSlice, p: &ChartPoint) -> Result<ConformalScalar> {
    let t = &c.base;
    if t.n < 3 {
        return Err(Error::InvalidParameter(String::from("conformal formula needs n >= 3")));
    }
    let n = t.n as f64;
    let direct = tensor::scalar_curvature(&c.gbar, p)?;
    let geo = Geometry::at(&t.slice_metric(), p, 2)?;
    let lapse = t.lapse().jet(p, 2)?;
    positive_lapse(&lapse, p)?;
    let u = c.u.jet(p, 2)?;
    let k = (n - 2.0) / 2.0;
    let uk = u.powf(k);
    let r_h = geo.scalar_curvature().value();
    let conformal_laplacian = math::powf(u.value(), -(n + 2.0) / 2.0)
        * (-(4.0 * (n - 1.0) / (n - 2.0)) * geo.laplacian(&uk).value() + r_h * uk.value());
    let geo1 = Geometry::at(&t.slice_metric(), p, 1)?;
    let w = mass_aspect_jet(&geo1, &t.lapse().jet(p, 1)?).value();
    Ok(ConformalScalar {
        direct,
        conformal_laplacian,
        rhs: n * (n - 1.0) * w,
    })
}

/// Largest component of the Riemann tensor of `u² h`.
pub fn compactified_riemann_max(c: &CompactifiedSlice, p: &ChartPoint) -> Result<f64> {
    let bundle = tensor::curvature(&c.gbar, p)?;
    Ok(bundle.riemann.iter().fold(0.0, |m, v| m.max(math::abs(*v))))
}

/// Geometry of the sphere `{s = ε}` inside `(Σ, u² h)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BoundarySlice {
    pub epsilon: f64,
    pub radius: f64,
    /// `g_ind = a dσ₀`; this is `a`.
    pub induced_factor: f64,
    /// `II = b dσ₀` when umbilic; this is `tr II / (n - 1)` relative to `dσ₀`.
    pub second_form_factor: f64,
    /// `|II - (tr II/(n-1)) g_ind|` measured with `g_ind`.
    pub umbilicity_defect: f64,
    /// `|g_ind - dσ₀|` measured with `g_ind`.
    pub induced_distance: f64,
    /// `|II - dσ₀|` measured with `g_ind`.
    pub second_form_distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BoundaryReport {
    pub slices: Vec<BoundarySlice>,
    /// Extrapolated `ε → 0` limits of the two factors (three-point ladder).
    pub induced_limit: Option<f64>,
    pub second_form_limit: Option<f64>,
    /// Power-law exponents of the distances to `dσ₀` and of the defect.
    pub induced_decay: Option<f64>,
    pub second_form_decay: Option<f64>,
    pub defect_decay: Option<f64>,
}

/// Induced metric and second fundamental form of `{r = r₀}` at an angular
/// point, with the outward unit normal.
fn sphere_geometry(c: &CompactifiedSlice, p: &ChartPoint) -> Result<(Vec<f64>, Vec<f64>)> {
    let geo = Geometry::at(&c.gbar, p, 1)?;
    let d = geo.dim();
    let g = geo.metric_values();
    let ginv = geo.inverse_values();
    let gam = geo.gamma_values();
    let nr = 1.0 / math::sqrt(ginv[0]);
    let m = d - 1;
    let mut ind = vec![0.0; m * m];
    let mut ii = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            ind[i * m + j] = g[i2(d, i + 1, j + 1)];
            ii[i * m + j] = -nr * gam[(i + 1) * d + j + 1];
        }
    }
    Ok((ind, ii))
}

fn norm_with(metric: &[f64], m: usize, t: &[f64]) -> Result<f64> {
    let inv = crate::linalg::inverse(metric, m, 1e-300).ok_or(Error::DegenerateMetric {
        chart: String::from("boundary sphere"),
        det: 0.0,
    })?;
    let mut s = 0.0;
    for a in 0..m {
        for b in 0..m {
            for e in 0..m {
                for f in 0..m {
                    s += inv[a * m + e] * inv[b * m + f] * t[a * m + b] * t[e * m + f];
                }
            }
        }
    }
    Ok(math::sqrt(math::abs(s)))
}

/// Evaluates the `ε`-spheres of the FG defining function. Needs a
/// closed-form base triple (its radial profile feeds the gauge transform).
pub fn boundary_geometry(c: &CompactifiedSlice, epsilons: &[f64]) -> Result<BoundaryReport> {
    const GAUGE_ORDER: usize = 14;
    let t = &c.base;
    let profile = t.radial_profile(GAUGE_ORDER + 2).ok_or(Error::Asymptotics(
        "boundary geometry needs a closed-form radial profile",
    ))?;
    let gauge = radial_fg_gauge(&profile, GAUGE_ORDER)?;
    let chart = t.chart();
    let mut slices = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        if !(eps > 0.0 && eps <= 0.2) {
            return Err(Error::OutsideGaugeDomain(eps));
        }
        let x = gauge.x_of_s.eval(eps);
        let radius = 1.0 / x;
        let mut coords = vec![radius];
        coords.extend(chart.sample_box()[1..].iter().map(|iv| 0.5 * (iv.lo + iv.hi)));
        let p = chart.point(&coords)?;
        let (ind, ii) = sphere_geometry(c, &p)?;
        let m = t.n - 1;
        let angles: Vec<Jet> = coords[1..].iter().map(|&a| Jet::constant(1, 0, a)).collect();
        let sigma: Vec<f64> = catalog::sphere_factors(&angles).iter().map(Jet::value).collect();
        let mut round = vec![0.0; m * m];
        for i in 0..m {
            round[i * m + i] = sigma[i];
        }
        let tr: f64 = {
            let inv = crate::linalg::inverse(&ind, m, 1e-300).unwrap_or_else(|| vec![0.0; m * m]);
            (0..m)
                .flat_map(|a| (0..m).map(move |b| (a, b)))
                .map(|(a, b)| inv[a * m + b] * ii[a * m + b])
                .sum()
        };
        let mean = tr / m as f64;
        let traceless: Vec<f64> = ii.iter().zip(&ind).map(|(k, g)| k - mean * g).collect();
        let d_ind: Vec<f64> = ind.iter().zip(&round).map(|(a, b)| a - b).collect();
        let d_ii: Vec<f64> = ii.iter().zip(&round).map(|(a, b)| a - b).collect();
        slices.push(BoundarySlice {
            epsilon: eps,
            radius,
            induced_factor: ind[0] / sigma[0],
            second_form_factor: mean * ind[0] / sigma[0],
            umbilicity_defect: norm_with(&ind, m, &traceless)?,
            induced_distance: norm_with(&ind, m, &d_ind)?,
            second_form_distance: norm_with(&ind, m, &d_ii)?,
        });
    }
    let eps: Vec<f64> = slices.iter().map(|s| s.epsilon).collect();
    let fit_of = |f: &dyn Fn(&BoundarySlice) -> f64| {
        let ys: Vec<f64> = slices.iter().map(f).collect();
        fit::power_law(&eps, &ys).map(|p| p.exponent)
    };
    let limit_of = |f: &dyn Fn(&BoundarySlice) -> f64| {
        if slices.len() < 3 {
            return None;
        }
        let k = slices.len() - 3;
        let xs = [slices[k].epsilon, slices[k + 1].epsilon, slices[k + 2].epsilon];
        let ys = [f(&slices[k]), f(&slices[k + 1]), f(&slices[k + 2])];
        fit::limit_from_ladder(xs, ys).map(|(l, _)| l)
    };
    Ok(BoundaryReport {
        induced_limit: limit_of(&|s| s.induced_factor),
        second_form_limit: limit_of(&|s| s.second_form_factor),
        induced_decay: fit_of(&|s| s.induced_distance),
        second_form_decay: fit_of(&|s| s.second_form_distance),
        defect_decay: fit_of(&|s| s.umbilicity_defect),
        slices,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ScanReport {
    /// `min n(n-1) W` over the grid and where it is attained.
    pub min_value: f64,
    pub min_radius: f64,
    pub values: Vec<(f64, f64)>,
}

/// Scans `n(n-1) W = R[u²h]` over radii (angles at the chart's box centre).
pub fn nonneg_scalar_scan(t: &StaticTriple, radii: &[f64]) -> Result<ScanReport> {
    let chart = t.chart();
    let n = t.n as f64;
    let mut values = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut coords = vec![r];
        coords.extend(chart.sample_box()[1..].iter().map(|iv| 0.5 * (iv.lo + iv.hi)));
        let p = chart.point(&coords)?;
        values.push((r, n * (n - 1.0) * crate::static_system::mass_aspect_w(t, &p)?));
    }
    let (min_radius, min_value) =
        values.iter().copied().fold(
            (f64::NAN, f64::INFINITY),
            |(rm, vm), (r, v)| if v < vm { (r, v) } else { (rm, vm) },
        );
    Ok(ScanReport {
        min_value,
        min_radius,
        values,
    })
}

/// `|∇²φ - φ h|` with `φ = √V / c`.
pub fn rigidity_check(t: &StaticTriple, p: &ChartPoint, c: f64) -> Result<f64> {
    let geo = Geometry::at(&t.slice_metric(), p, 1)?;
    let phi = t.lapse().jet(p, 2)? * (1.0 / c);
    positive_lapse(&phi, p)?;
    let hess = geo.hessian(&phi);
    let h = geo.metric_values();
    let defect: Vec<f64> = hess.iter().zip(&h).map(|(a, g)| a.value() - phi.value() * g).collect();
    Ok(math::sqrt(math::abs(geo.norm_sq2(&defect))))
}
