//! Killing residuals, the twist form `θ = ω ∧ dω` and its identities, and
//! the flux of `(ω/V) ∧ *θ` through small spheres near the boundary.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::catalog;
use crate::chart::{ChartPoint, FG_GAUGE};
use crate::conventions::LAPSE_FLOOR;
use crate::error::{Error, Result};
use crate::field::{MetricField, Signature, VectorField};
use crate::fit;
use crate::forms::{basis, Form};
use crate::jet::Jet;
use crate::math;
use crate::quadrature;
use crate::tensor::{i2, Geometry};

/// A Lorentzian metric with a candidate Killing field.
#[derive(Debug, Clone)]
pub struct StationaryData {
    pub g: MetricField,
    pub x: VectorField,
}

/// Pointwise jets of `g`, `X`, `ω = g(X, ·)` and `V = -g(X, X)`.
#[derive(Debug, Clone)]
pub struct KillingJets {
    pub geometry: Geometry,
    pub x: Vec<Jet>,
    pub omega: Form<Jet>,
    pub v: Jet,
}

impl StationaryData {
    pub fn new(g: MetricField, x: VectorField) -> Result<Self> {
        if g.chart().id() != x.chart().id() {
            return Err(Error::ChartMismatch {
                expected: g.chart().id().to_string(),
                got: x.chart().id().to_string(),
            });
        }
        if g.signature() != Signature::Lorentzian {
            return Err(Error::SignatureMismatch {
                chart: g.chart().id().to_string(),
                negative: 0,
                expected: 1,
            });
        }
        Ok(StationaryData { g, x })
    }

    pub fn jets(&self, p: &ChartPoint, order: usize) -> Result<KillingJets> {
        let geometry = Geometry::at(&self.g, p, order)?;
        let x = self.x.components(p, order)?;
        let lowered = geometry.lower(&x);
        let v = -lowered
            .iter()
            .zip(&x)
            .fold(Jet::constant(x.len(), lowered[0].order(), 0.0), |acc, (w, xa)| {
                acc + *w * xa.truncate(w.order())
            });
        Ok(KillingJets {
            geometry,
            x,
            omega: Form::one_form(lowered),
            v,
        })
    }

    /// `V = -g(X, X)` at `p`.
    pub fn lapse_sq(&self, p: &ChartPoint) -> Result<f64> {
        Ok(self.jets(p, 0)?.v.value())
    }
}

fn refuse_vanishing(v: &Jet, p: &ChartPoint) -> Result<()> {
    if math::abs(v.value()) < LAPSE_FLOOR {
        return Err(Error::VanishingLapse {
            value: v.value(),
            location: format!("{}{:?}", p.chart_id, p.coords),
        });
    }
    Ok(())
}

/// `(L_X g)_{ab} = X^c ∂_c g_{ab} + g_{cb} ∂_a X^c + g_{ac} ∂_b X^c`.
pub fn killing_residual(data: &StationaryData, p: &ChartPoint) -> Result<Vec<f64>> {
    let geo = Geometry::at(&data.g, p, 1)?;
    let x = data.x.components(p, 1)?;
    let d = geo.dim();
    let g = geo.metric();
    let mut out = vec![0.0; d * d];
    for a in 0..d {
        for b in 0..d {
            let mut v = 0.0;
            for c in 0..d {
                v += x[c].value() * g[i2(d, a, b)].d1(c)
                    + g[i2(d, c, b)].value() * x[c].d1(a)
                    + g[i2(d, a, c)].value() * x[c].d1(b);
            }
            out[i2(d, a, b)] = v;
        }
    }
    Ok(out)
}

fn twist_jets(k: &KillingJets) -> Form<Jet> {
    k.omega.wedge(&k.omega.exterior_derivative())
}

/// `θ = ω ∧ dω` (the empty zero form below dimension three).
pub fn twist(data: &StationaryData, p: &ChartPoint) -> Result<Form<f64>> {
    Ok(twist_jets(&data.jets(p, 1)?).values())
}

/// `i_X θ / V² + d(ω / V)`.
pub fn lichnerowicz_residual(data: &StationaryData, p: &ChartPoint) -> Result<Form<f64>> {
    let k = data.jets(p, 2)?;
    refuse_vanishing(&k.v, p)?;
    let theta = twist_jets(&k).values();
    let v = k.v.value();
    let xv: Vec<f64> = k.x.iter().map(Jet::value).collect();
    let lhs = theta.interior(&xv).scale(&(1.0 / (v * v)));
    let inv = k.v.recip();
    let rhs = k.omega.map(|w| *w * inv).exterior_derivative().values();
    Ok(lhs.add(&rhs))
}

/// `d*θ` together with the Einstein defect of the metric at the point.
#[derive(Debug, Clone, PartialEq)]
pub struct DualTwist {
    pub d_star_theta: Form<f64>,
    /// Largest component of `Ric + n g` at the point.
    pub einstein_defect: f64,
}

pub fn dual_twist_closure(data: &StationaryData, p: &ChartPoint) -> Result<DualTwist> {
    let k = data.jets(p, 3)?;
    let theta = twist_jets(&k);
    let star = k.geometry.hodge(&theta);
    let d_star_theta = star.exterior_derivative().values();
    let n = (k.geometry.dim() - 1) as f64;
    let ric = k.geometry.ricci();
    let einstein_defect = ric
        .iter()
        .zip(k.geometry.metric())
        .map(|(r, g)| math::abs(r.value() + n * g.value()))
        .fold(0.0, f64::max);
    Ok(DualTwist {
        d_star_theta,
        einstein_defect,
    })
}

/// `θ ∧ ω`, which vanishes identically.
pub fn twist_wedge_omega(data: &StationaryData, p: &ChartPoint) -> Result<Form<f64>> {
    let k = data.jets(p, 1)?;
    Ok(twist_jets(&k).values().wedge(&k.omega.values()))
}

/// `d((ω/V) ∧ *θ) + i_X(θ ∧ *θ) / V²`.
pub fn flux_identity_residual(data: &StationaryData, p: &ChartPoint) -> Result<Form<f64>> {
    let k = data.jets(p, 3)?;
    refuse_vanishing(&k.v, p)?;
    let theta = twist_jets(&k);
    let star = k.geometry.hodge(&theta);
    let inv = k.v.recip();
    let current = k.omega.map(|w| (*w * inv).truncate(1)).wedge(&star);
    let lhs = current.exterior_derivative().values();
    let v = k.v.value();
    let xv: Vec<f64> = k.x.iter().map(Jet::value).collect();
    let top = theta.values().wedge(&star.values());
    let rhs = top.interior(&xv).scale(&(1.0 / (v * v)));
    Ok(lhs.add(&rhs))
}

/// The `(d-2)`-form `(ω/V) ∧ *θ`.
pub fn flux_current(data: &StationaryData, p: &ChartPoint) -> Result<Form<f64>> {
    let k = data.jets(p, 1)?;
    refuse_vanishing(&k.v, p)?;
    let theta = twist_jets(&k).values();
    let star = theta_star(&k, &theta);
    Ok(k.omega.values().scale(&(1.0 / k.v.value())).wedge(&star))
}

fn theta_star(k: &KillingJets, theta: &Form<f64>) -> Form<f64> {
    let ginv = k.geometry.inverse_values();
    let vol = k.geometry.volume_factor().value();
    theta.hodge_with(&ginv, &vol)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FluxReport {
    pub epsilon: f64,
    pub flux: f64,
    pub quadrature_nodes: usize,
    /// Same integral with half the nodes per angle.
    pub coarse_flux: f64,
    pub converged: bool,
    /// Slope of `log|flux|` against `log ε` over the whole ladder.
    pub decay_fit: Option<f64>,
}

/// Integral of the pullback of `(ω/V) ∧ *θ` to `{s = ε, t = t₀}`.
pub fn flux_integral(data: &StationaryData, epsilon: f64, t0: f64, nodes: usize) -> Result<FluxReport> {
    let chart = data.g.chart();
    if chart.id() != FG_GAUGE {
        return Err(Error::ChartMismatch {
            expected: FG_GAUGE.to_string(),
            got: chart.id().to_string(),
        });
    }
    let d = chart.dim();
    // the angles are coordinates 2..d
    let mask: u8 = (((1u16 << d) - 1) & !0b11) as u8;
    let bounds: Vec<(f64, f64)> = chart.domain()[2..].iter().map(|iv| (iv.lo, iv.hi)).collect();
    let mut failure: Option<Error> = None;
    let mut integrate = |nodes: usize| {
        quadrature::integrate_box(&bounds, nodes, |angles| {
            let mut coords = vec![epsilon, t0];
            coords.extend_from_slice(angles);
            let value = chart
                .point(&coords)
                .and_then(|p| flux_current(data, &p))
                .map(|form| form.get_mask(mask).copied().unwrap_or(0.0));
            match value {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        })
    };
    let coarse = integrate(nodes / 2);
    let flux = integrate(nodes);
    if let Some(e) = failure {
        return Err(e);
    }
    let diff = math::abs(flux - coarse);
    Ok(FluxReport {
        epsilon,
        flux,
        quadrature_nodes: nodes,
        coarse_flux: coarse,
        converged: diff <= 1e-6 * math::abs(flux) || diff <= 1e-14,
        decay_fit: None,
    })
}

/// Flux over a ladder of `ε` values; the decay fit needs at least three.
pub fn flux_ladder(data: &StationaryData, epsilons: &[f64], t0: f64, nodes: usize) -> Result<Vec<FluxReport>> {
    let mut reports = epsilons
        .iter()
        .map(|&e| flux_integral(data, e, t0, nodes))
        .collect::<Result<Vec<_>>>()?;
    if reports.len() >= 3 {
        let xs: Vec<f64> = reports.iter().map(|r| r.epsilon).collect();
        let ys: Vec<f64> = reports.iter().map(|r| r.flux).collect();
        let slope = fit::power_law(&xs, &ys).map(|f| f.exponent);
        for r in &mut reports {
            r.decay_fit = slope;
        }
    }
    Ok(reports)
}

/// Named Killing fields of global AdS: `∂_t`, `∂_φ` (the azimuth) and the
/// helical combination `∂_t + λ ∂_φ`.
pub fn ads_killing_catalog(n: usize, lambda: f64) -> Result<Vec<(String, StationaryData)>> {
    let g = catalog::ads(n)?;
    let d = n + 1;
    let unit = |entries: &[(usize, f64)]| {
        let mut c = vec![0.0; d];
        for &(i, v) in entries {
            c[i] = v;
        }
        VectorField::coordinate_combination(g.chart().clone(), c)
    };
    Ok(vec![
        ("d_t".to_string(), StationaryData::new(g.clone(), unit(&[(0, 1.0)]))?),
        (
            "d_phi".to_string(),
            StationaryData::new(g.clone(), unit(&[(d - 1, 1.0)]))?,
        ),
        (
            format!("d_t+{lambda}d_phi"),
            StationaryData::new(g.clone(), unit(&[(0, 1.0), (d - 1, lambda)]))?,
        ),
    ])
}

/// `r ∂_r` on global AdS, a non-Killing control.
pub fn ads_dilation(n: usize) -> Result<StationaryData> {
    let g = catalog::ads(n)?;
    let x = VectorField::new(g.chart().clone(), |x| {
        let mut c: Vec<Jet> = x.iter().map(|xi| xi.zero_like()).collect();
        c[1] = x[1];
        c
    });
    StationaryData::new(g, x)
}

/// Helical field on the stationary non-Einstein metric `-dt² + g_H`.
pub fn ultrastatic_helical(n: usize, lambda: f64) -> Result<StationaryData> {
    let g = catalog::ultrastatic_hyperbolic(n)?;
    let mut c = vec![0.0; n + 1];
    c[0] = 1.0;
    c[n] = lambda;
    let x = VectorField::coordinate_combination(g.chart().clone(), c);
    StationaryData::new(g, x)
}

/// `∂_t` on AdS in the FG chart.
pub fn ads_fg_static(n: usize) -> Result<StationaryData> {
    let g = catalog::ads_fg(n)?;
    let mut c = vec![0.0; n + 1];
    c[1] = 1.0;
    let x = VectorField::coordinate_combination(g.chart().clone(), c);
    StationaryData::new(g, x)
}

/// `∂_t + λ ∂_φ` on AdS in the FG chart.
pub fn ads_fg_helical(n: usize, lambda: f64) -> Result<StationaryData> {
    let g = catalog::ads_fg(n)?;
    let mut c = vec![0.0; n + 1];
    c[1] = 1.0;
    c[n] = lambda;
    let x = VectorField::coordinate_combination(g.chart().clone(), c);
    StationaryData::new(g, x)
}

/// Number of independent components of a `k`-form in `d` dimensions.
pub fn form_size(d: usize, k: usize) -> usize {
    basis(d, k).len()
}
