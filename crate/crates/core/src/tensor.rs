//! Pointwise curvature, Hessians and exterior calculus on explicit metrics.
//!
//! Index layout is row-major throughout: `Γ^a_{bc}` lives at `(a*d + b)*d + c`,
//! `R^a_{bcd}` at `((a*d + b)*d + c)*d + d'`. See [`crate::conventions`] for
//! sign conventions.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::chart::ChartPoint;
use crate::error::{Error, Result};
use crate::field::{FormField, MetricField, ScalarField, Signature, VectorField};
use crate::forms::Form;
use crate::jet::Jet;
use crate::linalg;
use crate::math;

#[inline]
pub fn i2(d: usize, a: usize, b: usize) -> usize {
    a * d + b
}

#[inline]
pub fn i3(d: usize, a: usize, b: usize, c: usize) -> usize {
    (a * d + b) * d + c
}

#[inline]
pub fn i4(d: usize, a: usize, b: usize, c: usize, e: usize) -> usize {
    ((a * d + b) * d + c) * d + e
}

/// Metric, inverse and connection jets at one point.
///
/// With metric jets of order `k`, the connection carries order `k-1` and the
/// Riemann tensor order `k-2`.
#[derive(Debug, Clone)]
pub struct Geometry {
    dim: usize,
    order: usize,
    signature: Signature,
    g: Vec<Jet>,
    ginv: Vec<Jet>,
    gamma: Vec<Jet>,
}

impl Geometry {
    pub fn at(metric: &MetricField, p: &ChartPoint, order: usize) -> Result<Self> {
        let g = metric.components(p, order)?;
        Geometry::from_components(metric.chart().id(), metric.signature(), g)
    }

    pub fn from_components(chart: &str, signature: Signature, g: Vec<Jet>) -> Result<Self> {
        let d = g[0].dim();
        let order = g.iter().map(Jet::order).min().unwrap_or(0);
        let values: Vec<f64> = g.iter().map(Jet::value).collect();
        let degenerate = || Error::DegenerateMetric {
            chart: chart.to_string(),
            det: linalg::determinant(&values, d),
        };
        // Judge degeneracy after scaling by the diagonal, so badly scaled but
        // regular metrics (e.g. near a conformal boundary) are accepted.
        let diag: Vec<f64> = (0..d).map(|a| math::sqrt(math::abs(values[a * d + a]))).collect();
        let balanced = diag.iter().all(|&x| x > 0.0);
        if balanced {
            let scaled: Vec<f64> = (0..d * d).map(|k| values[k] / (diag[k / d] * diag[k % d])).collect();
            if math::abs(linalg::determinant(&scaled, d)) < 1e-13 {
                return Err(degenerate());
            }
        }
        let ginv = linalg::inverse(&g, d, if balanced { 1e-300 } else { 1e-13 }).ok_or_else(degenerate)?;
        let gamma = if order >= 1 {
            christoffel_jets(&g, &ginv, d)
        } else {
            Vec::new()
        };
        Ok(Geometry {
            dim: d,
            order,
            signature,
            g,
            ginv,
            gamma,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn metric(&self) -> &[Jet] {
        &self.g
    }

    pub fn inverse(&self) -> &[Jet] {
        &self.ginv
    }

    pub fn gamma(&self) -> &[Jet] {
        assert!(self.order >= 1, "connection needs order-1 metric jets");
        &self.gamma
    }

    pub fn metric_values(&self) -> Vec<f64> {
        self.g.iter().map(Jet::value).collect()
    }

    pub fn inverse_values(&self) -> Vec<f64> {
        self.ginv.iter().map(Jet::value).collect()
    }

    pub fn gamma_values(&self) -> Vec<f64> {
        self.gamma().iter().map(Jet::value).collect()
    }

    /// `sqrt|det g|` as a jet.
    pub fn volume_factor(&self) -> Jet {
        let det = linalg::determinant(&self.g, self.dim);
        if det.value() < 0.0 {
            (-det).sqrt()
        } else {
            det.sqrt()
        }
    }

    /// `R^a_{bcd} = ∂_c Γ^a_{db} - ∂_d Γ^a_{cb} + Γ^a_{ce} Γ^e_{db} - Γ^a_{de} Γ^e_{cb}`.
    pub fn riemann(&self) -> Vec<Jet> {
        assert!(self.order >= 2, "curvature needs order-2 metric jets");
        let d = self.dim;
        let k = self.order - 2;
        let gam: Vec<Jet> = self.gamma.iter().map(|j| j.truncate(k)).collect();
        let zero = Jet::constant(d, k, 0.0);
        let mut r = vec![zero; d * d * d * d];
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in c + 1..d {
                        let mut v = self.gamma[i3(d, a, e, b)].partial(c) - self.gamma[i3(d, a, c, b)].partial(e);
                        for f in 0..d {
                            v += gam[i3(d, a, c, f)] * gam[i3(d, f, e, b)] - gam[i3(d, a, e, f)] * gam[i3(d, f, c, b)];
                        }
                        r[i4(d, a, b, c, e)] = v;
                        r[i4(d, a, b, e, c)] = -v;
                    }
                }
            }
        }
        r
    }

    /// `R_{abcd} = g_{ae} R^e_{bcd}`.
    pub fn lower_riemann(&self, r: &[Jet]) -> Vec<Jet> {
        let d = self.dim;
        let k = r[0].order();
        let g: Vec<Jet> = self.g.iter().map(|j| j.truncate(k)).collect();
        let mut out = vec![Jet::constant(d, k, 0.0); d * d * d * d];
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        let mut v = Jet::constant(d, k, 0.0);
                        for f in 0..d {
                            v += g[i2(d, a, f)] * r[i4(d, f, b, c, e)];
                        }
                        out[i4(d, a, b, c, e)] = v;
                    }
                }
            }
        }
        out
    }

    /// `Ric_{bd} = R^a_{bad}`.
    pub fn ricci_from(&self, r: &[Jet]) -> Vec<Jet> {
        let d = self.dim;
        let k = r[0].order();
        let mut ric = vec![Jet::constant(d, k, 0.0); d * d];
        for b in 0..d {
            for e in 0..d {
                let mut v = Jet::constant(d, k, 0.0);
                for a in 0..d {
                    v += r[i4(d, a, b, a, e)];
                }
                ric[i2(d, b, e)] = v;
            }
        }
        ric
    }

    pub fn ricci(&self) -> Vec<Jet> {
        self.ricci_from(&self.riemann())
    }

    /// `g^{ab} T_{ab}`.
    pub fn trace(&self, t: &[Jet]) -> Jet {
        let d = self.dim;
        let k = t[0].order();
        let mut v = Jet::constant(d, k, 0.0);
        for a in 0..d {
            for b in 0..d {
                v += self.ginv[i2(d, a, b)].truncate(k) * t[i2(d, a, b)];
            }
        }
        v
    }

    pub fn scalar_curvature(&self) -> Jet {
        self.trace(&self.ricci())
    }

    /// `Ric - R g / 2 + Λ g`.
    pub fn einstein_residual(&self, lambda: f64) -> Vec<Jet> {
        let ric = self.ricci();
        let r = self.trace(&ric);
        let k = r.order();
        ric.iter()
            .zip(&self.g)
            .map(|(ric_ab, g_ab)| *ric_ab - r * g_ab.truncate(k) * 0.5 + g_ab.truncate(k) * lambda)
            .collect()
    }

    /// `∇^a T_{ab}` for a symmetric covariant 2-tensor given as jets.
    pub fn divergence(&self, t: &[Jet]) -> Vec<Jet> {
        let d = self.dim;
        assert!(t[0].order() >= 1);
        let k = t[0].order() - 1;
        let gam: Vec<Jet> = self.gamma.iter().map(|j| j.truncate(k)).collect();
        let tk: Vec<Jet> = t.iter().map(|j| j.truncate(k)).collect();
        (0..d)
            .map(|b| {
                let mut v = Jet::constant(d, k, 0.0);
                for a in 0..d {
                    for c in 0..d {
                        let mut nabla = t[i2(d, a, b)].partial(c);
                        for e in 0..d {
                            nabla -= gam[i3(d, e, c, a)] * tk[i2(d, e, b)] + gam[i3(d, e, c, b)] * tk[i2(d, a, e)];
                        }
                        v += self.ginv[i2(d, a, c)].truncate(k) * nabla;
                    }
                }
                v
            })
            .collect()
    }

    /// `∇²f_{ab} = ∂_a∂_b f - Γ^c_{ab} ∂_c f`.
    pub fn hessian(&self, f: &Jet) -> Vec<Jet> {
        let d = self.dim;
        assert!(f.order() >= 2, "Hessian needs order-2 jets");
        let k = (f.order() - 2).min(self.order - 1);
        let df: Vec<Jet> = (0..d).map(|c| f.partial(c)).collect();
        let mut h = vec![Jet::constant(d, k, 0.0); d * d];
        for a in 0..d {
            for b in a..d {
                let mut v = df[a].partial(b).truncate(k);
                for c in 0..d {
                    v -= self.gamma[i3(d, c, a, b)].truncate(k) * df[c].truncate(k);
                }
                h[i2(d, a, b)] = v;
                h[i2(d, b, a)] = v;
            }
        }
        h
    }

    pub fn laplacian(&self, f: &Jet) -> Jet {
        self.trace(&self.hessian(f))
    }

    /// `g^{ab} ∂_a f ∂_b f`, signature-aware.
    pub fn grad_norm_sq(&self, f: &Jet) -> Jet {
        self.inner_gradients(f, f)
    }

    /// `g^{ab} ∂_a f ∂_b h`.
    pub fn inner_gradients(&self, f: &Jet, h: &Jet) -> Jet {
        let d = self.dim;
        let k = (f.order().min(h.order()) - 1).min(self.order);
        let mut v = Jet::constant(d, k, 0.0);
        for a in 0..d {
            let fa = f.partial(a).truncate(k);
            for b in 0..d {
                v += self.ginv[i2(d, a, b)].truncate(k) * fa * h.partial(b).truncate(k);
            }
        }
        v
    }

    /// `|T|² = g^{ac} g^{bd} T_{ab} T_{cd}` at the point.
    pub fn norm_sq2(&self, t: &[f64]) -> f64 {
        let d = self.dim;
        let gi = self.inverse_values();
        let mut s = 0.0;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        s += gi[i2(d, a, c)] * gi[i2(d, b, e)] * t[i2(d, a, b)] * t[i2(d, c, e)];
                    }
                }
            }
        }
        s
    }

    /// Lowers a vector: `ω_a = g_{ab} X^b`.
    pub fn lower(&self, x: &[Jet]) -> Vec<Jet> {
        let d = self.dim;
        let k = x[0].order().min(self.order);
        (0..d)
            .map(|a| {
                let mut v = Jet::constant(d, k, 0.0);
                for b in 0..d {
                    v += self.g[i2(d, a, b)].truncate(k) * x[b].truncate(k);
                }
                v
            })
            .collect()
    }

    /// Hodge star of a form of jets; result order is the minimum of the two.
    pub fn hodge(&self, alpha: &Form<Jet>) -> Form<Jet> {
        let k = alpha
            .coeffs()
            .first()
            .map(Jet::order)
            .unwrap_or(self.order)
            .min(self.order);
        let ginv: Vec<Jet> = self.ginv.iter().map(|j| j.truncate(k)).collect();
        let vol = self.volume_factor().truncate(k);
        alpha.map(|c| c.truncate(k)).hodge_with(&ginv, &vol)
    }
}

fn christoffel_jets(g: &[Jet], ginv: &[Jet], d: usize) -> Vec<Jet> {
    let k = g[0].order() - 1;
    // pg[e][i][j] = ∂_e g_ij
    let mut pg = Vec::with_capacity(d * d * d);
    for e in 0..d {
        for i in 0..d {
            for j in 0..d {
                pg.push(g[i2(d, i, j)].partial(e));
            }
        }
    }
    let gi: Vec<Jet> = ginv.iter().map(|j| j.truncate(k)).collect();
    let mut gamma = vec![Jet::constant(d, k, 0.0); d * d * d];
    for b in 0..d {
        for c in b..d {
            let first: Vec<Jet> = (0..d)
                .map(|e| (pg[i3(d, b, e, c)] + pg[i3(d, c, e, b)] - pg[i3(d, e, b, c)]) * 0.5)
                .collect();
            for a in 0..d {
                let mut v = Jet::constant(d, k, 0.0);
                for e in 0..d {
                    v += gi[i2(d, a, e)] * first[e];
                }
                gamma[i3(d, a, b, c)] = v;
                gamma[i3(d, a, c, b)] = v;
            }
        }
    }
    gamma
}

/// Christoffel symbols `Γ^a_{bc}` at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct Christoffel {
    pub dim: usize,
    pub values: Vec<f64>,
}

impl Christoffel {
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.values[i3(self.dim, a, b, c)]
    }
}

pub fn christoffel(g: &MetricField, p: &ChartPoint) -> Result<Christoffel> {
    let geo = Geometry::at(g, p, 1)?;
    Ok(Christoffel {
        dim: geo.dim,
        values: geo.gamma_values(),
    })
}

/// Pointwise curvature package.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureBundle {
    pub dim: usize,
    pub metric: Vec<f64>,
    pub gamma: Vec<f64>,
    /// `R^a_{bcd}`
    pub riemann: Vec<f64>,
    /// `R_{abcd}`
    pub riemann_lowered: Vec<f64>,
    pub ricci: Vec<f64>,
    pub scalar: f64,
}

/// Largest violations of the curvature symmetries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryDefects {
    pub christoffel: f64,
    pub antisym_first_pair: f64,
    pub antisym_last_pair: f64,
    pub pair_exchange: f64,
    pub first_bianchi: f64,
    pub ricci_symmetry: f64,
}

impl SymmetryDefects {
    pub fn max(&self) -> f64 {
        [
            self.christoffel,
            self.antisym_first_pair,
            self.antisym_last_pair,
            self.pair_exchange,
            self.first_bianchi,
            self.ricci_symmetry,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl CurvatureBundle {
    pub fn riemann_lowered_at(&self, a: usize, b: usize, c: usize, e: usize) -> f64 {
        self.riemann_lowered[i4(self.dim, a, b, c, e)]
    }

    pub fn ricci_at(&self, a: usize, b: usize) -> f64 {
        self.ricci[i2(self.dim, a, b)]
    }

    pub fn symmetry_defects(&self) -> SymmetryDefects {
        let d = self.dim;
        let r = |a, b, c, e| self.riemann_lowered[i4(d, a, b, c, e)];
        let mut s = SymmetryDefects {
            christoffel: 0.0,
            antisym_first_pair: 0.0,
            antisym_last_pair: 0.0,
            pair_exchange: 0.0,
            first_bianchi: 0.0,
            ricci_symmetry: 0.0,
        };
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    s.christoffel = s
                        .christoffel
                        .max(math::abs(self.gamma[i3(d, a, b, c)] - self.gamma[i3(d, a, c, b)]));
                    for e in 0..d {
                        s.antisym_first_pair = s.antisym_first_pair.max(math::abs(r(a, b, c, e) + r(b, a, c, e)));
                        s.antisym_last_pair = s.antisym_last_pair.max(math::abs(r(a, b, c, e) + r(a, b, e, c)));
                        s.pair_exchange = s.pair_exchange.max(math::abs(r(a, b, c, e) - r(c, e, a, b)));
                        s.first_bianchi = s
                            .first_bianchi
                            .max(math::abs(r(a, b, c, e) + r(a, c, e, b) + r(a, e, b, c)));
                    }
                }
                s.ricci_symmetry = s
                    .ricci_symmetry
                    .max(math::abs(self.ricci[i2(d, a, b)] - self.ricci[i2(d, b, a)]));
            }
        }
        s
    }
}

pub fn curvature(g: &MetricField, p: &ChartPoint) -> Result<CurvatureBundle> {
    let geo = Geometry::at(g, p, 2)?;
    let r = geo.riemann();
    let rl = geo.lower_riemann(&r);
    let ric = geo.ricci_from(&r);
    let scalar = geo.trace(&ric).value();
    Ok(CurvatureBundle {
        dim: geo.dim,
        metric: geo.metric_values(),
        gamma: geo.gamma_values(),
        riemann: r.iter().map(Jet::value).collect(),
        riemann_lowered: rl.iter().map(Jet::value).collect(),
        ricci: ric.iter().map(Jet::value).collect(),
        scalar,
    })
}

pub fn riemann(g: &MetricField, p: &ChartPoint) -> Result<Vec<f64>> {
    Ok(curvature(g, p)?.riemann)
}

pub fn ricci(g: &MetricField, p: &ChartPoint) -> Result<Vec<f64>> {
    let geo = Geometry::at(g, p, 2)?;
    Ok(geo.ricci().iter().map(Jet::value).collect())
}

pub fn scalar_curvature(g: &MetricField, p: &ChartPoint) -> Result<f64> {
    Ok(Geometry::at(g, p, 2)?.scalar_curvature().value())
}

/// `Ric - R g / 2 + Λ g` componentwise.
pub fn einstein_residual(g: &MetricField, lambda: f64, p: &ChartPoint) -> Result<Vec<f64>> {
    let geo = Geometry::at(g, p, 2)?;
    Ok(geo.einstein_residual(lambda).iter().map(Jet::value).collect())
}

/// `∇^a (Ric - R g/2)_{ab}`; needs third-order metric jets.
pub fn contracted_bianchi(g: &MetricField, p: &ChartPoint) -> Result<Vec<f64>> {
    let geo = Geometry::at(g, p, 3)?;
    let einstein = geo.einstein_residual(0.0);
    Ok(geo.divergence(&einstein).iter().map(Jet::value).collect())
}

pub fn hessian(g: &MetricField, f: &ScalarField, p: &ChartPoint) -> Result<Vec<f64>> {
    let geo = Geometry::at(g, p, 1)?;
    let fj = f.jet(p, 2)?;
    Ok(geo.hessian(&fj).iter().map(Jet::value).collect())
}

pub fn laplacian(g: &MetricField, f: &ScalarField, p: &ChartPoint) -> Result<f64> {
    let geo = Geometry::at(g, p, 1)?;
    Ok(geo.laplacian(&f.jet(p, 2)?).value())
}

pub fn grad_norm_sq(g: &MetricField, f: &ScalarField, p: &ChartPoint) -> Result<f64> {
    let geo = Geometry::at(g, p, 0)?;
    Ok(geo.grad_norm_sq(&f.jet(p, 1)?).value())
}

pub fn exterior_derivative(alpha: &FormField, p: &ChartPoint) -> Result<Form<f64>> {
    Ok(alpha.jets(p, 1)?.exterior_derivative().values())
}

pub fn wedge(alpha: &FormField, beta: &FormField, p: &ChartPoint) -> Result<Form<f64>> {
    let a = alpha.jets(p, 0)?.values();
    let b = beta.jets(p, 0)?.values();
    Ok(a.wedge(&b))
}

pub fn interior_product(x: &VectorField, alpha: &FormField, p: &ChartPoint) -> Result<Form<f64>> {
    let xv: Vec<f64> = x.components(p, 0)?.iter().map(Jet::value).collect();
    Ok(alpha.jets(p, 0)?.values().interior(&xv))
}

pub fn hodge_star(g: &MetricField, alpha: &FormField, p: &ChartPoint) -> Result<Form<f64>> {
    let geo = Geometry::at(g, p, 0)?;
    Ok(geo.hodge(&alpha.jets(p, 0)?).values())
}

/// Sign `s` in `**α = s α` for a `k`-form in dimension `n`.
pub fn double_dual_sign(n: usize, k: usize, signature: Signature) -> f64 {
    let parity = if (k * (n - k)).is_multiple_of(2) { 1.0 } else { -1.0 };
    match signature {
        Signature::Lorentzian => -parity,
        Signature::Riemannian => parity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Chart;
    use crate::field::MetricField;
    use crate::real::Real;

    fn round_sphere() -> MetricField {
        MetricField::diagonal(Chart::sphere(2), Signature::Riemannian, |x| {
            let s = x[0].sin();
            alloc::vec![x[0].lift(1.0), s * s]
        })
    }

    #[test]
    fn flat_metric_has_no_connection() {
        let g = MetricField::diagonal(
            Chart::cartesian(3),
            Signature::Riemannian,
            |x| alloc::vec![x[0].lift(1.0); 3],
        );
        let p = g.chart().point(&[0.3, -1.0, 2.0]).unwrap();
        assert!(christoffel(&g, &p).unwrap().values.iter().all(|&v| v == 0.0));
        assert!(einstein_residual(&g, 0.0, &p).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn unit_sphere_has_scalar_curvature_two() {
        let g = round_sphere();
        let p = g.chart().point(&[1.1, 0.4]).unwrap();
        assert!((scalar_curvature(&g, &p).unwrap() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn degenerate_metric_is_rejected() {
        let g = MetricField::diagonal(Chart::cartesian(2), Signature::Riemannian, |x| {
            alloc::vec![x[0].lift(1.0), x[0].lift(0.0)]
        });
        let p = g.chart().point(&[0.0, 0.0]).unwrap();
        assert!(matches!(christoffel(&g, &p), Err(Error::DegenerateMetric { .. })));
        assert!(matches!(g.check_signature(&p), Err(Error::DegenerateMetric { .. })));
    }
}
