//! Curvature engine against finite differences and its own identities.

use adsgeo_core::catalog;
use adsgeo_core::chart::Interval;
use adsgeo_core::conventions::{TOL_CURV, TOL_THIRD};
use adsgeo_core::forms::Form;
use adsgeo_core::killing::form_size;
use adsgeo_core::tensor::{self, double_dual_sign, i2, i3, i4, Geometry};
use adsgeo_core::{
    Chart, ChartPoint, FormField, Jet, MetricField, PointSampler, Real, ScalarField, Signature, VectorField,
};

/// A non-diagonal Riemannian metric on a box in `R³`.
fn skew_metric() -> MetricField {
    let chart = Chart::new(
        "cartesian",
        vec![Interval::new(-2.0, 2.0); 3],
        vec![Interval::new(-1.0, 1.0); 3],
    )
    .unwrap();
    MetricField::new(chart, Signature::Riemannian, |x| {
        let r2 = x[0].square() + x[1].square() + x[2].square() + 1.0;
        let mut g = Vec::with_capacity(9);
        for a in 0..3 {
            for b in 0..3 {
                let mut e = x[a] * x[b] * r2.recip() * 0.3;
                if a == b {
                    e = e + x[a].sin() * 0.5 + 2.0;
                }
                g.push(e);
            }
        }
        g
    })
}

fn metric_at(g: &MetricField, x: &[f64]) -> Vec<f64> {
    let seeds: Vec<Jet> = x.iter().map(|&v| Jet::constant(x.len(), 0, v)).collect();
    g.components_jets(&seeds).iter().map(Jet::value).collect()
}

fn invert(m: &[f64], d: usize) -> Vec<f64> {
    // Gauss-Jordan, kept local so the oracle shares no code with the engine.
    let mut a = m.to_vec();
    let mut inv = vec![0.0; d * d];
    for i in 0..d {
        inv[i * d + i] = 1.0;
    }
    for c in 0..d {
        let piv = (c..d)
            .max_by(|&i, &j| a[i * d + c].abs().total_cmp(&a[j * d + c].abs()))
            .unwrap();
        for k in 0..d {
            a.swap(c * d + k, piv * d + k);
            inv.swap(c * d + k, piv * d + k);
        }
        let p = a[c * d + c];
        for k in 0..d {
            a[c * d + k] /= p;
            inv[c * d + k] /= p;
        }
        for i in 0..d {
            if i != c {
                let f = a[i * d + c];
                for k in 0..d {
                    a[i * d + k] -= f * a[c * d + k];
                    inv[i * d + k] -= f * inv[c * d + k];
                }
            }
        }
    }
    inv
}

const H: f64 = 1e-5;

fn shifted(x: &[f64], i: usize, h: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    y[i] += h;
    y
}

fn fd_christoffel(g: &MetricField, x: &[f64]) -> Vec<f64> {
    let d = x.len();
    let dg: Vec<Vec<f64>> = (0..d)
        .map(|c| {
            let p = metric_at(g, &shifted(x, c, H));
            let m = metric_at(g, &shifted(x, c, -H));
            p.iter().zip(&m).map(|(a, b)| (a - b) / (2.0 * H)).collect()
        })
        .collect();
    let ginv = invert(&metric_at(g, x), d);
    let mut gam = vec![0.0; d * d * d];
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let mut s = 0.0;
                for e in 0..d {
                    s += ginv[a * d + e] * (dg[b][e * d + c] + dg[c][e * d + b] - dg[e][b * d + c]);
                }
                gam[i3(d, a, b, c)] = 0.5 * s;
            }
        }
    }
    gam
}

fn fd_riemann(g: &MetricField, x: &[f64]) -> Vec<f64> {
    let d = x.len();
    let gam = fd_christoffel(g, x);
    let dgam: Vec<Vec<f64>> = (0..d)
        .map(|c| {
            let p = fd_christoffel(g, &shifted(x, c, 1e-4));
            let m = fd_christoffel(g, &shifted(x, c, -1e-4));
            p.iter().zip(&m).map(|(a, b)| (a - b) / 2e-4).collect()
        })
        .collect();
    let mut r = vec![0.0; d * d * d * d];
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for e in 0..d {
                    let mut v = dgam[c][i3(d, a, e, b)] - dgam[e][i3(d, a, c, b)];
                    for f in 0..d {
                        v += gam[i3(d, a, c, f)] * gam[i3(d, f, e, b)] - gam[i3(d, a, e, f)] * gam[i3(d, f, c, b)];
                    }
                    r[i4(d, a, b, c, e)] = v;
                }
            }
        }
    }
    r
}

fn relative_gap(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

fn oracle_cases() -> Vec<(MetricField, Vec<ChartPoint>)> {
    let mut out = Vec::new();
    for (k, g) in [
        skew_metric(),
        catalog::schwarzschild_ads(3, 1.0).unwrap(),
        catalog::hyperbolic_polar(4).unwrap(),
    ]
    .into_iter()
    .enumerate()
    {
        let pts = PointSampler::new(100 + k as u64).points(g.chart(), 5);
        out.push((g, pts));
    }
    out
}

#[test]
fn christoffel_and_riemann_match_finite_differences() {
    for (g, pts) in oracle_cases() {
        for p in pts {
            let gam = tensor::christoffel(&g, &p).unwrap();
            assert!(relative_gap(&gam.values, &fd_christoffel(&g, &p.coords)) < 1e-4);
            let r = tensor::riemann(&g, &p).unwrap();
            let fd = fd_riemann(&g, &p.coords);
            assert!(relative_gap(&r, &fd) < 1e-4, "{:?}: {}", p, relative_gap(&r, &fd));
        }
    }
}

#[test]
fn curvature_symmetries_at_twenty_points() {
    for g in [
        skew_metric(),
        catalog::schwarzschild_ads(3, 1.0).unwrap(),
        catalog::ads(4).unwrap(),
    ] {
        for p in PointSampler::new(7).points(g.chart(), 20) {
            let b = tensor::curvature(&g, &p).unwrap();
            assert!(b.symmetry_defects().max() < TOL_CURV, "{:?}", b.symmetry_defects());
            let d = b.dim;
            let ginv = invert(&b.metric, d);
            let trace: f64 = (0..d)
                .flat_map(|a| (0..d).map(move |c| (a, c)))
                .map(|(a, c)| ginv[a * d + c] * b.ricci[a * d + c])
                .sum();
            assert!((trace - b.scalar).abs() < TOL_CURV);
        }
    }
}

#[test]
fn contracted_bianchi_vanishes() {
    for g in [skew_metric(), catalog::schwarzschild_ads(4, 2.0).unwrap()] {
        for p in PointSampler::new(11).points(g.chart(), 10) {
            let div = tensor::contracted_bianchi(&g, &p).unwrap();
            assert!(div.iter().all(|v| v.abs() < TOL_THIRD), "{div:?}");
        }
    }
}

#[test]
fn christoffel_examples() {
    let g = catalog::euclidean(3);
    let p = g.chart().point(&[0.3, -1.0, 2.0]).unwrap();
    assert!(tensor::christoffel(&g, &p).unwrap().values.iter().all(|v| *v == 0.0));
    let h = catalog::hyperbolic_polar(3).unwrap();
    let p = h.chart().point(&[1.0, 1.2, 0.4]).unwrap();
    let gam = tensor::christoffel(&h, &p).unwrap();
    assert!((gam.get(1, 0, 1) - 1.0 / 1.0f64.tanh()).abs() < 1e-13);
    let ads = catalog::ads(3).unwrap();
    let p = ads.chart().point(&[0.0, 1.0, 1.0, 1.0]).unwrap();
    assert!((tensor::christoffel(&ads, &p).unwrap().get(1, 0, 0) - 2.0).abs() < 1e-13);
}

#[test]
fn curvature_examples() {
    let s2 = catalog::round_sphere(2);
    for p in PointSampler::new(1).points(s2.chart(), 5) {
        assert!((tensor::scalar_curvature(&s2, &p).unwrap() - 2.0).abs() < 1e-12);
    }
    for n in [3, 4] {
        let h = catalog::hyperbolic_ball(n).unwrap();
        for p in PointSampler::new(2).points(h.chart(), 5) {
            let ric = tensor::ricci(&h, &p).unwrap();
            let g = h.values(&p).unwrap();
            let k = (n - 1) as f64;
            assert!(ric.iter().zip(&g).all(|(r, g)| (r + k * g).abs() < 1e-9));
        }
        let ads = catalog::ads(n).unwrap();
        for p in PointSampler::new(3).points(ads.chart(), 5) {
            let ric = tensor::ricci(&ads, &p).unwrap();
            let g = ads.values(&p).unwrap();
            assert!(ric.iter().zip(&g).all(|(r, g)| (r + n as f64 * g).abs() < 1e-9));
        }
    }
}

#[test]
fn vacuum_catalog() {
    for n in [3, 4] {
        let lambda = -((n * (n - 1)) as f64) / 2.0;
        for g in [catalog::ads(n).unwrap(), catalog::schwarzschild_ads(n, 1.0).unwrap()] {
            for p in PointSampler::new(42).points(g.chart(), 10) {
                let res = tensor::einstein_residual(&g, lambda, &p).unwrap();
                assert!(res.iter().all(|v| v.abs() < 1e-8));
            }
        }
    }
    let flat = catalog::euclidean(4);
    let p = flat.chart().point(&[1.0, 0.0, -1.0, 0.5]).unwrap();
    assert!(tensor::einstein_residual(&flat, 0.0, &p)
        .unwrap()
        .iter()
        .all(|v| *v == 0.0));
    // A non-Einstein control fails.
    let g = catalog::ultrastatic_hyperbolic(3).unwrap();
    let p = PointSampler::new(5).point(g.chart());
    assert!(tensor::einstein_residual(&g, -3.0, &p)
        .unwrap()
        .iter()
        .any(|v| v.abs() > 0.1));
}

#[test]
fn hessian_examples() {
    for n in [3, 4] {
        let h = catalog::hyperbolic_ball(n).unwrap();
        let phi = ScalarField::new(h.chart().clone(), |x| (x[0].square() + 1.0).sqrt());
        for p in PointSampler::new(4).points(h.chart(), 5) {
            let hess = tensor::hessian(&h, &phi, &p).unwrap();
            let g = h.values(&p).unwrap();
            let v = phi.value(&p).unwrap();
            assert!(hess.iter().zip(&g).all(|(a, g)| (a - v * g).abs() < 1e-9));
        }
        let polar = catalog::hyperbolic_polar(n).unwrap();
        let cosh = ScalarField::new(polar.chart().clone(), |x| x[0].cosh());
        let p = PointSampler::new(6).point(polar.chart());
        let lap = tensor::laplacian(&polar, &cosh, &p).unwrap();
        assert!((lap - n as f64 * p.coords[0].cosh()).abs() < 1e-9);
    }
    let e = catalog::euclidean(3);
    let f = ScalarField::new(e.chart().clone(), |x| {
        (x[0].square() + x[1].square() + x[2].square()) * 0.5
    });
    let p = e.chart().point(&[0.4, -0.2, 1.1]).unwrap();
    let hess = tensor::hessian(&e, &f, &p).unwrap();
    for a in 0..3 {
        for b in 0..3 {
            assert!((hess[i2(3, a, b)] - if a == b { 1.0 } else { 0.0 }).abs() < 1e-15);
        }
    }
    assert!((tensor::grad_norm_sq(&e, &f, &p).unwrap() - (0.16 + 0.04 + 1.21)).abs() < 1e-14);
}

#[test]
fn d_squared_vanishes() {
    let chart = Chart::cartesian(4);
    let f = ScalarField::new(chart.clone(), |x| (x[0] * x[1]).sin() + x[2].exp() * x[3].square());
    let df = FormField::differential(f);
    for p in PointSampler::new(8).points(&chart, 5) {
        assert!(tensor::exterior_derivative(&df, &p).unwrap().max_abs() < 1e-9);
    }
}

#[test]
fn interior_of_d_omega_is_dv_on_ads() {
    let g = catalog::ads(3).unwrap();
    let chart = g.chart().clone();
    let metric = g.clone();
    let omega = FormField::new(chart.clone(), 1, move |x| {
        let comps = metric.components_jets(x);
        Form::one_form((0..4).map(|a| comps[a * 4]).collect())
    });
    let x = VectorField::coordinate_combination(chart.clone(), vec![1.0, 0.0, 0.0, 0.0]);
    for p in PointSampler::new(9).points(&chart, 5) {
        let d_omega = FormField::new(chart.clone(), 2, {
            let omega = omega.clone();
            move |x| {
                let d = x.len();
                let order = x[0].order();
                let raised: Vec<Jet> = x
                    .iter()
                    .enumerate()
                    .map(|(i, xi)| Jet::variable(d, order + 1, i, xi.value()))
                    .collect();
                omega.eval_jets(&raised).exterior_derivative()
            }
        });
        let lhs = tensor::interior_product(&x, &d_omega, &p).unwrap();
        let r = p.coords[1];
        let mut dv = [0.0; 4];
        dv[1] = 2.0 * r;
        for (c, v) in lhs.coeffs().iter().zip(dv) {
            assert!((c - v).abs() < 1e-8, "{lhs:?}");
        }
    }
}

fn random_form(d: usize, k: usize, seed: u64) -> Form<Jet> {
    let mut rng = PointSampler::new(seed);
    let coeffs = (0..form_size(d, k))
        .map(|_| Jet::constant(d, 0, rng.uniform(-1.0, 1.0)))
        .collect();
    Form::from_coeffs(d, k, coeffs)
}

#[test]
fn double_dual_sign_depends_on_signature() {
    let cases = [
        (catalog::schwarzschild_ads(3, 1.0).unwrap(), Signature::Lorentzian),
        (catalog::hyperbolic_polar(4).unwrap(), Signature::Riemannian),
        (skew_metric(), Signature::Riemannian),
    ];
    for (g, sig) in cases {
        let d = g.dim();
        for (i, p) in PointSampler::new(10).points(g.chart(), 4).into_iter().enumerate() {
            let geo = Geometry::at(&g, &p, 0).unwrap();
            for k in 0..=d {
                let alpha = random_form(d, k, 1000 + i as u64 * 10 + k as u64);
                let twice = geo.hodge(&geo.hodge(&alpha)).values();
                let sign = double_dual_sign(d, k, sig);
                let a = alpha.values();
                let gap = twice
                    .coeffs()
                    .iter()
                    .zip(a.coeffs())
                    .fold(0.0f64, |m, (x, y)| m.max((x - sign * y).abs()));
                assert!(gap < 1e-10, "d={d} k={k} gap={gap}");
            }
        }
    }
    assert_eq!(double_dual_sign(4, 2, Signature::Lorentzian), -1.0);
    assert_eq!(double_dual_sign(4, 2, Signature::Riemannian), 1.0);
    assert_eq!(double_dual_sign(4, 1, Signature::Lorentzian), 1.0);
}

#[test]
fn signature_mismatch_and_degeneracy_are_reported() {
    let chart = Chart::cartesian(2);
    let g = MetricField::diagonal(chart.clone(), Signature::Riemannian, |x| {
        vec![x[0].lift(-1.0), x[0].lift(1.0)]
    });
    let p = chart.point(&[0.0, 0.0]).unwrap();
    assert!(matches!(
        g.check_signature(&p),
        Err(adsgeo_core::Error::SignatureMismatch { .. })
    ));
    let flat = MetricField::diagonal(chart.clone(), Signature::Riemannian, |x| {
        vec![x[0].lift(1.0), x[0].lift(0.0)]
    });
    assert!(matches!(
        tensor::christoffel(&flat, &p),
        Err(adsgeo_core::Error::DegenerateMetric { .. })
    ));
}
