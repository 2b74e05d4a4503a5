//! Twist, Bochner, conformal-curvature and Obata identities on the catalog.

use adsgeo_core::compactification::{
    bochner_residual, boundary_geometry, compactified_riemann_max, conformal_scalar_check, nonneg_scalar_scan,
    rigidity_check, CompactifiedSlice,
};
use adsgeo_core::killing::{
    ads_dilation, ads_fg_helical, ads_fg_static, ads_killing_catalog, dual_twist_closure, flux_identity_residual,
    flux_ladder, killing_residual, lichnerowicz_residual, twist, twist_wedge_omega, ultrastatic_helical,
    StationaryData,
};
use adsgeo_core::obata::{
    ball_model_defects, einstein_defect, integrate_jacobi, integrate_jacobi_with, integrate_phi,
    radial_curvature_defect, solve, verify_rigidity,
};
use adsgeo_core::static_system::{ads_triple, schwarzschild_ads, StaticTriple};
use adsgeo_core::tensor;
use adsgeo_core::{Chart, ChartPoint, MetricField, PointSampler, Real, Signature, VectorField};
use std::f64::consts::PI;

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn radial_point(t: &StaticTriple, r: f64) -> ChartPoint {
    let mut c = vec![r];
    c.extend(std::iter::repeat_n(1.2, t.n - 1));
    t.chart().point(&c).unwrap()
}

#[test]
fn killing_residuals() {
    let cat = ads_killing_catalog(3, 0.3).unwrap();
    for (_, data) in &cat {
        for p in PointSampler::new(1).points(data.g.chart(), 5) {
            assert!(max_abs(&killing_residual(data, &p).unwrap()) < 1e-9);
        }
    }
    let dil = ads_dilation(3).unwrap();
    let p = dil.g.chart().point(&[0.0, 1.0, 1.0, 1.0]).unwrap();
    assert!(max_abs(&killing_residual(&dil, &p).unwrap()) > 0.1);

    // A rotation rate growing with r is not Killing and breaks the identity.
    let g = cat[0].1.g.clone();
    let x = VectorField::new(g.chart().clone(), |x| {
        vec![x[0].lift(1.0), x[0].lift(0.0), x[0].lift(0.0), x[1] * 0.3]
    });
    let bent = StationaryData::new(g, x).unwrap();
    let p = bent.g.chart().point(&[0.0, 1.0, 1.0, 1.0]).unwrap();
    assert!(max_abs(&killing_residual(&bent, &p).unwrap()) > 1e-2);
    assert!(lichnerowicz_residual(&bent, &p).unwrap().max_abs() > 1e-3);
}

#[test]
fn twist_on_ads() {
    let cat = ads_killing_catalog(3, 0.3).unwrap();
    let (stat, helical) = (&cat[0].1, &cat[2].1);
    let p = stat.g.chart().point(&[0.0, 1.0, PI / 3.0, 0.1]).unwrap();
    assert!(twist(stat, &p).unwrap().max_abs() < 1e-9);
    assert!(lichnerowicz_residual(stat, &p).unwrap().max_abs() < 1e-9);
    assert!(twist(helical, &p).unwrap().max_abs() > 1e-3);

    let mut checked = 0;
    for p in PointSampler::new(42).points(helical.g.chart(), 10) {
        if twist(helical, &p).unwrap().max_abs() < 1e-6 {
            continue;
        }
        checked += 1;
        assert!(lichnerowicz_residual(helical, &p).unwrap().max_abs() < 1e-8);
        assert!(flux_identity_residual(helical, &p).unwrap().max_abs() < 1e-7);
        let dual = dual_twist_closure(helical, &p).unwrap();
        assert!(dual.d_star_theta.max_abs() < 1e-7 && dual.einstein_defect < 1e-9);
        assert!(twist_wedge_omega(helical, &p).unwrap().max_abs() < 1e-12);
    }
    assert!(checked >= 8);
}

#[test]
fn non_einstein_control_breaks_closure() {
    let data = ultrastatic_helical(3, 0.3).unwrap();
    let p = data.g.chart().point(&[0.0, 1.0, PI / 3.0, 0.4]).unwrap();
    assert!(max_abs(&killing_residual(&data, &p).unwrap()) < 1e-9);
    let dual = dual_twist_closure(&data, &p).unwrap();
    assert!(dual.d_star_theta.max_abs() > 1e-3 && dual.einstein_defect > 1.0);
}

#[test]
fn twist_in_two_dimensions_is_empty() {
    let chart = Chart::cartesian(2);
    let g = MetricField::diagonal(chart.clone(), Signature::Lorentzian, |x| {
        vec![-(x[1].square() + 1.0), x[1].lift(1.0)]
    });
    let data = StationaryData::new(g, VectorField::coordinate_combination(chart.clone(), vec![1.0, 0.0])).unwrap();
    let p = chart.point(&[0.2, 0.7]).unwrap();
    assert!(twist(&data, &p).unwrap().coeffs().is_empty());
}

#[test]
fn static_flux_vanishes() {
    let data = ads_fg_static(3).unwrap();
    for r in flux_ladder(&data, &[0.2, 0.1, 0.05], 0.0, 8).unwrap() {
        assert!(r.flux.abs() < 1e-10 && (r.flux - r.coarse_flux).abs() < 1e-8);
    }
    let helical = ads_fg_helical(3, 0.3).unwrap();
    let reports = flux_ladder(&helical, &[0.2, 0.1, 0.05], 0.0, 12).unwrap();
    assert!(reports.iter().all(|r| r.flux.is_finite() && r.decay_fit.is_some()));
}

#[test]
fn bochner_identity() {
    let ads = ads_triple(3).unwrap();
    for p in PointSampler::new(5).points(ads.chart(), 5) {
        let b = bochner_residual(&ads, &p).unwrap();
        assert!(b.residual.abs() < 1e-8 && b.w.abs() < 1e-10 && b.hessian_defect_sq < 1e-10);
    }
    let t = schwarzschild_ads(3, 1.0).unwrap();
    for p in PointSampler::new(42).points(t.chart(), 10) {
        let b = bochner_residual(&t, &p).unwrap();
        assert!(b.residual.abs() < 1e-7);
        assert!(b.w.abs() > 1e-6 && b.hessian_defect_sq > 1e-6 && b.laplace_w.abs() > 1e-6 && b.drift.abs() > 1e-6);
    }
    let bad = ads.with_lapse_factor(|r| r.lift(1.0) + *r * (-*r).exp() * 0.01);
    let worst = (1..12)
        .map(|k| {
            bochner_residual(&bad, &radial_point(&bad, 0.25 * k as f64))
                .unwrap()
                .residual
                .abs()
        })
        .fold(0.0, f64::max);
    assert!(worst > 1e-3);
}

#[test]
fn conformal_scalar_curvature() {
    for t in [
        ads_triple(3).unwrap(),
        schwarzschild_ads(3, 1.0).unwrap(),
        schwarzschild_ads(4, 0.7).unwrap(),
    ] {
        let c = CompactifiedSlice::new(t);
        for p in PointSampler::new(6).points(c.base.chart(), 5) {
            assert!(conformal_scalar_check(&c, &p).unwrap().max_spread() < 1e-6);
        }
    }
    let c = CompactifiedSlice::new(schwarzschild_ads(3, 1.0).unwrap());
    let p = radial_point(&c.base, 2.0);
    let cs = conformal_scalar_check(&c, &p).unwrap();
    assert!((cs.rhs + 6.09375).abs() < 1e-12 && (cs.direct + 6.09375).abs() < 1e-6);
    let doubled = CompactifiedSlice::scaled(c.base.clone(), 2.0);
    let r2 = tensor::scalar_curvature(&doubled.gbar, &p).unwrap();
    assert!((r2 - cs.direct / 4.0).abs() < 1e-10);
}

#[test]
fn ads_compactification_is_flat() {
    let c = CompactifiedSlice::new(ads_triple(4).unwrap());
    for p in PointSampler::new(7).points(c.base.chart(), 10) {
        assert!(compactified_riemann_max(&c, &p).unwrap() < 1e-8);
    }
}

#[test]
fn boundary_umbilicity() {
    let eps = [1e-1, 1e-2, 1e-3];
    let ads = boundary_geometry(&CompactifiedSlice::new(ads_triple(3).unwrap()), &eps).unwrap();
    assert!(ads.slices[2].umbilicity_defect < 1e-6);
    let s = boundary_geometry(&CompactifiedSlice::new(schwarzschild_ads(3, 1.0).unwrap()), &eps).unwrap();
    assert!(s.induced_decay.unwrap() >= 1.0 && s.second_form_decay.unwrap() >= 1.0);
    assert!((s.second_form_limit.unwrap() - 1.0).abs() < 1e-3);
    // Halving ε moves the distance by the fitted power.
    let half = boundary_geometry(
        &CompactifiedSlice::new(schwarzschild_ads(3, 1.0).unwrap()),
        &[1e-3, 5e-4],
    )
    .unwrap();
    let ratio = half.slices[1].second_form_distance / half.slices[0].second_form_distance;
    assert!((ratio - 0.5f64.powf(s.second_form_decay.unwrap())).abs() < 0.02);
}

#[test]
fn scalar_scan_and_rigidity() {
    let grid: Vec<f64> = (0..=100).map(|k| 0.69 + 0.4931 * k as f64).collect();
    assert!(
        nonneg_scalar_scan(&schwarzschild_ads(3, 1.0).unwrap(), &grid)
            .unwrap()
            .min_value
            < -1.0
    );
    assert!(
        nonneg_scalar_scan(&schwarzschild_ads(3, 0.0).unwrap(), &grid)
            .unwrap()
            .min_value
            .abs()
            < 1e-10
    );
    let ads = ads_triple(3).unwrap();
    for p in PointSampler::new(8).points(ads.chart(), 10) {
        assert!(rigidity_check(&ads, &p, 1.0).unwrap() < 1e-9);
    }
    let t = schwarzschild_ads(3, 1.0).unwrap();
    assert!((1..10).any(|k| rigidity_check(&t, &radial_point(&t, 0.5 * k as f64 + 0.3), 1.0).unwrap() > 1e-2));

    let c = 2.0;
    let scaled = ads.with_lapse_factor(move |r| r.lift(c * c));
    let p = radial_point(&scaled, 1.4);
    assert!(rigidity_check(&scaled, &p, c).unwrap() < 1e-9);
    assert!(rigidity_check(&scaled, &p, 1.0).unwrap() < 1e-9);
}

#[test]
fn obata_examples() {
    let tol = 1e-10;
    let phi = integrate_phi(3.0, tol).unwrap();
    assert_eq!(phi.value(0.0), 1.0);
    assert!((phi.value(1.0) - 1.0f64.cosh()).abs() < 1e-9);
    assert!(phi.y.windows(2).all(|w| w[1] > w[0]));
    let f = integrate_jacobi(3.0, tol).unwrap();
    assert!((f.value(1.0) - 1.0f64.sinh()).abs() < 1e-9);
    assert!(f.energy_drift() < 1e-8);
    let sin = integrate_jacobi_with(1.0, 3.0, tol).unwrap();
    assert!((sin.value(PI / 2.0) - 1.0).abs() < 1e-9);
    for n in [3, 4] {
        let sol = solve(n, 3.0, tol).unwrap();
        for p in PointSampler::new(42).points(sol.reconstructed.chart(), 10) {
            assert!(verify_rigidity(&sol, &p).unwrap() < 1e-9);
            assert!(einstein_defect(&sol, &p).unwrap() < 1e-8);
            assert!(radial_curvature_defect(&sol, &p).unwrap() < 1e-8);
        }
        let (phi_gap, profile_gap) = ball_model_defects(&sol);
        assert!(phi_gap < 1e-10 && profile_gap < 1e-8);
    }
}
