//! Closed-form static triples, shooting and the horizon dichotomy.

use adsgeo_core::catalog::horizon_radius;
use adsgeo_core::ode::Tolerances;
use adsgeo_core::static_system::{
    ads_triple, integrate_from, mass_aspect_w, reduced_ode_defect, schwarzschild_ads, shoot, static_residual,
    CenterData, Outcome,
};
use adsgeo_core::{PointSampler, Real};

fn radial_point(t: &adsgeo_core::static_system::StaticTriple, r: f64) -> adsgeo_core::ChartPoint {
    let mut c = vec![r];
    c.extend(std::iter::repeat_n(1.1, t.n - 1));
    t.chart().point(&c).unwrap()
}

#[test]
fn closed_form_triples_are_static_solutions() {
    for n in [3, 4] {
        for t in [ads_triple(n).unwrap(), schwarzschild_ads(n, 1.0).unwrap()] {
            for p in PointSampler::new(42).points(t.chart(), 10) {
                let res = static_residual(&t, &p).unwrap();
                assert!(res.max_abs() < 1e-8, "{res:?}");
            }
        }
    }
}

#[test]
fn perturbed_lapse_fails() {
    let t = ads_triple(3)
        .unwrap()
        .with_lapse_factor(|r| r.lift(1.0) + *r * (-*r).exp() * 0.01);
    let worst = (1..20)
        .map(|k| {
            static_residual(&t, &radial_point(&t, 0.25 * k as f64))
                .unwrap()
                .max_abs()
        })
        .fold(0.0, f64::max);
    assert!(worst > 1e-4);
}

#[test]
fn catalog_values() {
    let rh = horizon_radius(3, 1.0).unwrap();
    assert!((rh - 0.682_327_803_8).abs() < 1e-9);
    assert!((rh.powi(3) + rh - 1.0).abs() < 1e-14);
    let t = schwarzschild_ads(4, 2.0).unwrap();
    assert!((t.v_at(1.2) - (1.0 + 1.44 - 2.0 / 1.44)).abs() < 1e-14);
    let zero = schwarzschild_ads(3, 0.0).unwrap();
    let ads = ads_triple(3).unwrap();
    for r in [0.5, 1.0, 3.0] {
        assert_eq!(zero.v_at(r), ads.v_at(r));
        assert_eq!(zero.f_at(r), ads.f_at(r));
    }
}

#[test]
fn mass_aspect_examples() {
    let ads = ads_triple(3).unwrap();
    for p in PointSampler::new(5).points(ads.chart(), 10) {
        assert!(mass_aspect_w(&ads, &p).unwrap().abs() < 1e-10);
    }
    let t = schwarzschild_ads(3, 1.0).unwrap();
    assert!((mass_aspect_w(&t, &radial_point(&t, 2.0)).unwrap() + 1.015625).abs() < 1e-10);
    let far = 1e3 * mass_aspect_w(&t, &radial_point(&t, 1e3)).unwrap();
    assert!((far + 2.0).abs() < 1e-3);
}

#[test]
fn reduced_system_accepts_closed_forms() {
    for r in [0.3, 1.0, 4.0] {
        let v = 1.0 + r * r;
        let d = reduced_ode_defect(3, r, [v, 2.0 * r], [v, 2.0 * r]);
        assert!(d.iter().all(|x| x.abs() < 1e-12));
        let v = 1.0 + r * r - 1.0 / r;
        let dv = 2.0 * r + 1.0 / (r * r);
        let d = reduced_ode_defect(3, r, [v, dv], [v, dv]);
        assert!(d.iter().all(|x| x.abs() < 1e-10));
    }
}

#[test]
fn integration_reproduces_schwarzschild_outward() {
    let v = |r: f64| 1.0 + r * r - 1.0 / r;
    let run = integrate_from(3, 1.0, [v(1.0), v(1.0)], 5.0, &Tolerances::default()).unwrap();
    assert_eq!(run.outcome, Outcome::Global);
    for (r, vn, _, _) in run.table() {
        assert!((vn - v(r)).abs() < 1e-8, "r={r}");
    }
}

#[test]
fn shooting_from_a_regular_center() {
    let tol = Tolerances::default();
    let run = shoot(3, CenterData { v0: 1.0 }, 10.0, &tol).unwrap();
    assert_eq!(run.outcome, Outcome::Global);
    assert!(run.scaled_ads_deviation(1.0) < 1e-7);
    let run = shoot(3, CenterData { v0: 4.0 }, 10.0, &tol).unwrap();
    assert!(run.scaled_ads_deviation(4.0) < 1e-6);
    assert!(run.f_minus_v(4.0).1 < 1e-6);
    for p in run.sample_points().unwrap().iter().step_by(7) {
        assert!(static_residual(&run.triple, p).unwrap().relative() < 1e-8);
    }
}

#[test]
fn inward_schwarzschild_meets_the_horizon() {
    let v = |r: f64| 1.0 + r * r - 1.0 / r;
    let run = integrate_from(3, 1.0, [v(1.0), v(1.0)], 0.05, &Tolerances::default()).unwrap();
    assert_eq!(run.outcome, Outcome::Horizon);
    assert!((run.event_radius.unwrap() - 0.682_327_8).abs() < 1e-6);
}

/// Regular centers never develop a horizon; positive mass always does.
#[test]
fn horizon_dichotomy_sweep() {
    let tol = Tolerances::default();
    let mut rng = PointSampler::new(2024);
    for _ in 0..20 {
        let n = 3 + (rng.unit() * 3.0) as usize;
        let v0 = rng.uniform(0.2, 5.0);
        let run = shoot(n, CenterData { v0 }, 6.0, &tol).unwrap();
        assert_eq!(run.outcome, Outcome::Global, "n={n} V0={v0}");
        assert!(run.scaled_ads_deviation(v0) < 1e-7);

        let mass = rng.uniform(0.1, 3.0);
        let rh = horizon_radius(n, mass).unwrap();
        let r0 = rh + 1.0;
        let vr = |r: f64| 1.0 + r * r - mass * r.powi(2 - n as i32);
        let run = integrate_from(n, r0, [vr(r0), vr(r0)], 1e-3, &tol).unwrap();
        assert_eq!(run.outcome, Outcome::Horizon, "n={n} M={mass}");
        assert!((run.event_radius.unwrap() - rh).abs() < 1e-6);
    }
}

#[test]
fn negative_mass_has_no_horizon() {
    let t = schwarzschild_ads(3, -0.5).unwrap();
    assert!(t.naked_singularity);
    let vr = |r: f64| 1.0 + r * r + 0.5 / r;
    let run = integrate_from(3, 2.0, [vr(2.0), vr(2.0)], 0.05, &Tolerances::default()).unwrap();
    assert_ne!(run.outcome, Outcome::Horizon);
}
