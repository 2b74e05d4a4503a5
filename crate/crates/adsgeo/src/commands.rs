//! The subcommands: each turns a configuration into report entries and
//! optional CSV tables.

use std::f64::consts::PI;

use adsgeo_core::catalog;
use adsgeo_core::compactification::{
    bochner_residual, boundary_geometry, compactified_riemann_max, conformal_scalar_check, nonneg_scalar_scan,
    rigidity_check, CompactifiedSlice,
};
use adsgeo_core::conventions::cosmological_constant;
use adsgeo_core::fg::{fg_recursion, radial_fg_gauge, FgSolution, RadialProfile, RecursionOptions};
use adsgeo_core::killing::{
    ads_dilation, ads_fg_static, ads_killing_catalog, dual_twist_closure, flux_identity_residual, flux_ladder,
    killing_residual, lichnerowicz_residual, twist, ultrastatic_helical,
};
use adsgeo_core::obata::{
    ball_model_defects, einstein_defect, integrate_jacobi, integrate_jacobi_with, integrate_phi,
    radial_curvature_defect, solve, verify_rigidity,
};
use adsgeo_core::ode::Tolerances;
use adsgeo_core::static_system::{
    ads_triple, integrate_from, mass_aspect_w, reduced_ode_defect, schwarzschild_ads, shoot, static_residual,
    CenterData, Outcome, ShootingResult, StaticTriple,
};
use adsgeo_core::{tensor, Chart, ChartPoint, Error, PointSampler, Real, TruncatedSeries};
use rayon::prelude::*;

use crate::checks;
use crate::config::{Command, MetricId, RunConfig};
use crate::report::{evaluate, EntryId, Measure, Report, ReportEntry, Table};

type Output = (Vec<ReportEntry>, Vec<Table>);
type CoreResult<T> = adsgeo_core::Result<T>;

/// Number of random points drawn by pointwise checks.
pub const POINTS: usize = 10;
/// Tolerance handed to the Obata ODE integrations.
pub const OBATA_ODE_TOL: f64 = 1e-10;
/// Radius of the far-field mass-aspect check; larger radii lose W to cancellation.
pub const FAR_FIELD_RADIUS: f64 = 30.0;
/// Outer radius for shooting runs.
pub const SHOOT_R_MAX: f64 = 10.0;

pub fn run(command: Command, cfg: &RunConfig) -> Report {
    let (entries, tables) = match command {
        Command::VerifyEinstein => verify_einstein(cfg),
        Command::FgExpand => fg_expand(cfg),
        Command::Static => static_checks(cfg),
        Command::Twist => twist_checks(cfg),
        Command::Compactify => compactify(cfg),
        Command::Obata => obata(cfg),
        Command::All => {
            let parts = [
                verify_einstein,
                fg_expand,
                static_checks,
                twist_checks,
                compactify,
                obata,
            ];
            let mut entries = Vec::new();
            let mut tables = Vec::new();
            for part in parts {
                let (e, t) = part(cfg);
                entries.extend(e);
                tables.extend(t);
            }
            (entries, tables)
        }
    };
    Report::new(command, cfg.clone(), entries, tables)
}

fn sampler(cfg: &RunConfig, check: &str) -> PointSampler {
    PointSampler::with_stream(cfg.seed, checks::stream(check))
}

fn single(
    cfg: &RunConfig,
    check: &str,
    metric: &str,
    params: &[(&str, f64)],
    f: impl FnOnce() -> CoreResult<Measure>,
) -> ReportEntry {
    evaluate(
        cfg,
        EntryId {
            check,
            metric,
            index: 0,
            params,
        },
        f,
    )
}

/// Evaluates `f` at seeded random points of `chart`, in parallel.
fn pointwise<F>(
    cfg: &RunConfig,
    check: &str,
    metric: &str,
    chart: &Chart,
    params: &[(&str, f64)],
    f: F,
) -> Vec<ReportEntry>
where
    F: Fn(&ChartPoint) -> CoreResult<Measure> + Sync,
{
    let points = sampler(cfg, check).points(chart, POINTS);
    points
        .par_iter()
        .enumerate()
        .map(|(index, p)| {
            evaluate(
                cfg,
                EntryId {
                    check,
                    metric,
                    index,
                    params,
                },
                || f(p).map(|m| m.at(&p.coords)),
            )
        })
        .collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn radial_point(chart: &Chart, r: f64) -> CoreResult<ChartPoint> {
    let mut c = vec![r];
    c.extend(chart.sample_box()[1..].iter().map(|iv| 0.5 * (iv.lo + iv.hi)));
    chart.point(&c)
}

fn ads_id() -> &'static str {
    MetricId::Ads.as_str()
}

fn sads_id() -> &'static str {
    MetricId::SchwarzschildAds.as_str()
}

pub fn verify_einstein(cfg: &RunConfig) -> Output {
    let n = cfg.n;
    let lambda = cosmological_constant(n);
    let mass = cfg.params.mass;
    let p_ads = [("n", n as f64), ("lambda", lambda)];
    let p_sads = [("n", n as f64), ("lambda", lambda), ("M", mass)];
    let mut out = Vec::new();
    let einstein = |g: &adsgeo_core::MetricField, p: &ChartPoint| -> CoreResult<Measure> {
        Ok(Measure::zero(max_abs(&tensor::einstein_residual(g, lambda, p)?)))
    };
    if cfg.wants(MetricId::Ads) {
        match catalog::ads(n) {
            Ok(g) => out.extend(pointwise(cfg, "einstein.ads", ads_id(), g.chart(), &p_ads, |p| {
                einstein(&g, p)
            })),
            Err(e) => out.push(single(cfg, "einstein.ads", ads_id(), &p_ads, || Err(e))),
        }
    }
    if cfg.wants(MetricId::SchwarzschildAds) {
        match catalog::schwarzschild_ads(n, mass) {
            Ok(g) => {
                out.extend(pointwise(
                    cfg,
                    "einstein.schwarzschild-ads",
                    sads_id(),
                    g.chart(),
                    &p_sads,
                    |p| einstein(&g, p),
                ));
                out.extend(pointwise(
                    cfg,
                    "einstein.symmetries",
                    sads_id(),
                    g.chart(),
                    &p_sads,
                    |p| {
                        let d = tensor::curvature(&g, p)?.symmetry_defects();
                        Ok(Measure::zero(d.max())
                            .detail("first_bianchi", d.first_bianchi)
                            .detail("pair_exchange", d.pair_exchange))
                    },
                ));
                out.extend(pointwise(
                    cfg,
                    "einstein.contracted_bianchi",
                    sads_id(),
                    g.chart(),
                    &p_sads,
                    |p| Ok(Measure::zero(max_abs(&tensor::contracted_bianchi(&g, p)?))),
                ));
            }
            Err(e) => out.push(single(cfg, "einstein.schwarzschild-ads", sads_id(), &p_sads, || Err(e))),
        }
    }
    (out, Vec::new())
}

fn ads_series_coefficients(k: usize) -> (f64, f64) {
    match k {
        0 => (1.0, 1.0),
        2 => (0.5, -0.5),
        4 => (1.0 / 16.0, 1.0 / 16.0),
        _ => (0.0, 0.0),
    }
}

fn coefficient_table(sol: &FgSolution) -> Table {
    let m = &sol.metric;
    Table {
        name: "fg".into(),
        columns: vec!["order".into(), "A2".into(), "B2".into()],
        rows: (0..=m.order())
            .map(|k| vec![k as f64, m.a2.coeff(k), m.b2.coeff(k)])
            .collect(),
    }
}

/// `W` of Schwarzschild-AdS as a polynomial in `x = 1/r`:
/// `-(n-1) M x^{n-2} - (n-2)² M² x^{2n-2} / 4`.
fn w_closed_form_series(n: usize, mass: f64, order: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(order, |k| {
        if k == n - 2 {
            -((n - 1) as f64) * mass
        } else if k == 2 * n - 2 {
            -(((n - 2) * (n - 2)) as f64) * mass * mass / 4.0
        } else {
            0.0
        }
    })
}

pub fn fg_expand(cfg: &RunConfig) -> Output {
    let n = cfg.n;
    let order = cfg.params.order.max(n);
    let mass = cfg.params.mass;
    let odd = n % 2 == 1;
    let params = [("n", n as f64), ("N", order as f64)];
    let mut out = Vec::new();
    let mut table = None;
    let recursion_metric = cfg.metric.unwrap_or(MetricId::FgTruncated);
    let opts = |seed| RecursionOptions {
        seed,
        truncate_below_log: !odd,
    };

    if cfg.wants(MetricId::FgTruncated) || cfg.wants(MetricId::Ads) {
        let id = recursion_metric.as_str();
        let base = fg_recursion(n, order, opts(0.0));
        if let Ok(sol) = &base {
            table = Some(coefficient_table(sol));
        }
        out.push(single(cfg, "fg.ads_exact", id, &params, || {
            let sol = base.clone()?;
            let top = sol.metric.order();
            let worst = (0..=top).fold(0.0f64, |w, k| {
                let (a, b) = ads_series_coefficients(k);
                w.max((sol.metric.a2.coeff(k) - a).abs())
                    .max((sol.metric.b2.coeff(k) - b).abs())
            });
            Ok(Measure::zero(worst).detail("computed_order", top as f64))
        }));
        out.push(single(cfg, "fg.odd_below_n", id, &params, || {
            Ok(Measure::zero(base.clone()?.diagnostics.odd_below_n))
        }));
        out.push(single(cfg, "fg.equations", id, &params, || {
            Ok(Measure::zero(base.clone()?.diagnostics.equation_residual))
        }));
        if odd {
            out.push(single(cfg, "fg.seed_independence", id, &params, || {
                let a = base.clone()?;
                let b = fg_recursion(n, order, opts(0.7))?;
                let worst = (0..n).fold(0.0f64, |w, k| {
                    w.max((a.metric.a2.coeff(k) - b.metric.a2.coeff(k)).abs())
                        .max((a.metric.b2.coeff(k) - b.metric.b2.coeff(k)).abs())
                });
                Ok(Measure::zero(worst))
            }));
        }
    }

    if cfg.wants(MetricId::SchwarzschildAds) {
        let id = sads_id();
        let p_m = [("n", n as f64), ("N", order as f64), ("M", mass)];
        let gauge = |m: f64| radial_fg_gauge(&RadialProfile::schwarzschild_ads(n, m, order + 4), order);
        let main = gauge(mass);
        if let Ok(g) = &main {
            table = Some(coefficient_table(&g.solution));
        }
        out.push(single(cfg, "fg.gauge_defect", id, &p_m, || {
            Ok(Measure::zero(main.clone()?.gauge_defect))
        }));
        out.push(single(cfg, "fg.alpha_linearity", id, &params, || {
            let ratios = [0.5, 1.0, 2.0]
                .iter()
                .map(|&m| Ok(gauge(m)?.solution.alpha.ok_or(Error::Series("alpha unavailable"))? / m))
                .collect::<CoreResult<Vec<f64>>>()?;
            let spread = ratios.iter().fold(0.0f64, |w, r| w.max((r - ratios[1]).abs()));
            Ok(Measure::zero(spread)
                .detail("alpha_over_M", ratios[1])
                .detail("expected", -((n - 1) as f64) / n as f64))
        }));
        out.push(single(cfg, "fg.mass_aspect_match", id, &p_m, || {
            let g = main.clone()?;
            let alpha = g.solution.alpha.ok_or(Error::Series("alpha unavailable"))?;
            let w = w_closed_form_series(n, mass, g.x_of_s.order()).compose(&g.x_of_s)?;
            Ok(Measure::compare(n as f64 * alpha, w.coeff(n - 2)).detail("alpha", alpha))
        }));
        if odd {
            out.push(single(cfg, "fg.gauge_vs_recursion", id, &p_m, || {
                let g = main.clone()?;
                let alpha = g.solution.alpha.ok_or(Error::Series("alpha unavailable"))?;
                let rec = fg_recursion(n, order, opts(-alpha))?;
                let a = &g.solution.metric;
                let worst = (0..=order).fold(0.0f64, |w, k| {
                    w.max((a.a2.coeff(k) - rec.metric.a2.coeff(k)).abs())
                        .max((a.b2.coeff(k) - rec.metric.b2.coeff(k)).abs())
                });
                Ok(Measure::zero(worst))
            }));
        }
    }
    (out, table.into_iter().collect())
}

fn static_table(triple: &StaticTriple, points: &[ChartPoint]) -> Table {
    Table {
        name: "static".into(),
        columns: vec!["r".into(), "V".into(), "f".into(), "W".into()],
        rows: points
            .iter()
            .map(|p| {
                let r = p.coords[0];
                let w = mass_aspect_w(triple, p).unwrap_or(f64::NAN);
                vec![r, triple.v_at(r), triple.f_at(r), w]
            })
            .collect(),
    }
}

fn closed_form_w(n: usize, mass: f64, r: f64) -> f64 {
    let k = n as i32;
    -((n - 1) as f64) * mass * r.powi(2 - k) - ((n - 2) * (n - 2)) as f64 * mass * mass * r.powi(2 - 2 * k) / 4.0
}

pub fn static_checks(cfg: &RunConfig) -> Output {
    let n = cfg.n;
    let mass = cfg.params.mass;
    let v0 = cfg.params.v0;
    let tol = Tolerances::default();
    let p_n = [("n", n as f64)];
    let p_m = [("n", n as f64), ("M", mass)];
    let p_v = [("n", n as f64), ("V0", v0)];
    let mut out = Vec::new();
    let mut table = None;
    let vr = move |r: f64| 1.0 + r * r - mass * r.powi(2 - n as i32);

    if cfg.wants(MetricId::Ads) {
        match ads_triple(n) {
            Ok(t) => {
                out.extend(pointwise(cfg, "static.residual.ads", ads_id(), t.chart(), &p_n, |p| {
                    Ok(Measure::zero(static_residual(&t, p)?.max_abs()))
                }));
                let pts = sampler(cfg, "static.w.ads").points(t.chart(), POINTS);
                out.push(single(cfg, "static.w.ads", ads_id(), &p_n, || {
                    let worst = pts
                        .iter()
                        .map(|p| mass_aspect_w(&t, p))
                        .collect::<CoreResult<Vec<_>>>()?;
                    Ok(Measure::zero(max_abs(&worst)))
                }));
                out.push(single(cfg, "static.reduced_ode", ads_id(), &p_n, || {
                    let worst = [0.3, 1.0, 4.0].iter().fold(0.0f64, |w, &r| {
                        let v = 1.0 + r * r;
                        w.max(max_abs(&reduced_ode_defect(n, r, [v, 2.0 * r], [v, 2.0 * r])))
                    });
                    Ok(Measure::zero(worst))
                }));
                out.push(single(cfg, "static.control", ads_id(), &p_n, || {
                    let bad = t.with_lapse_factor(|r| r.lift(1.0) + *r * (-*r).exp() * 0.01);
                    let worst = (1..20)
                        .map(|k| Ok(static_residual(&bad, &radial_point(bad.chart(), 0.25 * k as f64)?)?.max_abs()))
                        .collect::<CoreResult<Vec<_>>>()?;
                    Ok(Measure::exceeds(max_abs(&worst), 1e-4))
                }));
            }
            Err(e) => out.push(single(cfg, "static.residual.ads", ads_id(), &p_n, || Err(e))),
        }
    }

    if cfg.wants(MetricId::SchwarzschildAds) {
        let id = sads_id();
        match schwarzschild_ads(n, mass) {
            Ok(t) => {
                out.extend(pointwise(
                    cfg,
                    "static.residual.schwarzschild-ads",
                    id,
                    t.chart(),
                    &p_m,
                    |p| Ok(Measure::zero(static_residual(&t, p)?.max_abs())),
                ));
                out.push(single(cfg, "static.w.closed_form", id, &p_m, || {
                    let p = radial_point(t.chart(), 2.0)?;
                    Ok(Measure::compare(mass_aspect_w(&t, &p)?, closed_form_w(n, mass, 2.0)).at(&p.coords))
                }));
                out.push(single(cfg, "static.w.far_field", id, &p_m, || {
                    let r = FAR_FIELD_RADIUS;
                    let p = radial_point(t.chart(), r)?;
                    let scaled = mass_aspect_w(&t, &p)? * r.powi(n as i32 - 2);
                    Ok(Measure::compare(scaled, -((n - 1) as f64) * mass).at(&p.coords))
                }));
                let rh = catalog::horizon_radius(n, mass);
                let r0 = rh.map_or(1.0, |h| (h + 0.5).max(1.0));
                out.push(single(cfg, "static.cross_validation", id, &p_m, || {
                    let run = integrate_from(n, r0, [vr(r0), vr(r0)], r0 + 4.0, &tol)?;
                    let worst = run
                        .table()
                        .iter()
                        .fold(0.0f64, |w, &(r, v, _, _)| w.max((v - vr(r)).abs()));
                    Ok(Measure::zero(worst).over(r0, r0 + 4.0))
                }));
                if let Ok(run) = integrate_from(n, r0, [vr(r0), vr(r0)], SHOOT_R_MAX, &tol) {
                    if let Ok(pts) = run.sample_points() {
                        table = Some(static_table(&t, &pts));
                    }
                }
                out.push(single(cfg, "static.horizon", id, &p_m, || {
                    let run = integrate_from(n, r0, [vr(r0), vr(r0)], 1e-3, &tol)?;
                    let m = match (rh, run.outcome, run.event_radius) {
                        (Some(h), Outcome::Horizon, Some(r)) => Measure::compare(r, h).detail("event_radius", r),
                        (Some(h), _, _) => Measure::compare(f64::NAN, h),
                        // No horizon expected for M <= 0.
                        (None, Outcome::Horizon, r) => Measure::below(r.unwrap_or(f64::NAN), f64::NEG_INFINITY),
                        (None, _, _) => Measure::zero(0.0),
                    };
                    Ok(m.over(1e-3, r0).detail("rejected_steps", run.rejected_steps as f64))
                }));
            }
            Err(e) => out.push(single(cfg, "static.residual.schwarzschild-ads", id, &p_m, || Err(e))),
        }
    }

    if cfg.wants(MetricId::Shooting) {
        let id = MetricId::Shooting.as_str();
        let run: CoreResult<ShootingResult> = shoot(n, CenterData { v0 }, SHOOT_R_MAX, &tol);
        if let Ok(r) = &run {
            if cfg.metric == Some(MetricId::Shooting) || table.is_none() {
                if let Ok(pts) = r.sample_points() {
                    table = Some(static_table(&r.triple, &pts));
                }
            }
        }
        out.push(single(cfg, "static.shoot", id, &p_v, || {
            let r = run.clone()?;
            let (f_minus_v, f_minus_scaled_v) = r.f_minus_v(v0);
            Ok(Measure::zero(r.scaled_ads_deviation(v0))
                .over(0.0, SHOOT_R_MAX)
                .detail("global", (r.outcome == Outcome::Global) as u8 as f64)
                .detail("f_minus_V", f_minus_v)
                .detail("f_minus_V_over_V0", f_minus_scaled_v))
        }));
        out.push(single(cfg, "static.shoot.residual", id, &p_v, || {
            let r = run.clone()?;
            let worst = r
                .sample_points()?
                .iter()
                .map(|p| Ok(static_residual(&r.triple, p)?.relative()))
                .collect::<CoreResult<Vec<_>>>()?;
            Ok(Measure::zero(max_abs(&worst)).over(0.0, SHOOT_R_MAX))
        }));
        let p_4 = [("n", n as f64), ("V0", 4.0)];
        out.push(single(cfg, "static.shoot.scaled", id, &p_4, || {
            let r = shoot(n, CenterData { v0: 4.0 }, SHOOT_R_MAX, &tol)?;
            Ok(Measure::zero(r.scaled_ads_deviation(4.0)).over(0.0, SHOOT_R_MAX))
        }));
    }
    (out, table.into_iter().collect())
}

pub fn twist_checks(cfg: &RunConfig) -> Output {
    let n = cfg.n;
    let lambda = cfg.params.lambda;
    let id = ads_id();
    let p_l = [("n", n as f64), ("lambda", lambda)];
    let mut out = Vec::new();
    let catalog = match ads_killing_catalog(n, lambda) {
        Ok(c) => c,
        Err(e) => return (vec![single(cfg, "twist.killing.d_t", id, &p_l, || Err(e))], Vec::new()),
    };
    let names = ["twist.killing.d_t", "twist.killing.d_phi", "twist.killing.helical"];
    for (name, (_, data)) in names.iter().zip(&catalog) {
        let pts = sampler(cfg, name).points(data.g.chart(), POINTS);
        out.push(single(cfg, name, id, &p_l, || {
            let worst = pts
                .iter()
                .map(|p| Ok(max_abs(&killing_residual(data, p)?)))
                .collect::<CoreResult<Vec<_>>>()?;
            Ok(Measure::zero(max_abs(&worst)))
        }));
    }
    out.push(single(cfg, "twist.killing.control", id, &p_l, || {
        let dil = ads_dilation(n)?;
        let mut c = vec![0.0, 1.0];
        c.extend(std::iter::repeat_n(1.0, n - 1));
        let p = dil.g.chart().point(&c)?;
        Ok(Measure::exceeds(max_abs(&killing_residual(&dil, &p)?), 0.1).at(&c))
    }));
    let (stat, helical) = (&catalog[0].1, &catalog[2].1);
    out.push(single(cfg, "twist.static_theta", id, &p_l, || {
        let pts = sampler(cfg, "twist.static_theta").points(stat.g.chart(), POINTS);
        let worst = pts
            .iter()
            .map(|p| Ok(twist(stat, p)?.max_abs()))
            .collect::<CoreResult<Vec<_>>>()?;
        Ok(Measure::zero(max_abs(&worst)))
    }));
    out.push(single(cfg, "twist.helical_theta", id, &p_l, || {
        let mut c = vec![0.0, 1.0];
        c.extend(std::iter::repeat_n(PI / 3.0, n - 2));
        c.push(0.1);
        let p = helical.g.chart().point(&c)?;
        Ok(Measure::exceeds(twist(helical, &p)?.max_abs(), 1e-3).at(&c))
    }));

    // Points where the helical twist is genuinely nonzero.
    let candidates = sampler(cfg, "twist.lichnerowicz").points(helical.g.chart(), 4 * POINTS);
    let twisted: Vec<ChartPoint> = candidates
        .into_iter()
        .filter(|p| twist(helical, p).map(|t| t.max_abs() > 1e-6).unwrap_or(false))
        .take(POINTS)
        .collect();
    let per_point = |check: &'static str, f: &(dyn Fn(&ChartPoint) -> CoreResult<Measure> + Sync)| {
        twisted
            .par_iter()
            .enumerate()
            .map(|(index, p)| {
                evaluate(
                    cfg,
                    EntryId {
                        check,
                        metric: id,
                        index,
                        params: &p_l,
                    },
                    || f(p).map(|m| m.at(&p.coords)),
                )
            })
            .collect::<Vec<_>>()
    };
    out.extend(per_point("twist.lichnerowicz", &|p| {
        Ok(Measure::zero(lichnerowicz_residual(helical, p)?.max_abs()).detail("theta", twist(helical, p)?.max_abs()))
    }));
    out.extend(per_point("twist.flux_identity", &|p| {
        Ok(Measure::zero(flux_identity_residual(helical, p)?.max_abs()))
    }));
    out.extend(per_point("twist.dual_closure", &|p| {
        let d = dual_twist_closure(helical, p)?;
        Ok(Measure::zero(d.d_star_theta.max_abs()).detail("einstein_defect", d.einstein_defect))
    }));
    out.push(single(cfg, "twist.dual_closure.control", id, &p_l, || {
        let data = ultrastatic_helical(n, lambda)?;
        let mut c = vec![0.0, 1.0];
        c.extend(std::iter::repeat_n(PI / 3.0, n - 2));
        c.push(0.4);
        let p = data.g.chart().point(&c)?;
        let d = dual_twist_closure(&data, &p)?;
        Ok(Measure::exceeds(d.d_star_theta.max_abs(), 1e-3)
            .at(&c)
            .detail("einstein_defect", d.einstein_defect))
    }));
    match ads_fg_static(n).and_then(|d| flux_ladder(&d, &cfg.params.eps, cfg.params.t0, 8)) {
        Ok(reports) => {
            for (index, r) in reports.iter().enumerate() {
                let p_e = [("n", n as f64), ("eps", r.epsilon), ("t0", cfg.params.t0)];
                out.push(evaluate(
                    cfg,
                    EntryId {
                        check: "twist.static_flux",
                        metric: id,
                        index,
                        params: &p_e,
                    },
                    || {
                        Ok::<_, Error>(
                            Measure::zero(r.flux)
                                .detail("coarse_flux", r.coarse_flux)
                                .detail("quadrature_nodes", r.quadrature_nodes as f64),
                        )
                    },
                ));
            }
        }
        Err(e) => out.push(single(cfg, "twist.static_flux", id, &p_l, || Err(e))),
    }
    (out, Vec::new())
}

pub fn compactify(cfg: &RunConfig) -> Output {
    let n = cfg.n;
    let mass = cfg.params.mass;
    let eps = cfg.params.eps.clone();
    let p_n = [("n", n as f64)];
    let p_m = [("n", n as f64), ("M", mass)];
    let mut out = Vec::new();

    if cfg.wants(MetricId::Ads) {
        let id = ads_id();
        match ads_triple(n) {
            Ok(t) => {
                let c = CompactifiedSlice::new(t.clone());
                let pts = sampler(cfg, "compactify.bochner.ads").points(t.chart(), POINTS);
                out.push(single(cfg, "compactify.bochner.ads", id, &p_n, || {
                    let w = pts
                        .iter()
                        .map(|p| Ok(bochner_residual(&t, p)?.residual))
                        .collect::<CoreResult<Vec<_>>>()?;
                    Ok(Measure::zero(max_abs(&w)))
                }));
                out.extend(pointwise(
                    cfg,
                    "compactify.conformal_scalar.ads",
                    id,
                    t.chart(),
                    &p_n,
                    |p| {
                        let cs = conformal_scalar_check(&c, p)?;
                        Ok(Measure::compare(cs.direct, cs.rhs)
                            .detail("conformal_laplacian", cs.conformal_laplacian)
                            .detail("spread", cs.max_spread())
                            .with_residual(cs.max_spread()))
                    },
                ));
                let pts = sampler(cfg, "compactify.flatness").points(t.chart(), POINTS);
                out.push(single(cfg, "compactify.flatness", id, &p_n, || {
                    let w = pts
                        .iter()
                        .map(|p| compactified_riemann_max(&c, p))
                        .collect::<CoreResult<Vec<_>>>()?;
                    Ok(Measure::zero(max_abs(&w)))
                }));
                match boundary_geometry(&c, &eps) {
                    Ok(rep) => {
                        for (index, s) in rep.slices.iter().enumerate() {
                            let p_e = [("n", n as f64), ("eps", s.epsilon)];
                            out.push(evaluate(
                                cfg,
                                EntryId {
                                    check: "compactify.umbilicity",
                                    metric: id,
                                    index,
                                    params: &p_e,
                                },
                                || {
                                    Ok::<_, Error>(
                                        Measure::zero(s.umbilicity_defect)
                                            .detail("induced_factor", s.induced_factor)
                                            .detail("second_form_factor", s.second_form_factor),
                                    )
                                },
                            ));
                        }
                        out.push(single(cfg, "compactify.boundary_limit", id, &p_n, || {
                            let l = rep.second_form_limit.ok_or(Error::Series("need three epsilons"))?;
                            Ok(Measure::compare(l, 1.0).detail("induced_limit", rep.induced_limit.unwrap_or(f64::NAN)))
                        }));
                    }
                    Err(e) => out.push(single(cfg, "compactify.umbilicity", id, &p_n, || Err(e))),
                }
                let grid: Vec<f64> = (1..=50).map(|k| 0.2 * k as f64).collect();
                out.push(single(cfg, "compactify.scalar_scan.ads", id, &p_n, || {
                    let s = nonneg_scalar_scan(&t, &grid)?;
                    Ok(Measure::zero(s.min_value).over(grid[0], grid[grid.len() - 1]))
                }));
                out.push(single(cfg, "compactify.rigidity", id, &p_n, || {
                    let pts = sampler(cfg, "compactify.rigidity").points(t.chart(), POINTS);
                    let w = pts
                        .iter()
                        .map(|p| rigidity_check(&t, p, 1.0))
                        .collect::<CoreResult<Vec<_>>>()?;
                    Ok(Measure::zero(max_abs(&w)))
                }));
                out.push(single(cfg, "compactify.rigidity.scaled", id, &p_n, || {
                    let c = 2.0;
                    let scaled = t.with_lapse_factor(move |r| r.lift(c * c));
                    let p = radial_point(scaled.chart(), 1.4)?;
                    Ok(Measure::zero(rigidity_check(&scaled, &p, c)?)
                        .at(&p.coords)
                        .detail("scale", c))
                }));
            }
            Err(e) => out.push(single(cfg, "compactify.bochner.ads", id, &p_n, || Err(e))),
        }
    }

    if cfg.wants(MetricId::SchwarzschildAds) {
        let id = sads_id();
        match schwarzschild_ads(n, mass) {
            Ok(t) => {
                let c = CompactifiedSlice::new(t.clone());
                out.extend(pointwise(cfg, "compactify.bochner", id, t.chart(), &p_m, |p| {
                    let b = bochner_residual(&t, p)?;
                    Ok(Measure::zero(b.residual)
                        .detail("W", b.w)
                        .detail("laplace_W", b.laplace_w)
                        .detail("hessian_defect_sq", b.hessian_defect_sq)
                        .detail("drift", b.drift))
                }));
                out.push(single(cfg, "compactify.bochner.control", id, &p_m, || {
                    let bad = t.with_lapse_factor(|r| r.lift(1.0) + *r * (-*r).exp() * 0.01);
                    let lo = bad.domain.0.max(0.0) + 0.3;
                    let w = (0..12)
                        .map(|k| {
                            Ok(bochner_residual(&bad, &radial_point(bad.chart(), lo + 0.25 * k as f64)?)?.residual)
                        })
                        .collect::<CoreResult<Vec<_>>>()?;
                    Ok(Measure::exceeds(max_abs(&w), 1e-3))
                }));
                out.extend(pointwise(
                    cfg,
                    "compactify.conformal_scalar.schwarzschild-ads",
                    id,
                    t.chart(),
                    &p_m,
                    |p| {
                        let cs = conformal_scalar_check(&c, p)?;
                        Ok(Measure::compare(cs.direct, cs.rhs)
                            .detail("conformal_laplacian", cs.conformal_laplacian)
                            .with_residual(cs.max_spread()))
                    },
                ));
                out.push(single(cfg, "compactify.boundary_decay", id, &p_m, || {
                    let rep = boundary_geometry(&c, &eps)?;
                    let slope = rep.second_form_decay.ok_or(Error::Series("need two epsilons"))?;
                    Ok(Measure::exceeds(slope, 1.0)
                        .detail("induced_decay", rep.induced_decay.unwrap_or(f64::NAN))
                        .detail(
                            "max_umbilicity_defect",
                            rep.slices.iter().fold(0.0, |m, s| m.max(s.umbilicity_defect)),
                        ))
                }));
                out.push(single(
                    cfg,
                    "compactify.scalar_scan.schwarzschild-ads",
                    id,
                    &p_m,
                    || {
                        let lo = catalog::horizon_radius(n, mass).map_or(0.1, |h| h + 0.01);
                        let grid: Vec<f64> = (0..=100).map(|k| lo + (50.0 - lo) * k as f64 / 100.0).collect();
                        let s = nonneg_scalar_scan(&t, &grid)?;
                        // Evidence only: positive mass makes the minimum negative.
                        Ok(Measure::below(s.min_value, -1.0)
                            .over(lo, 50.0)
                            .detail("min_radius", s.min_radius))
                    },
                ));
                out.push(single(cfg, "compactify.rigidity.control", id, &p_m, || {
                    let lo = t.domain.0.max(0.0);
                    let w = (1..10)
                        .map(|k| rigidity_check(&t, &radial_point(t.chart(), lo + 0.5 * k as f64)?, 1.0))
                        .collect::<CoreResult<Vec<_>>>()?;
                    Ok(Measure::exceeds(max_abs(&w), 1e-2))
                }));
            }
            Err(e) => out.push(single(cfg, "compactify.bochner", id, &p_m, || Err(e))),
        }
    }
    (out, Vec::new())
}

pub fn obata(cfg: &RunConfig) -> Output {
    let n = cfg.n;
    let id = "hyperbolic";
    let p_n = [("n", n as f64)];
    let s_max = 3.0;
    let mut out = Vec::new();
    let phi = integrate_phi(s_max, OBATA_ODE_TOL);
    let jac = integrate_jacobi(s_max, OBATA_ODE_TOL);
    out.push(single(cfg, "obata.phi", id, &p_n, || {
        Ok(Measure::compare(phi.clone()?.value(1.0), 1.0f64.cosh()).at(&[1.0]))
    }));
    out.push(single(cfg, "obata.phi_ratio", id, &p_n, || {
        let p = phi.clone()?;
        Ok(Measure::compare(
            p.value(2.0) / p.value(1.0),
            2.0f64.cosh() / 1.0f64.cosh(),
        ))
    }));
    out.push(single(cfg, "obata.energy", id, &p_n, || {
        Ok(Measure::zero(phi.clone()?.energy_drift()).over(0.0, s_max))
    }));
    out.push(single(cfg, "obata.jacobi", id, &p_n, || {
        Ok(Measure::compare(jac.clone()?.value(1.0), 1.0f64.sinh()).at(&[1.0]))
    }));
    out.push(single(cfg, "obata.first_integral", id, &p_n, || {
        Ok(Measure::zero(jac.clone()?.energy_drift()).over(0.0, s_max))
    }));
    out.push(single(cfg, "obata.sin_control", id, &p_n, || {
        let f = integrate_jacobi_with(1.0, s_max, OBATA_ODE_TOL)?;
        Ok(Measure::compare(f.value(PI / 2.0), 1.0).at(&[PI / 2.0]))
    }));
    let sol = solve(n, s_max, OBATA_ODE_TOL);
    let mut tables = Vec::new();
    match &sol {
        Ok(sol) => {
            let chart = sol.reconstructed.chart().clone();
            out.extend(pointwise(cfg, "obata.rigidity", id, &chart, &p_n, |p| {
                Ok(Measure::zero(verify_rigidity(sol, p)?))
            }));
            let pts = sampler(cfg, "obata.ricci").points(&chart, POINTS);
            out.push(single(cfg, "obata.ricci", id, &p_n, || {
                let w = pts
                    .iter()
                    .map(|p| einstein_defect(sol, p))
                    .collect::<CoreResult<Vec<_>>>()?;
                Ok(Measure::zero(max_abs(&w)))
            }));
            out.push(single(cfg, "obata.radial_curvature", id, &p_n, || {
                let w = pts
                    .iter()
                    .map(|p| radial_curvature_defect(sol, p))
                    .collect::<CoreResult<Vec<_>>>()?;
                Ok(Measure::zero(max_abs(&w)))
            }));
            out.push(single(cfg, "obata.ball_model", id, &p_n, || {
                let (a, b) = ball_model_defects(sol);
                Ok(Measure::zero(a).over(0.0, s_max).detail("profile_defect", b))
            }));
            tables.push(Table {
                name: "obata".into(),
                columns: vec!["s".into(), "phi".into(), "f".into()],
                rows: sol.table().into_iter().map(|r| r.to_vec()).collect(),
            });
        }
        Err(e) => {
            let e = e.clone();
            out.push(single(cfg, "obata.rigidity", id, &p_n, || Err(e)));
        }
    }
    (out, tables)
}
