//! Reconstruction of the hyperbolic metric from `∇²φ = φ g`.
//!
//! Along unit-speed geodesics from the minimum of `φ` one has `φ'' = φ`, and
//! Jacobi fields obey `f'' + κ f = 0` with `κ` the radial sectional curvature.
//! Both are integrated numerically and the metric `ds² + f(s)² dσ₀` is
//! rebuilt from the samples.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::catalog;
use crate::chart::{Chart, ChartPoint};
use crate::error::{Error, Result};
use crate::field::{MetricField, ScalarField, Signature};
use crate::math;
use crate::ode::{self, Stop, Tolerances};
use crate::real::Real;
use crate::tensor::{i2, i4, Geometry};

/// Spacing of the sample grid.
pub const GRID_STEP: f64 = 0.05;
/// Degree of the local Taylor polynomials used between samples.
pub const LOCAL_DEGREE: usize = 16;

/// Samples of a solution of `y'' = -κ y`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct OdeSamples {
    pub kappa: f64,
    pub s: Vec<f64>,
    pub y: Vec<f64>,
    pub dy: Vec<f64>,
}

impl OdeSamples {
    /// `y, y', y'', y'''` at `s` from the nearest sample.
    pub fn derivatives(&self, s: f64) -> [f64; 4] {
        let k = nearest(&self.s, s);
        let ds = s - self.s[k];
        // Taylor coefficients follow from c_{j+2} = -κ c_j / ((j+1)(j+2)).
        let mut c = [0.0; LOCAL_DEGREE + 1];
        c[0] = self.y[k];
        c[1] = self.dy[k];
        for j in 0..LOCAL_DEGREE - 1 {
            c[j + 2] = -self.kappa * c[j] / ((j + 1) * (j + 2)) as f64;
        }
        let mut out = [0.0; 4];
        for (d, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for j in (d..=LOCAL_DEGREE).rev() {
                let falling: f64 = (0..d).map(|i| (j - i) as f64).product();
                acc = acc * ds + c[j] * falling;
            }
            *o = acc;
        }
        out
    }

    pub fn value(&self, s: f64) -> f64 {
        self.derivatives(s)[0]
    }

    /// `y² + κ y'²` relative to its initial value; zero for exact solutions.
    pub fn energy_drift(&self) -> f64 {
        let e = |i: usize| self.dy[i] * self.dy[i] + self.kappa * self.y[i] * self.y[i];
        let e0 = e(0);
        (0..self.s.len()).map(|i| math::abs(e(i) - e0)).fold(0.0, f64::max)
    }
}

fn nearest(grid: &[f64], s: f64) -> usize {
    let k = grid.partition_point(|&g| g < s);
    if k == 0 {
        0
    } else if k == grid.len() || s - grid[k - 1] <= grid[k] - s {
        k - 1
    } else {
        k
    }
}

fn grid(s_max: f64) -> Result<Vec<f64>> {
    if !(s_max > 0.0 && s_max.is_finite()) {
        return Err(Error::InvalidParameter(format!("s_max = {s_max} must be positive")));
    }
    let steps = math::ceil(s_max / GRID_STEP) as usize;
    Ok((0..=steps).map(|k| (k as f64 * GRID_STEP).min(s_max)).collect())
}

fn integrate_linear(kappa: f64, y0: [f64; 2], s_max: f64, tol: f64) -> Result<OdeSamples> {
    let s = grid(s_max)?;
    let tols = Tolerances {
        atol: tol,
        rtol: tol,
        ..Tolerances::default()
    };
    let rhs = move |_t: f64, y: &[f64], dy: &mut [f64]| {
        dy[0] = y[1];
        dy[1] = -kappa * y[0];
    };
    let mut ys = vec![y0[0]];
    let mut dys = vec![y0[1]];
    let mut state = vec![y0[0], y0[1]];
    for w in s.windows(2) {
        let traj = ode::integrate(rhs, w[0], &state, w[1], &tols, None::<fn(f64, &[f64]) -> f64>);
        if traj.stop != Stop::Completed {
            return Err(Error::InvalidParameter(format!("integration stopped at s = {}", w[0])));
        }
        state = traj.last().1.to_vec();
        ys.push(state[0]);
        dys.push(state[1]);
    }
    Ok(OdeSamples {
        kappa,
        s,
        y: ys,
        dy: dys,
    })
}

/// `φ'' = φ`, `φ(0) = 1`, `φ'(0) = 0`.
pub fn integrate_phi(s_max: f64, tol: f64) -> Result<OdeSamples> {
    integrate_linear(-1.0, [1.0, 0.0], s_max, tol)
}

/// `f'' - f = 0`, `f(0) = 0`, `f'(0) = 1`.
pub fn integrate_jacobi(s_max: f64, tol: f64) -> Result<OdeSamples> {
    integrate_jacobi_with(-1.0, s_max, tol)
}

/// Jacobi equation `f'' + κ f = 0` for radial curvature `R_{0i0j} = κ δ_ij`.
pub fn integrate_jacobi_with(kappa: f64, s_max: f64, tol: f64) -> Result<OdeSamples> {
    integrate_linear(kappa, [0.0, 1.0], s_max, tol)
}

#[derive(Debug, Clone)]
pub struct ObataSolution {
    pub n: usize,
    pub phi: Arc<OdeSamples>,
    pub jacobi: Arc<OdeSamples>,
    /// `ds² + f(s)² dσ₀` on the geodesic polar chart.
    pub reconstructed: MetricField,
    /// `φ` as a field on the same chart.
    pub potential: ScalarField,
}

impl ObataSolution {
    pub fn s_grid(&self) -> &[f64] {
        &self.phi.s
    }

    /// Rows `(s, φ, f)`.
    pub fn table(&self) -> Vec<[f64; 3]> {
        (0..self.phi.s.len())
            .map(|i| [self.phi.s[i], self.phi.y[i], self.jacobi.y[i]])
            .collect()
    }
}

pub fn solve(n: usize, s_max: f64, tol: f64) -> Result<ObataSolution> {
    if !(2..=5).contains(&n) {
        return Err(Error::InvalidParameter(format!("n = {n} outside 2..=5")));
    }
    let phi = Arc::new(integrate_phi(s_max, tol)?);
    let jacobi = Arc::new(integrate_jacobi(s_max, tol)?);
    let chart = Chart::geodesic_polar(n)
        .with_domain_range(0, 0.0, s_max)
        .with_sample_range(0, 0.2, s_max.min(3.0));
    let jac = jacobi.clone();
    let reconstructed = MetricField::diagonal(chart.clone(), Signature::Riemannian, move |x| {
        let f = x[0].chain(jac.derivatives(x[0].value()));
        let mut d = vec![x[0].lift(1.0)];
        d.extend(catalog::sphere_factors(&x[1..]).into_iter().map(|s| s * f.square()));
        d
    });
    let ph = phi.clone();
    let potential = ScalarField::new(chart, move |x| x[0].chain(ph.derivatives(x[0].value())));
    Ok(ObataSolution {
        n,
        phi,
        jacobi,
        reconstructed,
        potential,
    })
}

/// `|∇²φ - φ g|` on the reconstructed metric.
pub fn verify_rigidity(sol: &ObataSolution, p: &ChartPoint) -> Result<f64> {
    let geo = Geometry::at(&sol.reconstructed, p, 1)?;
    let phi = sol.potential.jet(p, 2)?;
    let hess = geo.hessian(&phi);
    let g = geo.metric_values();
    let defect: Vec<f64> = hess.iter().zip(&g).map(|(h, g)| h.value() - phi.value() * g).collect();
    Ok(math::sqrt(math::abs(geo.norm_sq2(&defect))))
}

/// Largest `|φ(s) - √(1 + r²)|` and `|f'² - 1 - f²|` over the grid with
/// `r = f(s)`; both vanish when the samples describe the ball model.
pub fn ball_model_defects(sol: &ObataSolution) -> (f64, f64) {
    let mut phi_defect: f64 = 0.0;
    let mut profile_defect: f64 = 0.0;
    for i in 0..sol.phi.s.len() {
        let r = sol.jacobi.y[i];
        phi_defect = phi_defect.max(math::abs(sol.phi.y[i] - math::sqrt(1.0 + r * r)));
        let fp = sol.jacobi.dy[i];
        profile_defect = profile_defect.max(math::abs(fp * fp - 1.0 - r * r));
    }
    (phi_defect, profile_defect)
}

/// Largest component of `Ric + (n-1) g`.
pub fn einstein_defect(sol: &ObataSolution, p: &ChartPoint) -> Result<f64> {
    let geo = Geometry::at(&sol.reconstructed, p, 2)?;
    let ric = geo.ricci();
    let g = geo.metric_values();
    let k = (sol.n - 1) as f64;
    Ok(ric
        .iter()
        .zip(&g)
        .map(|(r, g)| math::abs(r.value() + k * g))
        .fold(0.0, f64::max))
}

/// Largest `|R_{0i0j} + δ_ij|` in the orthonormal frame `∂_s, ∂_i/|∂_i|`.
pub fn radial_curvature_defect(sol: &ObataSolution, p: &ChartPoint) -> Result<f64> {
    let geo = Geometry::at(&sol.reconstructed, p, 2)?;
    let d = geo.dim();
    let low = geo.lower_riemann(&geo.riemann());
    let g = geo.metric_values();
    let mut worst: f64 = 0.0;
    for i in 1..d {
        for j in 1..d {
            let norm = math::sqrt(g[i2(d, i, i)] * g[i2(d, j, j)]);
            let r = low[i4(d, 0, i, 0, j)].value() / norm;
            let delta = if i == j { 1.0 } else { 0.0 };
            worst = worst.max(math::abs(r + delta));
        }
    }
    Ok(worst)
}
