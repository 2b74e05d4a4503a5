//! Dormand-Prince 5(4) with step-size control and sign-change events.

use alloc::vec;
use alloc::vec::Vec;

use crate::conventions::{EVENT_TOL, ODE_ATOL, ODE_RTOL};
use crate::math;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub atol: f64,
    pub rtol: f64,
    pub event_tol: f64,
    /// Smallest step magnitude before the run is declared a blow-up.
    pub h_min: f64,
    pub max_steps: usize,
    /// Upper bound on the step magnitude (also the output spacing bound).
    pub h_max: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            atol: ODE_ATOL,
            rtol: ODE_RTOL,
            event_tol: EVENT_TOL,
            h_min: 1e-14,
            max_steps: 200_000,
            h_max: f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stop {
    /// Reached the requested end point.
    Completed,
    /// The event function changed sign; the bracket is below `event_tol`.
    Event { t: f64 },
    /// Step size underflow or non-finite state.
    Blowup { t: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    pub stop: Stop,
    pub rejected: usize,
}

impl Trajectory {
    pub fn last(&self) -> (f64, &[f64]) {
        (*self.t.last().unwrap(), self.y.last().unwrap())
    }
}

/// One Dormand-Prince step; returns the fifth-order solution and the error
/// estimate.
fn step<F>(f: &F, t: f64, y: &[f64], h: f64, k: &mut [Vec<f64>; 7]) -> (Vec<f64>, Vec<f64>)
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let n = y.len();
    let mut tmp = vec![0.0; n];
    for s in 0..7 {
        for i in 0..n {
            let mut acc = y[i];
            for (j, a) in A[s].iter().enumerate().take(s) {
                acc += h * a * k[j][i];
            }
            tmp[i] = acc;
        }
        f(t + C[s] * h, &tmp, &mut k[s]);
    }
    let mut y5 = vec![0.0; n];
    let mut err = vec![0.0; n];
    for i in 0..n {
        let mut a5 = 0.0;
        let mut a4 = 0.0;
        for s in 0..7 {
            a5 += B5[s] * k[s][i];
            a4 += B4[s] * k[s][i];
        }
        y5[i] = y[i] + h * a5;
        err[i] = h * (a5 - a4);
    }
    (y5, err)
}

/// Integrates `y' = f(t, y)` from `t0` to `t1` (either direction). When an
/// event function is given, the run stops at its first sign change.
pub fn integrate<F, E>(f: F, t0: f64, y0: &[f64], t1: f64, tol: &Tolerances, event: Option<E>) -> Trajectory
where
    F: Fn(f64, &[f64], &mut [f64]),
    E: Fn(f64, &[f64]) -> f64,
{
    let n = y0.len();
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let span = math::abs(t1 - t0);
    let mut k: [Vec<f64>; 7] = core::array::from_fn(|_| vec![0.0; n]);
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut out = Trajectory {
        t: vec![t0],
        y: vec![y.clone()],
        stop: Stop::Completed,
        rejected: 0,
    };
    if span == 0.0 {
        return out;
    }
    let mut h = (span * 1e-3).min(tol.h_max).max(tol.h_min * 10.0) * dir;
    let mut g_prev = event.as_ref().map(|e| e(t, &y));
    for _ in 0..tol.max_steps {
        if math::abs(t1 - t) <= 1e-15 * span.max(1.0) {
            return out;
        }
        if math::abs(h) > math::abs(t1 - t) {
            h = t1 - t;
        }
        let (y_new, err) = step(&f, t, &y, h, &mut k);
        let mut e2 = 0.0;
        for i in 0..n {
            let sc = tol.atol + tol.rtol * math::abs(y[i]).max(math::abs(y_new[i]));
            let r = err[i] / sc;
            e2 += r * r;
        }
        let e = math::sqrt(e2 / n as f64);
        if !e.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            h *= 0.25;
            out.rejected += 1;
            if math::abs(h) < tol.h_min {
                out.stop = Stop::Blowup { t };
                return out;
            }
            continue;
        }
        if e <= 1.0 {
            let t_new = t + h;
            if let (Some(ev), Some(gp)) = (event.as_ref(), g_prev) {
                let g_new = ev(t_new, &y_new);
                if gp == 0.0 || (gp > 0.0) != (g_new > 0.0) {
                    let (te, ye) = locate(&f, ev, t, &y, h, gp, tol.event_tol, &mut k);
                    out.t.push(te);
                    out.y.push(ye);
                    out.stop = Stop::Event { t: te };
                    return out;
                }
                g_prev = Some(g_new);
            }
            t = t_new;
            y = y_new;
            out.t.push(t);
            out.y.push(y.clone());
        } else {
            out.rejected += 1;
        }
        let factor = if e == 0.0 {
            5.0
        } else {
            (0.9 * math::powf(e, -0.2)).clamp(0.2, 5.0)
        };
        h = (h * factor).abs().min(tol.h_max) * dir;
        if math::abs(h) < tol.h_min {
            out.stop = Stop::Blowup { t };
            return out;
        }
    }
    out.stop = Stop::Blowup { t };
    out
}

/// Bisection on the step fraction, re-stepping from the accepted step start.
#[allow(clippy::too_many_arguments)]
fn locate<F, E>(
    f: &F,
    ev: &E,
    t: f64,
    y: &[f64],
    h: f64,
    g0: f64,
    event_tol: f64,
    k: &mut [Vec<f64>; 7],
) -> (f64, Vec<f64>)
where
    F: Fn(f64, &[f64], &mut [f64]),
    E: Fn(f64, &[f64]) -> f64,
{
    if g0 == 0.0 {
        return (t, y.to_vec());
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut best = step(f, t, y, h, k).0;
    while (hi - lo) * math::abs(h) > event_tol {
        let mid = 0.5 * (lo + hi);
        let (ym, _) = step(f, t, y, mid * h, k);
        let gm = ev(t + mid * h, &ym);
        if gm == 0.0 {
            return (t + mid * h, ym);
        }
        if (gm > 0.0) == (g0 > 0.0) {
            lo = mid;
        } else {
            hi = mid;
            best = ym;
        }
    }
    (t + hi * h, best)
}

#[cfg(test)]
mod tests {
    use super::*;

    type NoEvent = fn(f64, &[f64]) -> f64;

    #[test]
    fn harmonic_oscillator() {
        let tr = integrate(
            |_, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            0.0,
            &[0.0, 1.0],
            2.0,
            &Tolerances::default(),
            None::<NoEvent>,
        );
        let (t, y) = tr.last();
        assert_eq!(tr.stop, Stop::Completed);
        assert!((t - 2.0).abs() < 1e-15);
        assert!((y[0] - 2f64.sin()).abs() < 1e-9);
    }

    #[test]
    fn backward_event() {
        // y = t^2 - 0.25 integrated down from t = 1 hits zero at t = 0.5
        let tr = integrate(
            |t, _, dy| dy[0] = 2.0 * t,
            1.0,
            &[0.75],
            0.0,
            &Tolerances::default(),
            Some(|_: f64, y: &[f64]| y[0]),
        );
        match tr.stop {
            Stop::Event { t } => assert!((t - 0.5).abs() < 1e-11),
            other => panic!("{other:?}"),
        }
    }
}
