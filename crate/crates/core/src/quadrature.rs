//! Gauss-Legendre rules and tensor-product integration over angle boxes.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::math;

/// Nodes and weights on `[-1, 1]` (Newton on the three-term recurrence).
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = math::cos(PI * (i as f64 + 0.75) / (nf + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if math::abs(dx) < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

/// `(P_n(x), P_n'(x))`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Tensor-product rule over the box `∏ [lo_i, hi_i]`, `nodes` per axis.
pub fn integrate_box(bounds: &[(f64, f64)], nodes: usize, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
    let rule = GaussLegendre::new(nodes);
    let dim = bounds.len();
    let mut idx = vec![0usize; dim];
    let mut point = vec![0.0; dim];
    let mut total = 0.0;
    if dim == 0 {
        return f(&point);
    }
    loop {
        let mut w = 1.0;
        for (a, &(lo, hi)) in bounds.iter().enumerate() {
            let half = 0.5 * (hi - lo);
            point[a] = 0.5 * (hi + lo) + half * rule.nodes[idx[a]];
            w *= half * rule.weights[idx[a]];
        }
        total += w * f(&point);
        let mut a = 0;
        loop {
            idx[a] += 1;
            if idx[a] < nodes {
                break;
            }
            idx[a] = 0;
            a += 1;
            if a == dim {
                return total;
            }
        }
    }
}

/// Area of the unit sphere `S^{m}` embedded in `R^{m+1}`.
pub fn sphere_area(m: usize) -> f64 {
    // |S^m| = 2 pi^{(m+1)/2} / Gamma((m+1)/2)
    let mut area = [2.0, 2.0 * PI];
    for k in 2..=m {
        let next = 2.0 * PI * area[0] / (k as f64 - 1.0);
        area = [area[1], next];
    }
    if m == 0 {
        area[0]
    } else {
        area[1]
    }
}
