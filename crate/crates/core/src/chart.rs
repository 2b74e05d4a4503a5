//! Coordinate charts, points, and the seeded point generator.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::jet::MAX_DIM;

pub const GLOBAL_ADS: &str = "global-AdS";
pub const FG_GAUGE: &str = "FG-gauge";
pub const RADIAL_SLICE: &str = "radial-slice";
pub const GEODESIC_POLAR: &str = "geodesic-polar";
pub const CARTESIAN: &str = "cartesian";
pub const SPHERE: &str = "round-sphere";

/// An open interval `(lo, hi)`; infinite bounds allowed.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }
}

/// A coordinate chart: its declared open domain plus a smaller admissibility
/// box that random test points are drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    id: String,
    domain: Vec<Interval>,
    sample_box: Vec<Interval>,
}

impl Chart {
    pub fn new(id: impl Into<String>, domain: Vec<Interval>, sample_box: Vec<Interval>) -> Result<Self> {
        if domain.len() != sample_box.len() {
            return Err(Error::InvalidParameter(
                "domain and sample box differ in length".to_string(),
            ));
        }
        if domain.len() > MAX_DIM {
            return Err(Error::DimensionTooLarge(domain.len()));
        }
        Ok(Chart {
            id: id.into(),
            domain,
            sample_box,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dim(&self) -> usize {
        self.domain.len()
    }

    pub fn domain(&self) -> &[Interval] {
        &self.domain
    }

    pub fn sample_box(&self) -> &[Interval] {
        &self.sample_box
    }

    /// Replaces the admissibility range of one coordinate.
    pub fn with_sample_range(mut self, index: usize, lo: f64, hi: f64) -> Self {
        self.sample_box[index] = Interval::new(lo, hi);
        self
    }

    pub fn with_domain_range(mut self, index: usize, lo: f64, hi: f64) -> Self {
        self.domain[index] = Interval::new(lo, hi);
        self
    }

    pub fn point(&self, coords: &[f64]) -> Result<ChartPoint> {
        ChartPoint::new(self, coords.to_vec())
    }

    /// Euclidean `R^dim`.
    pub fn cartesian(dim: usize) -> Self {
        let all = Interval::new(f64::NEG_INFINITY, f64::INFINITY);
        Chart::new(CARTESIAN, vec![all; dim], vec![Interval::new(-2.0, 2.0); dim]).expect("cartesian chart")
    }

    /// Iterated polar angles on `S^m`: `m-1` polar angles in `(0, π)` and a
    /// final azimuth in `(0, 2π)`.
    pub fn sphere(m: usize) -> Self {
        let (d, s) = sphere_angles(m);
        Chart::new(SPHERE, d, s).expect("sphere chart")
    }

    /// `(t, r, θ_1 .. θ_{n-1})` on `R × (0, ∞) × S^{n-1}`.
    pub fn global_ads(n: usize) -> Self {
        let (mut d, mut s) = (
            vec![
                Interval::new(f64::NEG_INFINITY, f64::INFINITY),
                Interval::new(0.0, f64::INFINITY),
            ],
            vec![Interval::new(-1.0, 1.0), Interval::new(0.5, 3.0)],
        );
        let (ad, asb) = sphere_angles(n - 1);
        d.extend(ad);
        s.extend(asb);
        Chart::new(GLOBAL_ADS, d, s).expect("global AdS chart")
    }

    /// `(s, t, θ_1 .. θ_{n-1})` near the conformal boundary `s = 0`.
    pub fn fg_gauge(n: usize) -> Self {
        let (mut d, mut s) = (
            vec![Interval::new(0.0, 2.0), Interval::new(f64::NEG_INFINITY, f64::INFINITY)],
            vec![Interval::new(0.1, 1.0), Interval::new(-1.0, 1.0)],
        );
        let (ad, asb) = sphere_angles(n - 1);
        d.extend(ad);
        s.extend(asb);
        Chart::new(FG_GAUGE, d, s).expect("FG chart")
    }

    /// `(r, θ_1 .. θ_{n-1})` on a static slice.
    pub fn radial_slice(n: usize) -> Self {
        let (mut d, mut s) = (vec![Interval::new(0.0, f64::INFINITY)], vec![Interval::new(0.5, 3.0)]);
        let (ad, asb) = sphere_angles(n - 1);
        d.extend(ad);
        s.extend(asb);
        Chart::new(RADIAL_SLICE, d, s).expect("radial slice chart")
    }

    /// Geodesic polar coordinates `(s, θ_1 .. θ_{n-1})` about a point.
    pub fn geodesic_polar(n: usize) -> Self {
        let (mut d, mut s) = (vec![Interval::new(0.0, f64::INFINITY)], vec![Interval::new(0.2, 3.0)]);
        let (ad, asb) = sphere_angles(n - 1);
        d.extend(ad);
        s.extend(asb);
        Chart::new(GEODESIC_POLAR, d, s).expect("geodesic polar chart")
    }
}

fn sphere_angles(m: usize) -> (Vec<Interval>, Vec<Interval>) {
    let mut d = Vec::with_capacity(m);
    let mut s = Vec::with_capacity(m);
    for i in 0..m {
        if i + 1 == m {
            d.push(Interval::new(0.0, 2.0 * PI));
            s.push(Interval::new(0.1, 2.0 * PI - 0.1));
        } else {
            d.push(Interval::new(0.0, PI));
            s.push(Interval::new(0.3, PI - 0.3));
        }
    }
    (d, s)
}

/// A point of a chart; construction checks dimension and domain.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ChartPoint {
    pub chart_id: String,
    pub coords: Vec<f64>,
}

impl ChartPoint {
    pub fn new(chart: &Chart, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != chart.dim() {
            return Err(Error::DimensionMismatch {
                chart: chart.id.clone(),
                expected: chart.dim(),
                got: coords.len(),
            });
        }
        for (i, (x, iv)) in coords.iter().zip(&chart.domain).enumerate() {
            if !iv.contains(*x) {
                return Err(Error::OutsideDomain {
                    chart: chart.id.clone(),
                    index: i,
                    value: *x,
                });
            }
        }
        Ok(ChartPoint {
            chart_id: chart.id.clone(),
            coords,
        })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// Seeded, platform-independent point generator.
///
/// ChaCha8 keyed with `SeedableRng::seed_from_u64(seed)` and word stream
/// `stream`; each uniform draw takes the top 53 bits of one `next_u64`.
#[derive(Debug, Clone)]
pub struct PointSampler {
    rng: ChaCha8Rng,
}

impl PointSampler {
    pub fn new(seed: u64) -> Self {
        PointSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        PointSampler { rng }
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// A point drawn uniformly from the chart's admissibility box.
    pub fn point(&mut self, chart: &Chart) -> ChartPoint {
        let coords = chart.sample_box.iter().map(|iv| self.uniform(iv.lo, iv.hi)).collect();
        ChartPoint::new(chart, coords).expect("admissibility box lies inside the chart domain")
    }

    pub fn points(&mut self, chart: &Chart, count: usize) -> Vec<ChartPoint> {
        (0..count).map(|_| self.point(chart)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_points_outside_domain() {
        let c = Chart::global_ads(3);
        assert!(matches!(
            c.point(&[0.0, -1.0, 1.0, 1.0]),
            Err(Error::OutsideDomain { index: 1, .. })
        ));
        assert!(matches!(
            c.point(&[0.0, 1.0, 1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(c.point(&[0.0, 1.0, 1.0, 1.0]).is_ok());
    }

    #[test]
    fn sampler_is_reproducible() {
        let c = Chart::global_ads(4);
        let a = PointSampler::new(42).points(&c, 5);
        let b = PointSampler::new(42).points(&c, 5);
        assert_eq!(a, b);
        let other = PointSampler::with_stream(42, 7).points(&c, 5);
        assert_ne!(a, other);
    }
}
