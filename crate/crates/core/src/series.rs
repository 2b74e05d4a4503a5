//! Truncated power series `c_0 + c_1 s + ... + c_N s^N`.
//!
//! Binary operations truncate to the smaller of the two operand orders, so
//! nothing is ever extended past the data that determines it.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::math;
use crate::real::Real;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TruncatedSeries {
    coeffs: Vec<f64>,
}

impl TruncatedSeries {
    /// Series with the given coefficients; the truncation order is `len - 1`.
    pub fn new(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least c_0");
        TruncatedSeries { coeffs }
    }

    pub fn constant(c: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = c;
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries::constant(0.0, order)
    }

    /// The variable `s` itself.
    pub fn variable(order: usize) -> Self {
        let mut out = TruncatedSeries::zero(order);
        if order >= 1 {
            out.coeffs[1] = 1.0;
        }
        out
    }

    /// `c + s` (a point shifted variable), useful for Taylor-mode evaluation.
    pub fn affine(c: f64, order: usize) -> Self {
        let mut out = TruncatedSeries::variable(order);
        out.coeffs[0] = c;
        out
    }

    /// Builds from the first `order + 1` coefficients of a closure.
    pub fn from_fn(order: usize, f: impl Fn(usize) -> f64) -> Self {
        TruncatedSeries {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn set_coeff(&mut self, k: usize, c: f64) {
        self.coeffs[k] = c;
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        TruncatedSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Pads with zeros up to `order`. Only legitimate for series known to be
    /// polynomials.
    pub fn extend_polynomial(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order.max(self.order()) + 1, 0.0);
        TruncatedSeries { coeffs }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(math::abs(*c)))
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c)
    }

    pub fn scale(&self, c: f64) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Reciprocal; needs `c_0 != 0`.
    pub fn invert(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0 == 0.0 {
            return Err(Error::Series("invert needs a nonzero constant term"));
        }
        let n = self.order();
        let mut b = vec![0.0; n + 1];
        b[0] = 1.0 / a0;
        for k in 1..=n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += self.coeffs[j] * b[k - j];
            }
            b[k] = -acc / a0;
        }
        Ok(TruncatedSeries { coeffs: b })
    }

    /// Square root with positive constant term.
    pub fn sqrt(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0 <= 0.0 {
            return Err(Error::Series("sqrt needs a positive constant term"));
        }
        let n = self.order();
        let mut b = vec![0.0; n + 1];
        b[0] = math::sqrt(a0);
        for k in 1..=n {
            let mut acc = self.coeffs[k];
            for j in 1..k {
                acc -= b[j] * b[k - j];
            }
            b[k] = acc / (2.0 * b[0]);
        }
        Ok(TruncatedSeries { coeffs: b })
    }

    /// `a^p` for a positive constant term, via `b' a = p a' b`.
    pub fn powf(&self, p: f64) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0 <= 0.0 {
            return Err(Error::Series("real power needs a positive constant term"));
        }
        let a = &self.coeffs;
        let n = self.order();
        let mut b = vec![0.0; n + 1];
        b[0] = math::powf(a0, p);
        for k in 1..=n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += (p * j as f64 - (k - j) as f64) * a[j] * b[k - j];
            }
            b[k] = acc / (k as f64 * a0);
        }
        Ok(TruncatedSeries { coeffs: b })
    }

    pub fn exp(&self) -> Self {
        let a = &self.coeffs;
        let n = self.order();
        let mut b = vec![0.0; n + 1];
        b[0] = math::exp(a[0]);
        for k in 1..=n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * a[j] * b[k - j];
            }
            b[k] = acc / k as f64;
        }
        TruncatedSeries { coeffs: b }
    }

    pub fn ln(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0 <= 0.0 {
            return Err(Error::Series("log needs a positive constant term"));
        }
        let a = &self.coeffs;
        let n = self.order();
        let mut b = vec![0.0; n + 1];
        b[0] = math::ln(a0);
        for k in 1..=n {
            let mut acc = k as f64 * a[k];
            for j in 1..k {
                acc -= j as f64 * b[j] * a[k - j];
            }
            b[k] = acc / (k as f64 * a0);
        }
        Ok(TruncatedSeries { coeffs: b })
    }

    /// `d/ds`; the order drops by one (a constant stays a constant).
    pub fn differentiate(&self) -> Self {
        if self.order() == 0 {
            return TruncatedSeries::zero(0);
        }
        TruncatedSeries {
            coeffs: (1..self.coeffs.len()).map(|k| k as f64 * self.coeffs[k]).collect(),
        }
    }

    /// Antiderivative vanishing at 0; the order rises by one.
    pub fn integrate(&self) -> Self {
        let mut coeffs = vec![0.0; self.coeffs.len() + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k + 1] = c / (k + 1) as f64;
        }
        TruncatedSeries { coeffs }
    }

    /// Euler operator `s d/ds`, order preserving.
    pub fn euler(&self) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().enumerate().map(|(k, c)| k as f64 * c).collect(),
        }
    }

    /// `a(s) / s` for `c_0 = 0`; the order drops by one.
    pub fn div_by_variable(&self) -> Result<Self> {
        if self.coeffs[0] != 0.0 {
            return Err(Error::Series("division by s needs a vanishing constant term"));
        }
        if self.order() == 0 {
            return Err(Error::Series("division by s of an order-0 series"));
        }
        Ok(TruncatedSeries {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// `s^k a(s)`; the order rises by `k`.
    pub fn mul_by_power(&self, k: usize) -> Self {
        let mut coeffs = vec![0.0; k];
        coeffs.extend_from_slice(&self.coeffs);
        TruncatedSeries { coeffs }
    }

    /// `a(b(s))` for `b_0 = 0` (Horner in truncated arithmetic).
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if inner.coeffs[0] != 0.0 {
            return Err(Error::Series(
                "composition needs an inner series with zero constant term",
            ));
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = TruncatedSeries::constant(self.coeffs[order], order);
        for k in (0..order).rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += self.coeffs[k];
        }
        Ok(acc)
    }

    /// Compositional inverse of `a` with `a_0 = 0`, `a_1 != 0`, by Newton
    /// iteration on `a(b(s)) = s`.
    pub fn reversion(&self) -> Result<Self> {
        if self.coeffs[0] != 0.0 {
            return Err(Error::Series("reversion needs a vanishing constant term"));
        }
        let a1 = self.coeff(1);
        if self.order() == 0 || a1 == 0.0 {
            return Err(Error::Series("reversion needs a nonzero linear coefficient"));
        }
        let n = self.order();
        let da = self.differentiate().extend_polynomial(n);
        let s = TruncatedSeries::variable(n);
        let mut b = s.scale(1.0 / a1);
        let mut precision = 1;
        while precision < n {
            precision = (2 * precision).min(n);
            let residual = &self.compose(&b)? - &s;
            let slope = da.truncate(n).compose(&b)?.invert()?;
            b = &b - &(&residual * &slope);
        }
        // one extra sweep removes any round-off left by the doubling schedule
        let residual = &self.compose(&b)? - &s;
        let slope = da.compose(&b)?.invert()?;
        b = &b - &(&residual * &slope);
        Ok(b)
    }
}

impl Index<usize> for TruncatedSeries {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.coeffs[k]
    }
}

fn zip_with(a: &TruncatedSeries, b: &TruncatedSeries, f: impl Fn(f64, f64) -> f64) -> TruncatedSeries {
    let n = a.order().min(b.order());
    TruncatedSeries {
        coeffs: (0..=n).map(|k| f(a.coeffs[k], b.coeffs[k])).collect(),
    }
}

fn cauchy(a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
    let n = a.order().min(b.order());
    let mut c = vec![0.0; n + 1];
    for i in 0..=n {
        if a.coeffs[i] == 0.0 {
            continue;
        }
        for j in 0..=n - i {
            c[i + j] += a.coeffs[i] * b.coeffs[j];
        }
    }
    TruncatedSeries { coeffs: c }
}

impl<'a> Add<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl<'a> Sub<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl<'a> Mul<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        cauchy(self, rhs)
    }
}

impl Add for TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: TruncatedSeries) -> TruncatedSeries {
        &self + &rhs
    }
}

impl Sub for TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: TruncatedSeries) -> TruncatedSeries {
        &self - &rhs
    }
}

impl Mul for TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: TruncatedSeries) -> TruncatedSeries {
        cauchy(&self, &rhs)
    }
}

/// Panics when the divisor has a zero constant term; use
/// [`TruncatedSeries::invert`] for a checked version.
impl Div for TruncatedSeries {
    type Output = TruncatedSeries;
    fn div(self, rhs: TruncatedSeries) -> TruncatedSeries {
        let inv = rhs
            .invert()
            .expect("series division by a series with zero constant term");
        cauchy(&self, &inv)
    }
}

impl Neg for TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(-1.0)
    }
}

impl Add<f64> for TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(mut self, rhs: f64) -> TruncatedSeries {
        self.coeffs[0] += rhs;
        self
    }
}

impl Mul<f64> for TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: f64) -> TruncatedSeries {
        self.scale(rhs)
    }
}

impl AddAssign<&TruncatedSeries> for TruncatedSeries {
    fn add_assign(&mut self, rhs: &TruncatedSeries) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&TruncatedSeries> for TruncatedSeries {
    fn sub_assign(&mut self, rhs: &TruncatedSeries) {
        *self = &*self - rhs;
    }
}

impl Real for TruncatedSeries {
    fn re(&self) -> f64 {
        self.coeffs[0]
    }

    fn lift(&self, c: f64) -> Self {
        TruncatedSeries::constant(c, self.order())
    }
}
