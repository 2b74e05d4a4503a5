//! Minimal field-like abstraction shared by `f64`, [`Jet`](crate::Jet) and
//! [`TruncatedSeries`](crate::TruncatedSeries), so small algorithms (pivoted
//! elimination, the static ODE right-hand side) are written once.

use core::ops::{Add, Div, Mul, Neg, Sub};

pub trait Real:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Mul<f64, Output = Self>
{
    /// Leading (point) value, used for pivoting and sign tests.
    fn re(&self) -> f64;

    /// A constant with the same shape (jet dimension/order, series order).
    fn lift(&self, c: f64) -> Self;
}

impl Real for f64 {
    #[inline]
    fn re(&self) -> f64 {
        *self
    }

    #[inline]
    fn lift(&self, c: f64) -> Self {
        c
    }
}
