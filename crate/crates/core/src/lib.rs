//! Pointwise differential geometry for asymptotically anti-de Sitter metrics.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is evaluated at
//! explicit chart points through third-order jets, so curvature, Hessians and
//! exterior derivatives come out exact up to round-off with no finite
//! differencing anywhere in the production path.
//!
//! Module map:
//!
//! - [`jet`], [`chart`], [`field`], [`tensor`], [`forms`]: the tensor engine.
//! - [`catalog`]: closed-form metrics (AdS, Schwarzschild-AdS, hyperbolic, ...).
//! - [`killing`]: Killing residuals, twist forms and the boundary flux.
//! - [`series`], [`fg`]: truncated power series and the near-boundary expansion.
//! - [`ode`], [`static_system`]: static vacuum triples, shooting and horizons.
//! - [`compactification`]: the compactified slice `u^2 h` and its identities.
//! - [`obata`]: reconstruction of the hyperbolic metric from `Hess phi = phi g`.
#![no_std]
#![warn(missing_debug_implementations)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod catalog;
pub mod chart;
pub mod compactification;
pub mod conventions;
mod error;
pub mod fg;
pub mod field;
pub mod fit;
pub mod forms;
pub mod jet;
pub mod killing;
pub mod linalg;
pub mod math;
pub mod obata;
pub mod ode;
pub mod quadrature;
pub mod real;
pub mod series;
pub mod static_system;
pub mod tensor;

pub use chart::{Chart, ChartPoint, PointSampler};
pub use error::{Error, Result};
pub use field::{FormField, MetricField, ScalarField, Signature, VectorField};
pub use jet::Jet;
pub use real::Real;
pub use series::TruncatedSeries;
