//! Fields evaluated through jets: scalars, metrics, vectors and forms.

use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::chart::{Chart, ChartPoint};
use crate::error::{Error, Result};
use crate::forms::Form;
use crate::jet::{Jet, MAX_ORDER};
use crate::linalg;
use crate::math;
use crate::real::Real;

type JetFn<T> = Arc<dyn Fn(&[Jet]) -> T + Send + Sync>;

/// Signature of a metric; Lorentzian means `(-, +, ..., +)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Signature {
    Lorentzian,
    Riemannian,
}

impl Signature {
    pub fn negative_directions(self) -> usize {
        match self {
            Signature::Lorentzian => 1,
            Signature::Riemannian => 0,
        }
    }
}

fn check_point(chart: &Chart, p: &ChartPoint) -> Result<()> {
    if p.chart_id != chart.id() {
        return Err(Error::ChartMismatch {
            expected: chart.id().to_string(),
            got: p.chart_id.clone(),
        });
    }
    if p.dim() != chart.dim() {
        return Err(Error::DimensionMismatch {
            chart: chart.id().to_string(),
            expected: chart.dim(),
            got: p.dim(),
        });
    }
    Ok(())
}

fn check_order(requested: usize, available: usize) -> Result<()> {
    if requested > available {
        return Err(Error::InsufficientOrder { requested, available });
    }
    Ok(())
}

/// A scalar function of the chart coordinates, written against jet inputs.
#[derive(Clone)]
pub struct ScalarField {
    chart: Chart,
    max_order: usize,
    eval: JetFn<Jet>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("chart", &self.chart.id())
            .field("max_order", &self.max_order)
            .finish()
    }
}

impl ScalarField {
    pub fn new(chart: Chart, f: impl Fn(&[Jet]) -> Jet + Send + Sync + 'static) -> Self {
        ScalarField {
            chart,
            max_order: MAX_ORDER,
            eval: Arc::new(f),
        }
    }

    /// Caps the derivative order the field promises to deliver exactly.
    pub fn with_max_order(mut self, order: usize) -> Self {
        self.max_order = order.min(MAX_ORDER);
        self
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn eval_jets(&self, x: &[Jet]) -> Jet {
        (self.eval)(x)
    }

    pub fn jet(&self, p: &ChartPoint, order: usize) -> Result<Jet> {
        check_point(&self.chart, p)?;
        check_order(order, self.max_order)?;
        Ok(self.eval_jets(&Jet::seed(&p.coords, order)))
    }

    pub fn value(&self, p: &ChartPoint) -> Result<f64> {
        Ok(self.jet(p, 0)?.value())
    }
}

/// A metric given by its `dim × dim` component functions (row-major).
#[derive(Clone)]
pub struct MetricField {
    chart: Chart,
    signature: Signature,
    max_order: usize,
    eval: JetFn<Vec<Jet>>,
}

impl fmt::Debug for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricField")
            .field("chart", &self.chart.id())
            .field("dim", &self.dim())
            .field("signature", &self.signature)
            .finish()
    }
}

impl MetricField {
    pub fn new(
        chart: Chart,
        signature: Signature,
        components: impl Fn(&[Jet]) -> Vec<Jet> + Send + Sync + 'static,
    ) -> Self {
        MetricField {
            chart,
            signature,
            max_order: MAX_ORDER,
            eval: Arc::new(components),
        }
    }

    /// A diagonal metric from its diagonal entries.
    pub fn diagonal(
        chart: Chart,
        signature: Signature,
        diag: impl Fn(&[Jet]) -> Vec<Jet> + Send + Sync + 'static,
    ) -> Self {
        MetricField::new(chart, signature, move |x| {
            let d = x.len();
            let entries = diag(x);
            let zero = x[0].zero_like();
            let mut g = alloc::vec![zero; d * d];
            for (i, e) in entries.into_iter().enumerate() {
                g[i * d + i] = e;
            }
            g
        })
    }

    pub fn with_max_order(mut self, order: usize) -> Self {
        self.max_order = order.min(MAX_ORDER);
        self
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn components_jets(&self, x: &[Jet]) -> Vec<Jet> {
        (self.eval)(x)
    }

    /// Component jets at `p`, checked for symmetry.
    pub fn components(&self, p: &ChartPoint, order: usize) -> Result<Vec<Jet>> {
        check_point(&self.chart, p)?;
        check_order(order, self.max_order)?;
        let g = self.components_jets(&Jet::seed(&p.coords, order));
        let d = self.dim();
        let scale = g.iter().map(|x| math::abs(x.value())).fold(0.0, f64::max);
        for a in 0..d {
            for b in a + 1..d {
                let defect = math::abs(g[a * d + b].value() - g[b * d + a].value());
                if defect > 1e-12 * scale.max(1.0) {
                    return Err(Error::AsymmetricMetric {
                        chart: self.chart.id().to_string(),
                        defect,
                    });
                }
            }
        }
        Ok(g)
    }

    pub fn values(&self, p: &ChartPoint) -> Result<Vec<f64>> {
        Ok(self.components(p, 0)?.iter().map(Jet::value).collect())
    }

    /// Checks nondegeneracy and that eigenvalue signs match the signature.
    pub fn check_signature(&self, p: &ChartPoint) -> Result<()> {
        let g = self.values(p)?;
        let d = self.dim();
        let det = linalg::determinant(&g, d);
        let scale = g.iter().map(|x| math::abs(*x)).fold(0.0, f64::max);
        if math::abs(det) <= 1e-14 * math::powi(scale, d as i32) {
            return Err(Error::DegenerateMetric {
                chart: self.chart.id().to_string(),
                det,
            });
        }
        let negative = linalg::symmetric_eigenvalues(&g, d)
            .into_iter()
            .filter(|&e| e < 0.0)
            .count();
        let expected = self.signature.negative_directions();
        if negative != expected {
            return Err(Error::SignatureMismatch {
                chart: self.chart.id().to_string(),
                negative,
                expected,
            });
        }
        Ok(())
    }
}

/// A vector field by its coordinate components.
#[derive(Clone)]
pub struct VectorField {
    chart: Chart,
    eval: JetFn<Vec<Jet>>,
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorField").field("chart", &self.chart.id()).finish()
    }
}

impl VectorField {
    pub fn new(chart: Chart, components: impl Fn(&[Jet]) -> Vec<Jet> + Send + Sync + 'static) -> Self {
        VectorField {
            chart,
            eval: Arc::new(components),
        }
    }

    /// A constant-coefficient combination of coordinate fields.
    pub fn coordinate_combination(chart: Chart, coefficients: Vec<f64>) -> Self {
        VectorField::new(chart, move |x| coefficients.iter().map(|&c| x[0].lift(c)).collect())
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn components_jets(&self, x: &[Jet]) -> Vec<Jet> {
        (self.eval)(x)
    }

    pub fn components(&self, p: &ChartPoint, order: usize) -> Result<Vec<Jet>> {
        check_point(&self.chart, p)?;
        Ok(self.components_jets(&Jet::seed(&p.coords, order)))
    }
}

/// A differential form by its coefficients on increasing multi-indices.
#[derive(Clone)]
pub struct FormField {
    chart: Chart,
    degree: usize,
    eval: JetFn<Form<Jet>>,
}

impl fmt::Debug for FormField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FormField")
            .field("chart", &self.chart.id())
            .field("degree", &self.degree)
            .finish()
    }
}

impl FormField {
    pub fn new(chart: Chart, degree: usize, coeffs: impl Fn(&[Jet]) -> Form<Jet> + Send + Sync + 'static) -> Self {
        FormField {
            chart,
            degree,
            eval: Arc::new(coeffs),
        }
    }

    /// `df` of a scalar field.
    pub fn differential(f: ScalarField) -> Self {
        let chart = f.chart().clone();
        FormField::new(chart, 1, move |x| {
            let d = x.len();
            let order = x[0].order();
            let raised: Vec<Jet> = x
                .iter()
                .enumerate()
                .map(|(i, xi)| Jet::variable(d, order + 1, i, xi.value()))
                .collect();
            // Re-seed one order higher so df keeps the caller's order.
            let fj = if order < MAX_ORDER {
                f.eval_jets(&raised)
            } else {
                f.eval_jets(x)
            };
            let coeffs = (0..d).map(|a| fj.partial(a).truncate(order)).collect();
            Form::from_coeffs(d, 1, coeffs)
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn eval_jets(&self, x: &[Jet]) -> Form<Jet> {
        (self.eval)(x)
    }

    pub fn jets(&self, p: &ChartPoint, order: usize) -> Result<Form<Jet>> {
        check_point(&self.chart, p)?;
        Ok(self.eval_jets(&Jet::seed(&p.coords, order)))
    }
}
