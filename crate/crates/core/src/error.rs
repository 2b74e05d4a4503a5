use alloc::string::String;

/// Errors raised by the geometry engine and the solvers built on it.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("degenerate metric at {chart}: |det g| = {det:e}")]
    DegenerateMetric { chart: String, det: f64 },
    #[error("metric not symmetric at {chart}: |g_ab - g_ba| = {defect:e}")]
    AsymmetricMetric { chart: String, defect: f64 },
    #[error("metric at {chart} has {negative} negative eigenvalues, expected {expected}")]
    SignatureMismatch {
        chart: String,
        negative: usize,
        expected: usize,
    },
    #[error("point has {got} coordinates, chart {chart} has dimension {expected}")]
    DimensionMismatch { chart: String, expected: usize, got: usize },
    #[error("coordinate {index} = {value} outside the domain of chart {chart}")]
    OutsideDomain { chart: String, index: usize, value: f64 },
    #[error("point belongs to chart {got}, field is defined on {expected}")]
    ChartMismatch { expected: String, got: String },
    #[error("dimension {0} exceeds the supported maximum")]
    DimensionTooLarge(usize),
    #[error("jet order {requested} requested, field supports {available}")]
    InsufficientOrder { requested: usize, available: usize },
    #[error("lapse vanishes: |V| = {value:e} at {location}")]
    VanishingLapse { value: f64, location: String },
    #[error("series precondition failed: {0}")]
    Series(&'static str),
    #[error("even boundary dimension n = {n}: orders >= n need the log-truncation flag")]
    LogTerm { n: usize },
    #[error("horizon: f <= 0 at r = {r}")]
    Horizon { r: f64 },
    #[error("leading behaviour is not asymptotically AdS: {0}")]
    Asymptotics(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("epsilon {0} outside the gauge domain")]
    OutsideGaugeDomain(f64),
}

pub type Result<T> = core::result::Result<T, Error>;
