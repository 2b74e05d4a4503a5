//! Sign conventions and default tolerances, stated once.
//!
//! * Signature `(-, +, ..., +)` for Lorentzian metrics.
//! * `R^a_{bcd} = ∂_c Γ^a_{db} - ∂_d Γ^a_{cb} + Γ^a_{ce} Γ^e_{db} - Γ^a_{de} Γ^e_{cb}`,
//!   `Ric_{bd} = R^a_{bad}`, so the unit round sphere has `R = +2`.
//! * Vacuum with `Λ = -n(n-1)/2` in dimension `n + 1` means `Ric = -n g`.
//! * Hodge star: `α ∧ *β = <α, β> vol` with `vol = sqrt|det g| dx^0 ∧ ... ∧ dx^{d-1}`.

/// Machine-readable summary of the conventions above.
pub const CONVENTIONS: &str = "signature=(-,+,...,+); R^a_bcd=d_c G^a_db-d_d G^a_cb+G^a_ce G^e_db-G^a_de G^e_cb; \
Ric_bd=R^a_bad; unit S^2 has R=+2; vacuum: Ric=-n g, Lambda=-n(n-1)/2; \
hodge: a^*b=<a,b>vol, orientation by coordinate order";

/// Identities linear in second-order jets.
pub const TOL_CURV: f64 = 1e-8;
/// Quantities that need third derivatives of the metric.
pub const TOL_THIRD: f64 = 1e-6;
/// Exact-zero assertions on series coefficients.
pub const TOL_SERIES: f64 = 1e-12;
/// Embedded Runge-Kutta absolute and relative tolerance.
pub const ODE_ATOL: f64 = 1e-10;
pub const ODE_RTOL: f64 = 1e-10;
/// Bracket width for event location.
pub const EVENT_TOL: f64 = 1e-12;
/// Evaluations are refused where the lapse square drops below this.
pub const LAPSE_FLOOR: f64 = 1e-10;

/// `Λ = -n(n-1)/2` for an `(n+1)`-dimensional space-time.
pub fn cosmological_constant(n: usize) -> f64 {
    let n = n as f64;
    -n * (n - 1.0) / 2.0
}
