//! Registry of check names and their default tolerances.
//!
//! Control checks assert that a quantity is large; their residual is
//! `threshold - measured` and their tolerance is 0.

/// `(check name, default tolerance)`.
pub const CHECKS: &[(&str, f64)] = &[
    ("einstein.ads", 1e-8),
    ("einstein.contracted_bianchi", 1e-6),
    ("einstein.schwarzschild-ads", 1e-8),
    ("einstein.symmetries", 1e-8),
    ("fg.ads_exact", 1e-12),
    ("fg.alpha_linearity", 1e-8),
    ("fg.equations", 1e-10),
    ("fg.gauge_defect", 1e-12),
    ("fg.gauge_vs_recursion", 1e-10),
    ("fg.mass_aspect_match", 1e-10),
    ("fg.odd_below_n", 1e-12),
    ("fg.seed_independence", 1e-12),
    ("static.control", 0.0),
    ("static.cross_validation", 1e-8),
    ("static.horizon", 1e-6),
    ("static.reduced_ode", 1e-10),
    ("static.residual.ads", 1e-8),
    ("static.residual.schwarzschild-ads", 1e-8),
    ("static.shoot", 1e-7),
    ("static.shoot.residual", 1e-8),
    ("static.shoot.scaled", 1e-6),
    ("static.w.ads", 1e-10),
    ("static.w.closed_form", 1e-10),
    ("static.w.far_field", 1e-3),
    ("twist.dual_closure", 1e-7),
    ("twist.dual_closure.control", 0.0),
    ("twist.flux_identity", 1e-7),
    ("twist.helical_theta", 0.0),
    ("twist.killing.control", 0.0),
    ("twist.killing.d_phi", 1e-9),
    ("twist.killing.d_t", 1e-9),
    ("twist.killing.helical", 1e-9),
    ("twist.lichnerowicz", 1e-8),
    ("twist.static_flux", 1e-10),
    ("twist.static_theta", 1e-9),
    ("compactify.bochner", 1e-7),
    ("compactify.bochner.ads", 1e-8),
    ("compactify.bochner.control", 0.0),
    ("compactify.boundary_decay", 0.0),
    ("compactify.boundary_limit", 1e-3),
    ("compactify.conformal_scalar.ads", 1e-6),
    ("compactify.conformal_scalar.schwarzschild-ads", 1e-6),
    ("compactify.flatness", 1e-8),
    ("compactify.rigidity", 1e-9),
    ("compactify.rigidity.control", 0.0),
    ("compactify.rigidity.scaled", 1e-9),
    ("compactify.scalar_scan.ads", 1e-10),
    ("compactify.scalar_scan.schwarzschild-ads", 0.0),
    ("compactify.umbilicity", 1e-6),
    ("obata.ball_model", 1e-10),
    ("obata.energy", 1e-8),
    ("obata.first_integral", 1e-8),
    ("obata.jacobi", 1e-9),
    ("obata.phi", 1e-9),
    ("obata.phi_ratio", 1e-9),
    ("obata.radial_curvature", 1e-8),
    ("obata.rigidity", 1e-9),
    ("obata.ricci", 1e-8),
    ("obata.sin_control", 1e-9),
];

pub fn default_tolerance(check: &str) -> f64 {
    CHECKS
        .iter()
        .find(|(name, _)| *name == check)
        .map(|(_, t)| *t)
        .unwrap_or_else(|| panic!("check `{check}` is not registered"))
}

/// Whether `key` names a check or a dotted prefix of one.
pub fn is_known_prefix(key: &str) -> bool {
    CHECKS
        .iter()
        .any(|(name, _)| *name == key || name.starts_with(&format!("{key}.")))
}

/// Stream index for a check's random points (FNV-1a of its name), so each
/// check draws the same points whatever else runs.
pub fn stream(check: &str) -> u64 {
    check.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}
