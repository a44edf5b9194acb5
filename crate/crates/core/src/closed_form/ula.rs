//! Large-array closed forms for uniform linear arrays.

use std::f64::consts::PI;

use crate::closed_form::special::{broadside_deficit, phi, psi};
use crate::crb::{phase_only_bounds, CrbMethod, CrbReport, IntermediateTerms};
use crate::error::{Error, Result};
use crate::geometry::{ArrayKind, TargetLocation};
use crate::scenario::Scenario;

fn require_ula(scenario: &Scenario) -> Result<()> {
    if scenario.geometry.kind() != ArrayKind::Ula {
        return Err(Error::Domain("closed form applies to a linear array".into()));
    }
    Ok(())
}

fn require_open_angle(theta: f64) -> Result<()> {
    if !(theta.sin() > 0.0) {
        return Err(Error::Domain(format!("linear-array angle must lie in (0, pi), got {theta}")));
    }
    Ok(())
}

/// `a - b` for `a = sqrt(b^2 + h^2)`, without cancellation when `b > 0`.
fn hypot_minus(b: f64, h2: f64) -> f64 {
    let root = (b * b + h2).sqrt();
    if b > 0.0 {
        h2 / (root + b)
    } else {
        root - b
    }
}

/// Integral approximations of the gradient sums of an `N`-element ULA of aperture `D`.
///
/// Valid for `N >> 1`; `theta` must lie strictly inside `(0, pi)`.
pub fn ula_intermediates_closed(aperture: f64, loc: &TargetLocation, n_antennas: usize) -> Result<IntermediateTerms> {
    require_open_angle(loc.theta)?;
    if !(aperture > 0.0) || !(loc.r > 0.0) {
        return Err(Error::Domain("aperture and distance must be positive".into()));
    }
    let (d, r, n) = (aperture, loc.r, n_antennas as f64);
    let (s, c) = loc.theta.sin_cos();
    let h2 = r * r * s * s;
    let g1 = d * d / 4.0 - r * d * c + r * r;
    let g2 = d * d / 4.0 + r * d * c + r * r;
    let (root1, root2) = (g1.sqrt(), g2.sqrt());
    let log_ratio = (-2.0 * r * d * c / g2).ln_1p();
    let xi = ((d - 2.0 * r * c) / (2.0 * r * s)).atan() + ((d + 2.0 * r * c) / (2.0 * r * s)).atan();
    // ln[(sqrt(G1) + D/2 - r cos) / (sqrt(G2) - D/2 - r cos)], each factor formed without cancellation.
    let upper = hypot_minus(-(d / 2.0 - r * c), h2);
    let lower = hypot_minus(d / 2.0 + r * c, h2);
    let log_edges = (upper / lower).ln();

    let u_theta = r.powi(3) * n * s * s / d * (d / r + c * log_ratio + (2.0 * loc.theta).cos() / s * xi);
    let u_r = n - u_theta / (r * r);
    let c_theta = r * r * n * s / d * ((-2.0 * r * d * c / (root1 + root2)) / r + c * log_edges);
    let c_r = r * n / d * log_edges - c / (r * s) * c_theta;
    let epsilon = r * r * n * s / d * (0.5 * log_ratio + c / s * xi) - c / (r * s) * u_theta;
    Ok(IntermediateTerms::from_sums(n_antennas, u_theta, u_r, c_theta, c_r, epsilon))
}

/// Phase-only bounds of a ULA with the gradient sums replaced by their integral approximations.
pub fn ula_crb_closed(scenario: &Scenario) -> Result<CrbReport> {
    require_ula(scenario)?;
    scenario.validate_for_bounds()?;
    let geom = scenario.geometry;
    let terms = ula_intermediates_closed(geom.nominal_aperture(), &scenario.target, geom.n_antennas())?;
    let (crb_theta, crb_r) = phase_only_bounds(&terms, &scenario.ofdm, scenario.effective_snr())?;
    Ok(CrbReport { terms: Some(terms), ..CrbReport::new(crb_theta, crb_r, CrbMethod::ClosedForm) })
}

/// Broadside bounds written through `phi(D/r)` and `psi(D/r)`.
///
/// ```text
/// CRB_theta = 3 / (rho L N M r^2 phi (12 f_c^2 + B^2 - df^2))
/// CRB_r     = 3 / (rho L N M [12 f_c^2 (1 - phi - psi^2) + (B^2 - df^2)(1 - phi + psi^2)])
/// ```
pub fn ula_crb_broadside(scenario: &Scenario) -> Result<CrbReport> {
    require_ula(scenario)?;
    scenario.validate_for_bounds()?;
    if scenario.target.theta != PI / 2.0 {
        return Err(Error::Domain(format!("broadside form needs theta = pi/2, got {}", scenario.target.theta)));
    }
    let alpha = scenario.geometry.nominal_aperture() / scenario.target.r;
    let ofdm = &scenario.ofdm;
    let scale = scenario.effective_snr()
        * ofdm.n_symbols as f64
        * scenario.geometry.n_antennas() as f64
        * ofdm.n_subcarriers as f64;
    let r = scenario.target.r;
    let p = psi(alpha);
    let crb_theta = 3.0 / (scale * r * r * phi(alpha) * ofdm.angle_factor());
    let bracket = 12.0 * ofdm.carrier_hz * ofdm.carrier_hz * broadside_deficit(alpha)
        + ofdm.bandwidth_excess() * (1.0 - phi(alpha) + p * p);
    let crb_r = 3.0 / (scale * bracket);
    Ok(CrbReport::new(crb_theta, crb_r, CrbMethod::ClosedForm))
}

/// Approximate gradient sums of a fixed-spacing ULA once `N d >> r`.
pub fn ula_fixed_spacing_terms(spacing: f64, loc: &TargetLocation, n_antennas: usize) -> Result<IntermediateTerms> {
    require_open_angle(loc.theta)?;
    let (d, r, n) = (spacing, loc.r, n_antennas as f64);
    let (s, c) = loc.theta.sin_cos();
    let cos2 = (2.0 * loc.theta).cos();
    let log = (n * d / (r * s)).ln();
    let u_theta = r * r * s * s * (n + PI * r * cos2 / (d * s));
    let u_r = n * c * c - PI * r * s * cos2 / d;
    let c_theta = r * r * (2.0 * loc.theta).sin() / d * log;
    let c_r = 2.0 * r * s * s / d * log;
    let epsilon = PI * r * r * c / d - r * s * c * (n + PI * r * cos2 / (d * s));
    let mut terms = IntermediateTerms::from_sums(n_antennas, u_theta, u_r, c_theta, c_r, epsilon);
    // Leading-order forms of phi and psi.
    let reach = n - PI * r * s / d;
    terms.phi = PI * r.powi(3) * s / d * reach;
    terms.psi = 4.0 * r.powi(4) * s * s / (d * d) * reach * log * log;
    Ok(terms)
}

/// Fixed-spacing bounds before the `N -> infinity` limit.
///
/// Evaluates `(N M M2 u_r + U c_r^2) / (4 rho L (N M M2^2 phi + U M2 psi))`
/// (and its distance counterpart) with the approximate sums of
/// [`ula_fixed_spacing_terms`].
pub fn ula_fixed_spacing_prelimit(scenario: &Scenario) -> Result<CrbReport> {
    require_ula(scenario)?;
    scenario.validate_for_bounds()?;
    let geom = scenario.geometry;
    let t = ula_fixed_spacing_terms(geom.spacing(), &scenario.target, geom.n_antennas())?;
    let ofdm = &scenario.ofdm;
    let (n, m) = (geom.n_antennas() as f64, ofdm.n_subcarriers as f64);
    let m2 = ofdm.second_moment();
    let u = ofdm.moment_contrast();
    let den = 4.0 * scenario.effective_snr() * ofdm.n_symbols as f64 * (n * m * m2 * m2 * t.phi + u * m2 * t.psi);
    if !(den > 0.0) {
        return Err(Error::SingularInformation("fixed-spacing approximation has no information".into()));
    }
    let crb_theta = (n * m * m2 * t.u_r + u * t.c_r * t.c_r) / den;
    let crb_r = (n * m * m2 * t.u_theta + u * t.c_theta * t.c_theta) / den;
    Ok(CrbReport { terms: Some(t), ..CrbReport::new(crb_theta, crb_r, CrbMethod::ClosedForm) })
}
