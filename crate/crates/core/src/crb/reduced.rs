//! Reduced phase-only bound over the discrete gradient sums.

use crate::crb::report::{CrbMethod, CrbReport};
use crate::crb::terms::{intermediate_terms, IntermediateTerms};
use crate::error::{Error, Result};
use crate::scenario::Scenario;
use crate::signal::OfdmConfig;

/// Phase-only bounds from intermediate terms.
///
/// The textbook form
///
/// ```text
/// CRB_theta = (N M M2 u_r + U c_r^2) / (4 rho L M2 (N M M2 phi + U psi))
/// ```
///
/// with `U = M M2 - 2 M1^2` is evaluated after dividing out `M^2` and
/// regrouping so that carrier and bandwidth contributions are separate:
/// `N M M2 u_r + U c_r^2 = M^2 [f_c^2 (N u_r - c_r^2) + b (N u_r + c_r^2)]`
/// with `b = (B^2 - df^2)/12`. The differences `N u_r - c_r^2` and
/// `N phi - psi` come straight from the centered sums.
pub fn phase_only_bounds(terms: &IntermediateTerms, ofdm: &OfdmConfig, rho: f64) -> Result<(f64, f64)> {
    let n = terms.n_antennas as f64;
    let fc2 = ofdm.carrier_hz * ofdm.carrier_hz;
    let b = ofdm.spread();
    let num_theta = fc2 * n * terms.centered_r + b * (n * terms.u_r + terms.c_r * terms.c_r);
    let num_r = fc2 * n * terms.centered_theta + b * (n * terms.u_theta + terms.c_theta * terms.c_theta);
    let det = fc2 * terms.centered_determinant() + b * (n * terms.phi + terms.psi);
    let scale = 4.0 * rho * ofdm.n_symbols as f64 * ofdm.second_moment();
    // A determinant at roundoff level of its largest contribution is treated as zero.
    let magnitude = fc2 * n * terms.centered_theta * terms.centered_r + b * (n * terms.phi.abs() + terms.psi.abs());
    if !(det > 1e-13 * magnitude) || !det.is_finite() {
        return Err(Error::SingularInformation(
            "angle and distance are not jointly identifiable for this array".into(),
        ));
    }
    Ok((num_theta / (scale * det), num_r / (scale * det)))
}

/// Phase-only bound from the exact discrete sums of the scenario's array.
pub fn crb_phase_only(scenario: &Scenario) -> Result<CrbReport> {
    scenario.validate_for_bounds()?;
    let terms = intermediate_terms(&scenario.geometry, &scenario.target)?;
    let (crb_theta, crb_r) = phase_only_bounds(&terms, &scenario.ofdm, scenario.effective_snr())?;
    Ok(CrbReport { terms: Some(terms), ..CrbReport::new(crb_theta, crb_r, CrbMethod::DiscreteSum) })
}

/// The textbook form evaluated literally, for cross-checking the regrouped one.
pub fn phase_only_bounds_literal(terms: &IntermediateTerms, ofdm: &OfdmConfig, rho: f64) -> (f64, f64) {
    let n = terms.n_antennas as f64;
    let m = ofdm.n_subcarriers as f64;
    let m2 = ofdm.second_moment();
    let u = ofdm.moment_contrast();
    let l = ofdm.n_symbols as f64;
    let den = 4.0 * rho * l * m2 * (n * m * m2 * terms.phi + u * terms.psi);
    (
        (n * m * m2 * terms.u_r + u * terms.c_r * terms.c_r) / den,
        (n * m * m2 * terms.u_theta + u * terms.c_theta * terms.c_theta) / den,
    )
}
