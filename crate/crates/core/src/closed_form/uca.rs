//! Large-array closed forms for uniform circular arrays.

use crate::closed_form::special::{uca_outside_deficit, upsilon};
use crate::crb::{CrbMethod, CrbReport};
use crate::error::{Error, Result};
use crate::geometry::ArrayKind;
use crate::scenario::Scenario;

/// Carrier and bandwidth weights of the UCA distance bound at radius ratio `R / r`.
///
/// Returns `(w_c, w_b)` such that the bracket of the distance bound is
/// `12 f_c^2 w_c + (B^2 - df^2) w_b`. For an outside target (`R < r`)
/// `w_c = 1 - R^2/(2r^2) - upsilon(r/R)^2`; for `R >= r` the `1 - R^2/(2r^2)`
/// part becomes `1/2`.
pub fn uca_distance_weights(radius: f64, r: f64) -> (f64, f64) {
    let alpha = r / radius;
    let u = upsilon(alpha);
    if radius < r {
        let base = 1.0 - radius * radius / (2.0 * r * r);
        (uca_outside_deficit(alpha), base + u * u)
    } else {
        (0.5 - u * u, 0.5 + u * u)
    }
}

/// Angle-independent UCA bounds.
///
/// ```text
/// CRB_theta = 6 / (rho L N M min(R, r)^2 (12 f_c^2 + B^2 - df^2))
/// CRB_r     = 3 / (rho L N M [12 f_c^2 w_c + (B^2 - df^2) w_b])
/// ```
/// with the weights of [`uca_distance_weights`]; `R = r` uses the inside branch.
pub fn uca_crb_closed(scenario: &Scenario) -> Result<CrbReport> {
    if scenario.geometry.kind() != ArrayKind::Uca {
        return Err(Error::Domain("closed form applies to a circular array".into()));
    }
    scenario.validate_for_bounds()?;
    let radius = scenario.geometry.radius().unwrap_or_default();
    let r = scenario.target.r;
    let ofdm = &scenario.ofdm;
    let scale = scenario.effective_snr()
        * ofdm.n_symbols as f64
        * scenario.geometry.n_antennas() as f64
        * ofdm.n_subcarriers as f64;
    let reach = radius.min(r);
    let crb_theta = 6.0 / (scale * reach * reach * ofdm.angle_factor());
    let (wc, wb) = uca_distance_weights(radius, r);
    let bracket = 12.0 * ofdm.carrier_hz * ofdm.carrier_hz * wc + ofdm.bandwidth_excess() * wb;
    if !(bracket > 0.0) {
        return Err(Error::SingularInformation("no distance information in the closed form".into()));
    }
    Ok(CrbReport::new(crb_theta, 3.0 / (scale * bracket), CrbMethod::ClosedForm))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::crb::crb_phase_only;
    use crate::geometry::{ArrayGeometry, TargetLocation};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn angle_does_not_matter() {
        let s = Scenario::reference(ArrayKind::Uca);
        let a = uca_crb_closed(&s).unwrap();
        let b = uca_crb_closed(&s.with_target(TargetLocation::new(s.target.theta + 1.234, s.target.r))).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn matches_discrete_sum_at_reference_geometry() {
        let s = Scenario::reference(ArrayKind::Uca)
            .with_geometry(ArrayGeometry::with_aperture(ArrayKind::Uca, 1024, 5.0).unwrap());
        let closed = uca_crb_closed(&s).unwrap();
        let sum = crb_phase_only(&s).unwrap();
        assert!(rel(closed.crb_theta, sum.crb_theta) < 1e-2);
        assert!(rel(closed.crb_r, sum.crb_r) < 1e-2);
    }

    #[test]
    fn inside_target_matches_discrete_sum() {
        let s = Scenario::reference(ArrayKind::Uca)
            .with_geometry(ArrayGeometry::with_aperture(ArrayKind::Uca, 1024, 40.0).unwrap())
            .with_target(TargetLocation::new(PI / 5.0, 7.0));
        let closed = uca_crb_closed(&s).unwrap();
        let sum = crb_phase_only(&s).unwrap();
        assert!(rel(closed.crb_theta, sum.crb_theta) < 1e-2);
        assert!(rel(closed.crb_r, sum.crb_r) < 1e-2);
    }

    #[test]
    fn distance_bound_is_continuous_across_the_rim() {
        let s = Scenario::reference(ArrayKind::Uca);
        let radius = s.geometry.radius().unwrap();
        let at = |r: f64| uca_crb_closed(&s.with_target(TargetLocation::new(0.3, r))).unwrap().crb_r;
        let below = at(radius * (1.0 - 1e-9));
        let above = at(radius * (1.0 + 1e-9));
        assert!(rel(below, above) < 1e-6);
    }
}
