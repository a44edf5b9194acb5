//! Closed-form and asymptotic bounds for large arrays.

pub mod asymptotic;
pub mod special;
pub mod uca;
pub mod ula;
pub mod xi;

pub use asymptotic::{
    asymptotic, far_field_distance_floor, uca_asymptotic, ula_asymptotic, AsymptoticKind, AsymptoticReport, Limit,
};
pub use special::{broadside_deficit, phi, psi, upsilon, GaussLegendre};
pub use uca::uca_crb_closed;
pub use ula::{ula_crb_broadside, ula_crb_closed, ula_fixed_spacing_prelimit, ula_intermediates_closed};
pub use xi::{xi_r, xi_r_uca, xi_theta};

use crate::crb::CrbReport;
use crate::error::Result;
use crate::geometry::ArrayKind;
use crate::scenario::Scenario;

/// Closed-form bound for whichever geometry the scenario uses.
pub fn closed_form_crb(scenario: &Scenario) -> Result<CrbReport> {
    match scenario.geometry.kind() {
        ArrayKind::Ula => ula_crb_closed(scenario),
        ArrayKind::Uca => uca_crb_closed(scenario),
    }
}
