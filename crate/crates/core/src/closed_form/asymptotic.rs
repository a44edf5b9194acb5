//! Limits of the closed-form bounds.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ArrayKind;
use crate::scenario::Scenario;

/// Which parameter is sent to its limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AsymptoticKind {
    /// `N -> infinity` with the aperture held fixed.
    FixedApertureNLimit,
    /// `N -> infinity` with the spacing held fixed.
    FixedSpacingNLimit,
    /// `D -> infinity` with `N` held fixed.
    ApertureLimit,
    /// `r -> infinity`.
    FarField,
}

impl AsymptoticKind {
    pub const ALL: [AsymptoticKind; 4] = [
        AsymptoticKind::FixedApertureNLimit,
        AsymptoticKind::FixedSpacingNLimit,
        AsymptoticKind::ApertureLimit,
        AsymptoticKind::FarField,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AsymptoticKind::FixedApertureNLimit => "fixed-aperture",
            AsymptoticKind::FixedSpacingNLimit => "fixed-spacing",
            AsymptoticKind::ApertureLimit => "aperture",
            AsymptoticKind::FarField => "far-field",
        }
    }
}

impl std::str::FromStr for AsymptoticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown limit `{s}`")))
    }
}

/// A limit value; divergence is a tag rather than a floating-point infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Limit {
    Value(f64),
    Unbounded,
}

impl Limit {
    pub fn value(self) -> Option<f64> {
        match self {
            Limit::Value(v) => Some(v),
            Limit::Unbounded => None,
        }
    }
}

impl std::fmt::Display for Limit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Limit::Value(v) => write!(f, "{v:e}"),
            Limit::Unbounded => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub geometry: ArrayKind,
    pub kind: AsymptoticKind,
    pub crb_theta: Limit,
    pub crb_r: Limit,
}

/// `rho L N M`.
fn scale(scenario: &Scenario) -> f64 {
    scenario.effective_snr()
        * scenario.ofdm.n_symbols as f64
        * scenario.geometry.n_antennas() as f64
        * scenario.ofdm.n_subcarriers as f64
}

/// The shared far-field distance floor `3 / (2 rho L N M (B^2 - df^2))`.
pub fn far_field_distance_floor(scenario: &Scenario) -> Limit {
    let excess = scenario.ofdm.bandwidth_excess();
    if excess > 0.0 {
        Limit::Value(3.0 / (2.0 * scale(scenario) * excess))
    } else {
        Limit::Unbounded
    }
}

fn report(scenario: &Scenario, kind: AsymptoticKind, crb_theta: Limit, crb_r: Limit) -> AsymptoticReport {
    AsymptoticReport { geometry: scenario.geometry.kind(), kind, crb_theta, crb_r }
}

/// ULA limits.
///
/// * fixed aperture: both bounds vanish;
/// * fixed spacing: `3 d cos^2 / (rho L M pi r^3 g sin)` and `3 d sin / (rho L M pi r g)`;
/// * growing aperture: `3 / (rho L N M r^2 g)` at exact broadside, otherwise unbounded;
/// * far field: `36 / (rho L N M D^2 g sin^2)` and the distance floor,
///
/// with `g = 12 f_c^2 + B^2 - df^2`.
pub fn ula_asymptotic(kind: AsymptoticKind, scenario: &Scenario) -> Result<AsymptoticReport> {
    if scenario.geometry.kind() != ArrayKind::Ula {
        return Err(Error::Domain("limits apply to a linear array".into()));
    }
    scenario.validate_for_bounds()?;
    let theta = scenario.target.theta;
    let r = scenario.target.r;
    let g = scenario.ofdm.angle_factor();
    let (s, c) = theta.sin_cos();
    Ok(match kind {
        AsymptoticKind::FixedApertureNLimit => report(scenario, kind, Limit::Value(0.0), Limit::Value(0.0)),
        AsymptoticKind::FixedSpacingNLimit => {
            if !(s > 0.0) {
                return Err(Error::Domain(format!("fixed-spacing limit needs sin(theta) > 0, got theta = {theta}")));
            }
            let d = scenario.geometry.spacing();
            let per = scenario.effective_snr() * scenario.ofdm.n_symbols as f64 * scenario.ofdm.n_subcarriers as f64;
            let crb_theta = if theta == PI / 2.0 { 0.0 } else { 3.0 * d * c * c / (per * PI * r.powi(3) * g * s) };
            report(scenario, kind, Limit::Value(crb_theta), Limit::Value(3.0 * d * s / (per * PI * r * g)))
        }
        AsymptoticKind::ApertureLimit => {
            let crb_theta =
                if theta == PI / 2.0 { Limit::Value(3.0 / (scale(scenario) * r * r * g)) } else { Limit::Unbounded };
            report(scenario, kind, crb_theta, Limit::Unbounded)
        }
        AsymptoticKind::FarField => {
            let d = scenario.geometry.nominal_aperture();
            let crb_theta =
                if s == 0.0 { Limit::Unbounded } else { Limit::Value(36.0 / (scale(scenario) * d * d * g * s * s)) };
            report(scenario, kind, crb_theta, far_field_distance_floor(scenario))
        }
    })
}

/// UCA limits.
///
/// * fixed aperture and fixed spacing: both bounds vanish;
/// * growing aperture: `6 / (rho L N M r^2 g)` and `6 / (rho L N M g)`;
/// * far field: `6 / (rho L N M R^2 g)` and the distance floor.
pub fn uca_asymptotic(kind: AsymptoticKind, scenario: &Scenario) -> Result<AsymptoticReport> {
    if scenario.geometry.kind() != ArrayKind::Uca {
        return Err(Error::Domain("limits apply to a circular array".into()));
    }
    scenario.validate_for_bounds()?;
    let g = scenario.ofdm.angle_factor();
    let k = scale(scenario);
    let r = scenario.target.r;
    Ok(match kind {
        AsymptoticKind::FixedApertureNLimit | AsymptoticKind::FixedSpacingNLimit => {
            report(scenario, kind, Limit::Value(0.0), Limit::Value(0.0))
        }
        AsymptoticKind::ApertureLimit => {
            report(scenario, kind, Limit::Value(6.0 / (k * r * r * g)), Limit::Value(6.0 / (k * g)))
        }
        AsymptoticKind::FarField => {
            let radius = scenario.geometry.radius().unwrap_or_default();
            report(scenario, kind, Limit::Value(6.0 / (k * radius * radius * g)), far_field_distance_floor(scenario))
        }
    })
}

/// Limits for whichever geometry the scenario uses.
pub fn asymptotic(kind: AsymptoticKind, scenario: &Scenario) -> Result<AsymptoticReport> {
    match scenario.geometry.kind() {
        ArrayKind::Ula => ula_asymptotic(kind, scenario),
        ArrayKind::Uca => uca_asymptotic(kind, scenario),
    }
}
