//! Antenna-array geometry for uniform linear and uniform circular arrays.
//!
//! The origin sits at the array center. A ULA lies on the x-axis with
//! element `n` at `[(n - (N-1)/2) d, 0]`; a UCA places element `n = 1..N`
//! at angle `2 pi n / N` on a circle of radius `R = N d / (2 pi)`. Internally
//! every array is indexed `0..N`, so UCA element `i` corresponds to
//! `n = i + 1`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Array layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArrayKind {
    Ula,
    Uca,
}

impl ArrayKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ArrayKind::Ula => "ula",
            ArrayKind::Uca => "uca",
        }
    }
}

impl std::str::FromStr for ArrayKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ula" => Ok(ArrayKind::Ula),
            "uca" => Ok(ArrayKind::Uca),
            other => Err(Error::InvalidConfig(format!("unknown geometry `{other}`"))),
        }
    }
}

/// Polar target location relative to the array center.
///
/// `theta` is measured from the positive x-axis in radians, `r` in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetLocation {
    pub theta: f64,
    pub r: f64,
}

impl TargetLocation {
    pub fn new(theta: f64, r: f64) -> Self {
        Self { theta, r }
    }

    /// Cartesian coordinates `[r cos theta, r sin theta]`.
    pub fn cartesian(&self) -> [f64; 2] {
        [self.r * self.theta.cos(), self.r * self.theta.sin()]
    }
}

/// Gradient of a single propagation distance with respect to `(theta, r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceGradient {
    /// d r_n / d theta, meters per radian.
    pub d_theta: f64,
    /// d r_n / d r, dimensionless.
    pub d_r: f64,
}

/// Radiating-field region of a target relative to the Rayleigh distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldRegion {
    RadiatingNear,
    RadiatingFar,
}

/// A ULA or UCA with `n_antennas` elements and element spacing `spacing`.
///
/// For a UCA the spacing is the arc length between neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayGeometry {
    kind: ArrayKind,
    n_antennas: usize,
    spacing: f64,
}

impl ArrayGeometry {
    pub fn new(kind: ArrayKind, n_antennas: usize, spacing: f64) -> Result<Self> {
        if n_antennas == 0 {
            return Err(Error::InvalidGeometry("array needs at least one antenna".into()));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidGeometry(format!("antenna spacing must be positive, got {spacing}")));
        }
        Ok(Self { kind, n_antennas, spacing })
    }

    pub fn ula(n_antennas: usize, spacing: f64) -> Result<Self> {
        Self::new(ArrayKind::Ula, n_antennas, spacing)
    }

    pub fn uca(n_antennas: usize, spacing: f64) -> Result<Self> {
        Self::new(ArrayKind::Uca, n_antennas, spacing)
    }

    /// Builds an array whose nominal aperture equals `aperture`.
    ///
    /// ULA: `d = D / N`, so that `N d = D` (the large-array convention the
    /// closed forms use). UCA: `d = pi D / N`, i.e. `2R = D`.
    pub fn with_aperture(kind: ArrayKind, n_antennas: usize, aperture: f64) -> Result<Self> {
        if n_antennas == 0 {
            return Err(Error::InvalidGeometry("array needs at least one antenna".into()));
        }
        let spacing = match kind {
            ArrayKind::Ula => aperture / n_antennas as f64,
            ArrayKind::Uca => PI * aperture / n_antennas as f64,
        };
        Self::new(kind, n_antennas, spacing)
    }

    pub fn kind(&self) -> ArrayKind {
        self.kind
    }

    pub fn n_antennas(&self) -> usize {
        self.n_antennas
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// UCA radius `N d / (2 pi)`; `None` for a ULA.
    pub fn radius(&self) -> Option<f64> {
        match self.kind {
            ArrayKind::Ula => None,
            ArrayKind::Uca => Some(self.n_antennas as f64 * self.spacing / (2.0 * PI)),
        }
    }

    /// Exact aperture: `(N-1) d` for a ULA, `2R` for a UCA.
    pub fn aperture(&self) -> f64 {
        match self.kind {
            ArrayKind::Ula => (self.n_antennas as f64 - 1.0) * self.spacing,
            ArrayKind::Uca => 2.0 * self.radius().unwrap_or_default(),
        }
    }

    /// Large-array aperture used by the closed forms: `N d` for a ULA, `2R` for a UCA.
    pub fn nominal_aperture(&self) -> f64 {
        match self.kind {
            ArrayKind::Ula => self.n_antennas as f64 * self.spacing,
            ArrayKind::Uca => self.aperture(),
        }
    }

    /// ULA offset `chi_n = n - (N-1)/2`.
    fn chi(&self, n: usize) -> f64 {
        n as f64 - (self.n_antennas as f64 - 1.0) / 2.0
    }

    /// UCA element angle `psi = 2 pi (i+1) / N` for internal index `i`.
    fn psi(&self, n: usize) -> f64 {
        2.0 * PI * (n as f64 + 1.0) / self.n_antennas as f64
    }

    pub fn antenna_position(&self, n: usize) -> [f64; 2] {
        match self.kind {
            ArrayKind::Ula => [self.chi(n) * self.spacing, 0.0],
            ArrayKind::Uca => {
                let radius = self.radius().unwrap_or_default();
                let psi = self.psi(n);
                [radius * psi.cos(), radius * psi.sin()]
            }
        }
    }

    pub fn antenna_positions(&self) -> Vec<[f64; 2]> {
        (0..self.n_antennas).map(|n| self.antenna_position(n)).collect()
    }

    /// Exact distance `r_n` between antenna `n` and the target (law of cosines).
    pub fn propagation_distance(&self, n: usize, loc: &TargetLocation) -> f64 {
        let r = loc.r;
        match self.kind {
            ArrayKind::Ula => {
                let x = self.chi(n) * self.spacing;
                (r * r + x * x - 2.0 * r * x * loc.theta.cos()).max(0.0).sqrt()
            }
            ArrayKind::Uca => {
                let radius = self.radius().unwrap_or_default();
                let c = (loc.theta - self.psi(n)).cos();
                (r * r + radius * radius - 2.0 * r * radius * c).max(0.0).sqrt()
            }
        }
    }

    pub fn propagation_distances(&self, loc: &TargetLocation) -> Vec<f64> {
        (0..self.n_antennas).map(|n| self.propagation_distance(n, loc)).collect()
    }

    /// Gradient of `r_n` with respect to `(theta, r)`.
    pub fn distance_gradient(&self, n: usize, loc: &TargetLocation) -> Result<DistanceGradient> {
        let rn = self.propagation_distance(n, loc);
        if rn <= 0.0 {
            return Err(Error::DegenerateGeometry { antenna: n });
        }
        let r = loc.r;
        Ok(match self.kind {
            ArrayKind::Ula => {
                let x = self.chi(n) * self.spacing;
                DistanceGradient { d_theta: r * x * loc.theta.sin() / rn, d_r: (r - x * loc.theta.cos()) / rn }
            }
            ArrayKind::Uca => {
                let radius = self.radius().unwrap_or_default();
                let delta = loc.theta - self.psi(n);
                DistanceGradient { d_theta: r * radius * delta.sin() / rn, d_r: (r - radius * delta.cos()) / rn }
            }
        })
    }

    pub fn distance_gradients(&self, loc: &TargetLocation) -> Result<Vec<DistanceGradient>> {
        (0..self.n_antennas).map(|n| self.distance_gradient(n, loc)).collect()
    }

    /// Rayleigh distance `2 D^2 / lambda` using the exact aperture.
    pub fn rayleigh_distance(&self, wavelength: f64) -> f64 {
        let d = self.aperture();
        2.0 * d * d / wavelength
    }

    pub fn field_region(&self, loc: &TargetLocation, wavelength: f64) -> FieldRegion {
        if loc.r < self.rayleigh_distance(wavelength) {
            FieldRegion::RadiatingNear
        } else {
            FieldRegion::RadiatingFar
        }
    }
}
