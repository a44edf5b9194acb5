use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Wavenumber per hertz, `2 pi / c`.
pub const K0: f64 = 2.0 * PI / SPEED_OF_LIGHT;

/// Post-DFT OFDM parameters: `M` subcarriers spaced `delta_f` around `f_c`, `L` symbols.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OfdmConfig {
    pub carrier_hz: f64,
    pub n_subcarriers: usize,
    pub subcarrier_spacing_hz: f64,
    pub n_symbols: usize,
}

impl OfdmConfig {
    pub fn new(carrier_hz: f64, n_subcarriers: usize, subcarrier_spacing_hz: f64, n_symbols: usize) -> Result<Self> {
        let cfg = Self { carrier_hz, n_subcarriers, subcarrier_spacing_hz, n_symbols };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Config with total bandwidth `B = M * delta_f`.
    pub fn with_bandwidth(carrier_hz: f64, bandwidth_hz: f64, n_subcarriers: usize, n_symbols: usize) -> Result<Self> {
        if n_subcarriers == 0 {
            return Err(Error::InvalidConfig("need at least one subcarrier".into()));
        }
        Self::new(carrier_hz, n_subcarriers, bandwidth_hz / n_subcarriers as f64, n_symbols)
    }

    fn validate(&self) -> Result<()> {
        if self.n_subcarriers == 0 {
            return Err(Error::InvalidConfig("need at least one subcarrier".into()));
        }
        if self.n_symbols == 0 {
            return Err(Error::InvalidConfig("need at least one OFDM symbol".into()));
        }
        if !(self.carrier_hz.is_finite() && self.carrier_hz > 0.0) {
            return Err(Error::InvalidConfig(format!("carrier frequency must be positive, got {}", self.carrier_hz)));
        }
        if !(self.subcarrier_spacing_hz.is_finite() && self.subcarrier_spacing_hz > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "subcarrier spacing must be positive, got {}",
                self.subcarrier_spacing_hz
            )));
        }
        if self.frequency(0) <= 0.0 {
            return Err(Error::InvalidConfig("lowest subcarrier frequency must be positive".into()));
        }
        Ok(())
    }

    pub fn bandwidth_hz(&self) -> f64 {
        self.n_subcarriers as f64 * self.subcarrier_spacing_hz
    }

    /// Offset index `(2m - M + 1) / 2` of subcarrier `m`, in units of the spacing.
    pub fn offset(&self, m: usize) -> f64 {
        (2.0 * m as f64 - self.n_subcarriers as f64 + 1.0) / 2.0
    }

    pub fn frequency(&self, m: usize) -> f64 {
        self.carrier_hz + self.offset(m) * self.subcarrier_spacing_hz
    }

    pub fn wavenumber(&self, m: usize) -> f64 {
        K0 * self.frequency(m)
    }

    pub fn carrier_wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }

    /// First frequency moment `sum_m f_m = M f_c`.
    pub fn first_moment(&self) -> f64 {
        self.n_subcarriers as f64 * self.carrier_hz
    }

    /// Second frequency moment `sum_m f_m^2 = M f_c^2 + M (M^2 - 1) delta_f^2 / 12`.
    pub fn second_moment(&self) -> f64 {
        let m = self.n_subcarriers as f64;
        m * (self.carrier_hz * self.carrier_hz + self.spread())
    }

    /// `(B^2 - delta_f^2) / 12`, the mean squared subcarrier offset in Hz^2.
    pub fn spread(&self) -> f64 {
        let m = self.n_subcarriers as f64;
        (m * m - 1.0) * self.subcarrier_spacing_hz * self.subcarrier_spacing_hz / 12.0
    }

    /// `B^2 - delta_f^2`, exact in terms of `M` and `delta_f`.
    pub fn bandwidth_excess(&self) -> f64 {
        12.0 * self.spread()
    }

    /// `12 f_c^2 + B^2 - delta_f^2`, the factor shared by all angle bounds.
    pub fn angle_factor(&self) -> f64 {
        12.0 * (self.carrier_hz * self.carrier_hz + self.spread())
    }

    /// `M * M2 - 2 * M1^2`, evaluated as `M^2 [(B^2 - delta_f^2)/12 - f_c^2]`.
    pub fn moment_contrast(&self) -> f64 {
        let m = self.n_subcarriers as f64;
        m * m * (self.spread() - self.carrier_hz * self.carrier_hz)
    }
}
