//! A complete sensing scenario: array, waveform, target, gain and noise.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ArrayGeometry, ArrayKind, TargetLocation};
use crate::signal::{ChannelModel, OfdmConfig, K0};

/// Converts decibels to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub geometry: ArrayGeometry,
    pub ofdm: OfdmConfig,
    pub target: TargetLocation,
    /// Complex round-trip gain.
    pub gain: Complex64,
    /// Noise variance per receive sample.
    pub noise_power: f64,
    /// Per-subcarrier transmit power.
    pub power: f64,
    pub model: ChannelModel,
}

impl Scenario {
    /// Reference setup: 28 GHz carrier, 10 MHz bandwidth, 5 m aperture,
    /// N = M = L = 256, gain -30 dB, target at 20 m and 45 degrees, SNR 0 dB.
    pub fn reference(kind: ArrayKind) -> Self {
        Self::build(kind, 256, 256, 256)
    }

    /// Reduced-size setup for Monte-Carlo runs: N = M = 32, L = 8, otherwise as [`Scenario::reference`].
    pub fn desk(kind: ArrayKind) -> Self {
        Self::build(kind, 32, 32, 8)
    }

    fn build(kind: ArrayKind, n: usize, m: usize, l: usize) -> Self {
        let geometry = ArrayGeometry::with_aperture(kind, n, 5.0).expect("valid reference geometry");
        let ofdm = OfdmConfig::with_bandwidth(28e9, 10e6, m, l).expect("valid reference waveform");
        Self {
            geometry,
            ofdm,
            target: TargetLocation::new(PI / 4.0, 20.0),
            gain: Complex64::new(db_to_linear(-30.0).sqrt(), 0.0),
            noise_power: 1.0,
            power: 1.0,
            model: ChannelModel::PhaseOnly,
        }
    }

    pub fn with_geometry(mut self, geometry: ArrayGeometry) -> Self {
        self.geometry = geometry;
        self
    }

    pub fn with_ofdm(mut self, ofdm: OfdmConfig) -> Self {
        self.ofdm = ofdm;
        self
    }

    pub fn with_target(mut self, target: TargetLocation) -> Self {
        self.target = target;
        self
    }

    pub fn with_model(mut self, model: ChannelModel) -> Self {
        self.model = model;
        self
    }

    /// Sets a real gain with `|beta|^2` given in dB.
    pub fn with_gain_db(mut self, gain_db: f64) -> Self {
        self.gain = Complex64::new(db_to_linear(gain_db).sqrt(), 0.0);
        self
    }

    pub fn with_gain(mut self, gain: Complex64) -> Self {
        self.gain = gain;
        self
    }

    /// Sets the noise power so that `P / sigma^2` equals `snr_db`.
    pub fn with_snr_db(mut self, snr_db: f64) -> Self {
        self.noise_power = self.power / db_to_linear(snr_db);
        self
    }

    pub fn with_noise_power(mut self, noise_power: f64) -> Self {
        self.noise_power = noise_power;
        self
    }

    pub fn snr_db(&self) -> f64 {
        linear_to_db(self.power / self.noise_power)
    }

    pub fn gain_db(&self) -> f64 {
        linear_to_db(self.gain.norm_sqr())
    }

    /// `k_0^2 |beta|^2 P / sigma^2`, the scale shared by all phase-only bounds.
    pub fn effective_snr(&self) -> f64 {
        K0 * K0 * self.gain.norm_sqr() * self.power / self.noise_power
    }

    /// Checks the parameters a bound computation relies on.
    pub fn validate_for_bounds(&self) -> Result<()> {
        if !(self.power.is_finite() && self.power > 0.0) {
            return Err(Error::InvalidConfig(format!("transmit power must be positive, got {}", self.power)));
        }
        if !(self.noise_power.is_finite() && self.noise_power > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "noise power must be positive for a bound, got {}",
                self.noise_power
            )));
        }
        if !(self.target.r.is_finite() && self.target.r > 0.0 && self.target.theta.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "target must have finite angle and positive distance, got ({}, {})",
                self.target.theta, self.target.r
            )));
        }
        if self.gain.norm_sqr() == 0.0 {
            return Err(Error::SingularInformation("zero gain carries no information".into()));
        }
        Ok(())
    }
}
