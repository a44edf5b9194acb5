//! Near-field array response vectors and their parameter derivatives.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ArrayGeometry, DistanceGradient, TargetLocation};
use crate::signal::ofdm::OfdmConfig;

/// Which part of the spherical-wave channel the response models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChannelModel {
    /// Entries `exp(-j k r_n)`.
    PhaseOnly,
    /// Entries `(r_0 / r_n) exp(-j k r_n)` with `r_0` the mean antenna distance.
    AmplitudePhase,
}

impl ChannelModel {
    /// CLI spelling: `phase` or `accurate`.
    pub fn as_str(self) -> &'static str {
        match self {
            ChannelModel::PhaseOnly => "phase",
            ChannelModel::AmplitudePhase => "accurate",
        }
    }
}

impl std::str::FromStr for ChannelModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "phase" | "phase-only" | "phase_only" => Ok(ChannelModel::PhaseOnly),
            "accurate" | "amplitude" | "amplitude-phase" | "amplitude_phase" => Ok(ChannelModel::AmplitudePhase),
            other => Err(Error::InvalidConfig(format!("unknown channel model `{other}`"))),
        }
    }
}

/// How the reference distance `r_0` of the amplitude model is treated when differentiating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ReferenceDistance {
    /// `r_0` moves with the target; its gradient is the mean of the antenna gradients.
    #[default]
    Tracking,
    /// `r_0` is held constant.
    Frozen,
}

/// Per-antenna distances, amplitudes and gradients for one target location.
///
/// Evaluating a subcarrier only needs the wavenumber, so one profile serves
/// every subcarrier of a frame.
#[derive(Debug, Clone)]
pub struct ResponseProfile {
    distances: Vec<f64>,
    amplitudes: Vec<f64>,
    gradients: Vec<DistanceGradient>,
    amp_d_theta: Vec<f64>,
    amp_d_r: Vec<f64>,
    mean_gradient: DistanceGradient,
    centered_gradients: Vec<DistanceGradient>,
}

impl ResponseProfile {
    pub fn new(
        geom: &ArrayGeometry,
        loc: &TargetLocation,
        model: ChannelModel,
        reference: ReferenceDistance,
    ) -> Result<Self> {
        let distances = geom.propagation_distances(loc);
        if let Some(n) = distances.iter().position(|&d| d <= 0.0) {
            return Err(Error::DegenerateGeometry { antenna: n });
        }
        let gradients = geom.distance_gradients(loc)?;
        let n = distances.len();
        let (amplitudes, amp_d_theta, amp_d_r) = match model {
            ChannelModel::PhaseOnly => (vec![1.0; n], vec![0.0; n], vec![0.0; n]),
            ChannelModel::AmplitudePhase => {
                let r0 = distances.iter().sum::<f64>() / n as f64;
                let (r0_theta, r0_r) = match reference {
                    ReferenceDistance::Tracking => (
                        gradients.iter().map(|g| g.d_theta).sum::<f64>() / n as f64,
                        gradients.iter().map(|g| g.d_r).sum::<f64>() / n as f64,
                    ),
                    ReferenceDistance::Frozen => (0.0, 0.0),
                };
                let mut amp = Vec::with_capacity(n);
                let mut amp_t = Vec::with_capacity(n);
                let mut amp_r = Vec::with_capacity(n);
                for (&rn, g) in distances.iter().zip(&gradients) {
                    amp.push(r0 / rn);
                    amp_t.push((r0_theta * rn - r0 * g.d_theta) / (rn * rn));
                    amp_r.push((r0_r * rn - r0 * g.d_r) / (rn * rn));
                }
                (amp, amp_t, amp_r)
            }
        };
        let inv = 1.0 / n as f64;
        let mean_gradient = DistanceGradient {
            d_theta: gradients.iter().map(|g| g.d_theta).sum::<f64>() * inv,
            d_r: gradients.iter().map(|g| g.d_r).sum::<f64>() * inv,
        };
        let centered_gradients = gradients
            .iter()
            .map(|g| DistanceGradient { d_theta: g.d_theta - mean_gradient.d_theta, d_r: g.d_r - mean_gradient.d_r })
            .collect();
        Ok(Self { distances, amplitudes, gradients, amp_d_theta, amp_d_r, mean_gradient, centered_gradients })
    }

    pub fn n_antennas(&self) -> usize {
        self.distances.len()
    }

    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn gradients(&self) -> &[DistanceGradient] {
        &self.gradients
    }

    /// Writes the response at wavenumber `k` into `out`.
    pub fn response_into(&self, k: f64, out: &mut [Complex64]) {
        for ((o, &rn), &amp) in out.iter_mut().zip(&self.distances).zip(&self.amplitudes) {
            *o = Complex64::from_polar(amp, -k * rn);
        }
    }

    pub fn response(&self, k: f64) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.n_antennas()];
        self.response_into(k, &mut out);
        out
    }

    /// Writes the response and its derivatives with respect to `theta` and `r`.
    pub fn jet_into(&self, k: f64, a: &mut [Complex64], d_theta: &mut [Complex64], d_r: &mut [Complex64]) {
        for n in 0..self.n_antennas() {
            let phase = Complex64::from_polar(1.0, -k * self.distances[n]);
            let amp = self.amplitudes[n];
            let g = self.gradients[n];
            a[n] = phase * amp;
            d_theta[n] = phase * Complex64::new(self.amp_d_theta[n], -k * amp * g.d_theta);
            d_r[n] = phase * Complex64::new(self.amp_d_r[n], -k * amp * g.d_r);
        }
    }
}

impl ResponseProfile {
    /// Like [`ResponseProfile::jet_into`], with the derivatives taken of
    /// `exp(j k_ref rbar) a` where `rbar` is the mean antenna distance.
    ///
    /// The unit factor itself is dropped, so only the derivatives change: their
    /// phase slope becomes `k (g_n - gbar) + (k - k_ref) gbar` instead of
    /// `k g_n`. Moving `exp(-2 j k_ref rbar)` into the gain is a change of
    /// nuisance parameter that leaves the angle and distance bounds unchanged,
    /// but the large slope shared by all antennas never enters the sums.
    /// `k_offset = k - k_ref` is passed in so it is not formed by subtraction.
    pub fn referenced_jet_into(
        &self,
        k: f64,
        k_offset: f64,
        a: &mut [Complex64],
        d_theta: &mut [Complex64],
        d_r: &mut [Complex64],
    ) {
        let gbar = self.mean_gradient;
        for n in 0..self.n_antennas() {
            let phase = Complex64::from_polar(1.0, -k * self.distances[n]);
            let amp = self.amplitudes[n];
            let c = self.centered_gradients[n];
            let slope_t = k * c.d_theta + k_offset * gbar.d_theta;
            let slope_r = k * c.d_r + k_offset * gbar.d_r;
            a[n] = phase * amp;
            d_theta[n] = phase * Complex64::new(self.amp_d_theta[n], -slope_t * amp);
            d_r[n] = phase * Complex64::new(self.amp_d_r[n], -slope_r * amp);
        }
    }
}

/// Response vector of subcarrier `m` at `loc`.
pub fn array_response(
    geom: &ArrayGeometry,
    ofdm: &OfdmConfig,
    m: usize,
    loc: &TargetLocation,
    model: ChannelModel,
) -> Result<Vec<Complex64>> {
    if m >= ofdm.n_subcarriers {
        return Err(Error::InvalidConfig(format!(
            "subcarrier {m} out of range for {} subcarriers",
            ofdm.n_subcarriers
        )));
    }
    let profile = ResponseProfile::new(geom, loc, model, ReferenceDistance::Tracking)?;
    Ok(profile.response(ofdm.wavenumber(m)))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::geometry::ArrayKind;

    fn ofdm() -> OfdmConfig {
        OfdmConfig::with_bandwidth(28e9, 100e6, 5, 1).unwrap()
    }

    #[test]
    fn phase_only_entries_are_unit_modulus() {
        let geom = ArrayGeometry::ula(16, 0.01).unwrap();
        let a = array_response(&geom, &ofdm(), 1, &TargetLocation::new(1.0, 3.0), ChannelModel::PhaseOnly).unwrap();
        for z in &a {
            assert!((z.norm() - 1.0).abs() < 1e-15);
        }
        let power: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        assert!((power - 16.0).abs() < 1e-12);
    }

    #[test]
    fn amplitude_model_at_uca_center_matches_phase_only() {
        let geom = ArrayGeometry::uca(12, 0.1).unwrap();
        let loc = TargetLocation::new(0.3, 0.0);
        let amp = array_response(&geom, &ofdm(), 2, &loc, ChannelModel::AmplitudePhase).unwrap();
        let phase = array_response(&geom, &ofdm(), 2, &loc, ChannelModel::PhaseOnly).unwrap();
        for (x, y) in amp.iter().zip(&phase) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn far_field_matches_plane_wave_phases() {
        let n = 8;
        let d = 0.005;
        let geom = ArrayGeometry::ula(n, d).unwrap();
        let cfg = ofdm();
        let r = 1e6 * geom.aperture();
        let theta = 1.2;
        let loc = TargetLocation::new(theta, r);
        let profile = ResponseProfile::new(&geom, &loc, ChannelModel::PhaseOnly, ReferenceDistance::Tracking).unwrap();
        let k = cfg.wavenumber(4);
        for (i, &rn) in profile.distances().iter().enumerate() {
            let chi = i as f64 - (n as f64 - 1.0) / 2.0;
            let plane = r - chi * d * theta.cos();
            // Compare the phase difference directly, avoiding wrapping of the large absolute phase.
            assert!((k * (rn - plane)).abs() < 1e-3);
        }
    }

    #[test]
    fn jet_matches_finite_differences() {
        for kind in [ArrayKind::Ula, ArrayKind::Uca] {
            for model in [ChannelModel::PhaseOnly, ChannelModel::AmplitudePhase] {
                let geom = ArrayGeometry::new(kind, 6, 0.02).unwrap();
                let loc = TargetLocation::new(PI / 3.0, 0.4);
                let k = 2.0 * PI / 0.05;
                let profile = ResponseProfile::new(&geom, &loc, model, ReferenceDistance::Tracking).unwrap();
                let zero = Complex64::new(0.0, 0.0);
                let (mut a, mut dt, mut dr) = (vec![zero; 6], vec![zero; 6], vec![zero; 6]);
                profile.jet_into(k, &mut a, &mut dt, &mut dr);
                let at = |t: f64, r: f64| {
                    ResponseProfile::new(&geom, &TargetLocation::new(t, r), model, ReferenceDistance::Tracking)
                        .unwrap()
                        .response(k)
                };
                let h = 1e-6;
                let plus_t = at(loc.theta + h, loc.r);
                let minus_t = at(loc.theta - h, loc.r);
                let plus_r = at(loc.theta, loc.r + h);
                let minus_r = at(loc.theta, loc.r - h);
                for n in 0..6 {
                    let fd_t = (plus_t[n] - minus_t[n]) / (2.0 * h);
                    let fd_r = (plus_r[n] - minus_r[n]) / (2.0 * h);
                    assert!((fd_t - dt[n]).norm() <= 1e-6 * dt[n].norm().max(1.0));
                    assert!((fd_r - dr[n]).norm() <= 1e-6 * dr[n].norm().max(1.0));
                }
            }
        }
    }

    #[test]
    fn parses_model_names() {
        assert_eq!("phase".parse::<ChannelModel>().unwrap(), ChannelModel::PhaseOnly);
        assert_eq!("accurate".parse::<ChannelModel>().unwrap(), ChannelModel::AmplitudePhase);
        assert!("nope".parse::<ChannelModel>().is_err());
    }
}
