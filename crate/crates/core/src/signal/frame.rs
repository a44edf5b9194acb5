//! Transmit frame generation and echo synthesis with reproducible randomness.
//!
//! Every random draw comes from a ChaCha stream keyed by `(seed, trial,
//! purpose)` with the subcarrier index as stream id, so any trial of a
//! Monte-Carlo run can be regenerated independently of thread scheduling.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::geometry::ArrayGeometry;
use crate::scenario::Scenario;
use crate::signal::response::{ReferenceDistance, ResponseProfile};
use crate::signal::OfdmConfig;

/// One `N x L` block of complex samples for a single subcarrier.
pub type Block = DMatrix<Complex64>;

/// What a random stream is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamPurpose {
    Transmit = 1,
    Noise = 2,
}

/// ChaCha generator for `(seed, trial, purpose, subcarrier)`.
pub fn stream_rng(seed: u64, trial: u64, purpose: StreamPurpose, subcarrier: usize) -> ChaCha12Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&trial.to_le_bytes());
    key[16..24].copy_from_slice(&(purpose as u64).to_le_bytes());
    key[24..].copy_from_slice(b"nfsense\0");
    let mut rng = ChaCha12Rng::from_seed(key);
    rng.set_stream(subcarrier as u64);
    rng
}

/// Circularly symmetric complex Gaussian sample with variance `variance`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let scale = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(scale * re, scale * im)
}

/// Values of the scenario a frame was synthesized from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameSnapshot {
    pub theta: f64,
    pub r: f64,
    pub gain: Complex64,
    pub noise_power: f64,
    pub power: f64,
}

/// Transmit and receive blocks of one OFDM frame, one `N x L` block per subcarrier.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalFrame {
    pub geometry: ArrayGeometry,
    pub ofdm: OfdmConfig,
    pub transmit: Vec<Block>,
    pub receive: Vec<Block>,
    pub snapshot: FrameSnapshot,
}

impl SignalFrame {
    pub fn n_antennas(&self) -> usize {
        self.geometry.n_antennas()
    }

    pub fn n_subcarriers(&self) -> usize {
        self.transmit.len()
    }

    pub fn n_symbols(&self) -> usize {
        self.transmit.first().map_or(0, |x| x.ncols())
    }
}

/// Spatially white transmit blocks: i.i.d. complex Gaussian entries of variance `P / N`.
pub fn generate_transmit_frame(
    geom: &ArrayGeometry,
    ofdm: &OfdmConfig,
    power: f64,
    seed: u64,
    trial: u64,
) -> Result<Vec<Block>> {
    if !(power.is_finite() && power > 0.0) {
        return Err(Error::InvalidConfig(format!("transmit power must be positive, got {power}")));
    }
    let n = geom.n_antennas();
    let variance = power / n as f64;
    Ok((0..ofdm.n_subcarriers)
        .map(|m| {
            let mut rng = stream_rng(seed, trial, StreamPurpose::Transmit, m);
            Block::from_fn(n, ofdm.n_symbols, |_, _| complex_gaussian(&mut rng, variance))
        })
        .collect())
}

/// Echo `Y_m = beta a_m a_m^T X_m + Z_m` for every subcarrier.
///
/// With zero noise power the result is the noiseless echo.
pub fn synthesize_echo(transmit: Vec<Block>, scenario: &Scenario, seed: u64, trial: u64) -> Result<SignalFrame> {
    let n = scenario.geometry.n_antennas();
    let ofdm = scenario.ofdm;
    if transmit.len() != ofdm.n_subcarriers {
        return Err(Error::DimensionMismatch(format!(
            "{} transmit blocks for {} subcarriers",
            transmit.len(),
            ofdm.n_subcarriers
        )));
    }
    if let Some(bad) = transmit.iter().find(|x| x.nrows() != n || x.ncols() != ofdm.n_symbols) {
        return Err(Error::DimensionMismatch(format!(
            "transmit block is {}x{}, expected {}x{}",
            bad.nrows(),
            bad.ncols(),
            n,
            ofdm.n_symbols
        )));
    }
    if !(scenario.noise_power.is_finite() && scenario.noise_power >= 0.0) {
        return Err(Error::InvalidConfig(format!("noise power must be non-negative, got {}", scenario.noise_power)));
    }
    let profile =
        ResponseProfile::new(&scenario.geometry, &scenario.target, scenario.model, ReferenceDistance::Tracking)?;
    let mut a = vec![Complex64::new(0.0, 0.0); n];
    let receive = transmit
        .iter()
        .enumerate()
        .map(|(m, x)| {
            profile.response_into(ofdm.wavenumber(m), &mut a);
            let mut y = Block::zeros(n, ofdm.n_symbols);
            for l in 0..ofdm.n_symbols {
                let col = x.column(l);
                let v: Complex64 = a.iter().zip(col.iter()).map(|(ai, xi)| ai * xi).sum();
                let bv = scenario.gain * v;
                for i in 0..n {
                    y[(i, l)] = a[i] * bv;
                }
            }
            if scenario.noise_power > 0.0 {
                let mut rng = stream_rng(seed, trial, StreamPurpose::Noise, m);
                for z in y.iter_mut() {
                    *z += complex_gaussian(&mut rng, scenario.noise_power);
                }
            }
            y
        })
        .collect();
    Ok(SignalFrame {
        geometry: scenario.geometry,
        ofdm,
        transmit,
        receive,
        snapshot: FrameSnapshot {
            theta: scenario.target.theta,
            r: scenario.target.r,
            gain: scenario.gain,
            noise_power: scenario.noise_power,
            power: scenario.power,
        },
    })
}

/// Transmit generation followed by echo synthesis for trial `trial`.
pub fn simulate_frame(scenario: &Scenario, seed: u64, trial: u64) -> Result<SignalFrame> {
    let x = generate_transmit_frame(&scenario.geometry, &scenario.ofdm, scenario.power, seed, trial)?;
    synthesize_echo(x, scenario, seed, trial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ArrayKind;

    fn small() -> Scenario {
        Scenario::desk(ArrayKind::Ula)
            .with_geometry(ArrayGeometry::ula(4, 0.05).unwrap())
            .with_ofdm(OfdmConfig::with_bandwidth(28e9, 10e6, 8, 16).unwrap())
            .with_target(crate::geometry::TargetLocation::new(1.0, 3.0))
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let s = small();
        assert_eq!(simulate_frame(&s, 7, 3).unwrap(), simulate_frame(&s, 7, 3).unwrap());
        assert_ne!(simulate_frame(&s, 7, 3).unwrap().receive, simulate_frame(&s, 7, 4).unwrap().receive);
    }

    #[test]
    fn transmit_power_matches_expectation() {
        let geom = ArrayGeometry::ula(8, 0.01).unwrap();
        let (n, m, l) = (8.0, 32.0, 64.0);
        let ofdm = OfdmConfig::with_bandwidth(28e9, 10e6, 32, 64).unwrap();
        let x = generate_transmit_frame(&geom, &ofdm, 2.0, 11, 0).unwrap();
        let mean = x.iter().map(|b| b.norm_squared() / l).sum::<f64>() / m;
        assert!((mean - 2.0).abs() <= 2.0 * 5.0 / (n * l * m).sqrt());
    }

    #[test]
    fn transmit_covariance_is_white() {
        let geom = ArrayGeometry::ula(4, 0.01).unwrap();
        let ofdm = OfdmConfig::with_bandwidth(28e9, 10e6, 256, 256).unwrap();
        let power = 1.0;
        let x = generate_transmit_frame(&geom, &ofdm, power, 5, 0).unwrap();
        let mut cov = DMatrix::<Complex64>::zeros(4, 4);
        for b in &x {
            cov += b * b.adjoint();
        }
        cov /= Complex64::new(256.0 * 256.0, 0.0);
        let scale = (power / (4.0 * 256.0 * 256.0)).sqrt();
        for i in 0..4 {
            assert!((cov[(i, i)].re - 0.25).abs() < 5.0 * scale);
            for j in 0..4 {
                if i != j {
                    assert!(cov[(i, j)].norm() < 5.0 * scale);
                }
            }
        }
    }

    #[test]
    fn noiseless_zero_gain_echo_is_zero() {
        let s = small().with_noise_power(0.0).with_gain(Complex64::new(0.0, 0.0));
        let frame = simulate_frame(&s, 1, 0).unwrap();
        assert!(frame.receive.iter().all(|y| y.iter().all(|z| *z == Complex64::new(0.0, 0.0))));
    }

    #[test]
    fn noiseless_echo_is_rank_one() {
        let s = small().with_noise_power(0.0);
        let frame = simulate_frame(&s, 1, 0).unwrap();
        for y in &frame.receive {
            let sv = y.clone().singular_values();
            assert!(sv[1] <= 1e-12 * sv[0]);
        }
    }

    #[test]
    fn echo_is_linear_in_gain() {
        let s = small().with_noise_power(0.0);
        let one = simulate_frame(&s, 2, 0).unwrap();
        let two = simulate_frame(&s.with_gain(s.gain * 2.0), 2, 0).unwrap();
        for (a, b) in one.receive.iter().zip(&two.receive) {
            assert!((a * Complex64::new(2.0, 0.0) - b).norm() <= 1e-14 * b.norm());
        }
    }

    #[test]
    fn rejects_mismatched_blocks() {
        let s = small();
        let x = vec![Block::zeros(3, 16); 8];
        assert!(matches!(synthesize_echo(x, &s, 0, 0), Err(Error::DimensionMismatch(_))));
    }
}
