//! Fisher information over `[theta, r, Re beta, Im beta]` for either channel model.
//!
//! The stacked noiseless echo is `beta u(theta, r)` with `u` collecting
//! `vec(a_m a_m^T X_m)` over subcarriers. Everything the bound needs is six
//! inner products of `u` and its two parameter derivatives. They are
//! computed either in expectation over a spatially white transmit signal or
//! for a realized transmit frame.

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::crb::report::{CrbMethod, CrbReport};
use crate::error::{Error, Result};
use crate::scenario::Scenario;
use crate::signal::{Block, ChannelModel, ReferenceDistance, ResponseProfile, K0};

/// Condition number beyond which the information matrix counts as singular.
pub const CONDITION_LIMIT: f64 = 1e12;

/// The six inner products `||u||^2`, `||u_t||^2`, `||u_r||^2`, `u_t^H u_r`, `u_t^H u`, `u_r^H u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InnerProducts {
    pub signal: f64,
    pub theta: f64,
    pub range: f64,
    pub theta_range: Complex64,
    pub theta_signal: Complex64,
    pub range_signal: Complex64,
}

impl InnerProducts {
    fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self { signal: 0.0, theta: 0.0, range: 0.0, theta_range: z, theta_signal: z, range_signal: z }
    }

    fn scale(mut self, s: f64) -> Self {
        self.signal *= s;
        self.theta *= s;
        self.range *= s;
        self.theta_range *= s;
        self.theta_signal *= s;
        self.range_signal *= s;
        self
    }
}

/// Options for the information computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FimOptions {
    pub reference: ReferenceDistance,
}

fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

fn norm_sqr(x: &[Complex64]) -> f64 {
    x.iter().map(|a| a.norm_sqr()).sum()
}

/// Which gain the derivatives hold fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum GainFrame {
    /// `beta` itself.
    Plain,
    /// `beta exp(-2 j k_c rbar)`, see [`ResponseProfile::referenced_jet_into`].
    Referenced,
}

/// Runs `f(a, da_theta, da_r)` for every subcarrier.
fn for_each_jet(
    scenario: &Scenario,
    model: ChannelModel,
    options: FimOptions,
    frame: GainFrame,
    mut f: impl FnMut(usize, &[Complex64], &[Complex64], &[Complex64]),
) -> Result<()> {
    let profile = ResponseProfile::new(&scenario.geometry, &scenario.target, model, options.reference)?;
    let n = profile.n_antennas();
    let zero = Complex64::new(0.0, 0.0);
    let (mut a, mut dt, mut dr) = (vec![zero; n], vec![zero; n], vec![zero; n]);
    for m in 0..scenario.ofdm.n_subcarriers {
        let k = scenario.ofdm.wavenumber(m);
        match frame {
            GainFrame::Plain => profile.jet_into(k, &mut a, &mut dt, &mut dr),
            GainFrame::Referenced => {
                let k_offset = K0 * scenario.ofdm.offset(m) * scenario.ofdm.subcarrier_spacing_hz;
                profile.referenced_jet_into(k, k_offset, &mut a, &mut dt, &mut dr)
            }
        }
        f(m, &a, &dt, &dr);
    }
    Ok(())
}

/// Inner products in expectation over a white transmit signal of power `P`.
///
/// With `G_i = da_i a^T + a da_i^T` and `E[X X^H] = (P L / N) I`,
/// `E[u_i^H u_j] = (P L / N) sum_m 2 [(da_i^H da_j)(a^H a) + (da_i^H a)(a^H da_j)]`.
pub fn statistical_inner_products(
    scenario: &Scenario,
    model: ChannelModel,
    options: FimOptions,
) -> Result<InnerProducts> {
    statistical_products(scenario, model, options, GainFrame::Plain)
}

fn statistical_products(
    scenario: &Scenario,
    model: ChannelModel,
    options: FimOptions,
    frame: GainFrame,
) -> Result<InnerProducts> {
    let mut acc = InnerProducts::zero();
    for_each_jet(scenario, model, options, frame, |_, a, dt, dr| {
        let aa = norm_sqr(a);
        let ta = dot(dt, a);
        let ra = dot(dr, a);
        acc.signal += aa * aa;
        acc.theta += 2.0 * (norm_sqr(dt) * aa + ta.norm_sqr());
        acc.range += 2.0 * (norm_sqr(dr) * aa + ra.norm_sqr());
        acc.theta_range += 2.0 * (dot(dt, dr) * aa + ta * ra.conj());
        acc.theta_signal += 2.0 * ta * aa;
        acc.range_signal += 2.0 * ra * aa;
    })?;
    let n = scenario.geometry.n_antennas() as f64;
    Ok(acc.scale(scenario.power * scenario.ofdm.n_symbols as f64 / n))
}

/// Inner products for a realized transmit frame.
///
/// `G_i X = da_i (a^T X) + a (da_i^T X)` is a sum of two outer products, so
/// each Frobenius inner product reduces to products of length-`N` and
/// length-`L` inner products.
pub fn conditional_inner_products(
    scenario: &Scenario,
    model: ChannelModel,
    options: FimOptions,
    transmit: &[Block],
) -> Result<InnerProducts> {
    conditional_products(scenario, model, options, transmit, GainFrame::Plain)
}

fn conditional_products(
    scenario: &Scenario,
    model: ChannelModel,
    options: FimOptions,
    transmit: &[Block],
    frame: GainFrame,
) -> Result<InnerProducts> {
    let n = scenario.geometry.n_antennas();
    let l = scenario.ofdm.n_symbols;
    if transmit.len() != scenario.ofdm.n_subcarriers || transmit.iter().any(|x| x.nrows() != n || x.ncols() != l) {
        return Err(Error::DimensionMismatch("transmit frame does not match the scenario".into()));
    }
    let project = |v: &[Complex64], x: &Block| -> Vec<Complex64> {
        (0..l).map(|c| v.iter().zip(x.column(c).iter()).map(|(p, q)| p * q).sum()).collect()
    };
    let mut acc = InnerProducts::zero();
    for_each_jet(scenario, model, options, frame, |m, a, dt, dr| {
        let x = &transmit[m];
        let (v, vt, vr) = (project(a, x), project(dt, x), project(dr, x));
        // <x1 y1^T + x2 y2^T, x3 y3^T + x4 y4^T>_F summed pairwise.
        let outer = |p: &[Complex64], q: &[Complex64], s: &[Complex64], t: &[Complex64]| dot(p, s) * dot(q, t);
        let gram = |d1: &[Complex64], w1: &[Complex64], d2: &[Complex64], w2: &[Complex64]| {
            outer(d1, &v, d2, &v) + outer(d1, &v, a, w2) + outer(a, w1, d2, &v) + outer(a, w1, a, w2)
        };
        let with_signal = |d: &[Complex64], w: &[Complex64]| outer(d, &v, a, &v) + outer(a, w, a, &v);
        acc.signal += outer(a, &v, a, &v).re;
        acc.theta += gram(dt, &vt, dt, &vt).re;
        acc.range += gram(dr, &vr, dr, &vr).re;
        acc.theta_range += gram(dt, &vt, dr, &vr);
        acc.theta_signal += with_signal(dt, &vt);
        acc.range_signal += with_signal(dr, &vr);
    })?;
    Ok(acc)
}

/// Assembles the 4x4 information matrix.
pub fn fisher_matrix(ip: &InnerProducts, gain: Complex64, noise_power: f64) -> Matrix4<f64> {
    let g2 = gain.norm_sqr();
    let zt = gain.conj() * ip.theta_signal;
    let zr = gain.conj() * ip.range_signal;
    let s = 2.0 / noise_power;
    Matrix4::new(
        g2 * ip.theta,
        g2 * ip.theta_range.re,
        zt.re,
        -zt.im,
        g2 * ip.theta_range.re,
        g2 * ip.range,
        zr.re,
        -zr.im,
        zt.re,
        zr.re,
        ip.signal,
        0.0,
        -zt.im,
        -zr.im,
        0.0,
        ip.signal,
    ) * s
}

/// Condition number of the information after symmetric diagonal scaling.
pub fn scaled_condition(fim: &Matrix4<f64>) -> f64 {
    let d = fim.diagonal();
    if d.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return f64::INFINITY;
    }
    let scaled = Matrix4::from_fn(|i, j| fim[(i, j)] / (d[i] * d[j]).sqrt());
    let eig = SymmetricEigen::new(scaled).eigenvalues;
    let max = eig.max();
    let min = eig.min();
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Bounds by eliminating the gain block (Schur complement).
pub fn schur_bounds(ip: &InnerProducts, gain: Complex64, noise_power: f64) -> Result<(f64, f64)> {
    let g2 = gain.norm_sqr();
    let uu = ip.signal;
    let tt = g2 * (ip.theta - ip.theta_signal.norm_sqr() / uu);
    let rr = g2 * (ip.range - ip.range_signal.norm_sqr() / uu);
    let tr = g2 * (ip.theta_range.re - (ip.theta_signal * ip.range_signal.conj()).re / uu);
    let det = tt * rr - tr * tr;
    if !(det > 0.0) || !det.is_finite() {
        return Err(Error::SingularInformation("reduced angle/distance information is not positive definite".into()));
    }
    let half = noise_power / 2.0;
    Ok((half * rr / det, half * tt / det))
}

/// Bounds through the `sin^2 Omega`, `sin^2 Theta` and `Q` matrix form.
pub fn angle_form_bounds(ip: &InnerProducts, gain: Complex64, noise_power: f64) -> (f64, f64) {
    let uu = ip.signal;
    let sin2_omega = 1.0 - ip.theta_signal.norm_sqr() / (ip.theta * uu);
    let sin2_theta = 1.0 - ip.range_signal.norm_sqr() / (ip.range * uu);
    // u^H (u_t^H u_r I - u_t u_r^H) u = (u_t^H u_r) ||u||^2 - (u^H u_t)(u_r^H u)
    let cross = (ip.theta_range * uu - ip.theta_signal.conj() * ip.range_signal).re / uu;
    let q11 = ip.theta * sin2_omega;
    let q22 = ip.range * sin2_theta;
    let det_q = q11 * q22 - cross * cross;
    let den = 2.0 * gain.norm_sqr() * det_q;
    (noise_power * q22 / den, noise_power * q11 / den)
}

fn to_array(m: &Matrix4<f64>) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = m[(i, j)];
        }
    }
    out
}

/// Bounds from the referenced products; the reported matrix uses the plain gain.
fn report_from(referenced: &InnerProducts, plain: &InnerProducts, scenario: &Scenario) -> Result<CrbReport> {
    let cond = scaled_condition(&fisher_matrix(referenced, scenario.gain, scenario.noise_power));
    if !(cond < CONDITION_LIMIT) {
        return Err(Error::SingularInformation(format!("information condition number {cond:.3e}")));
    }
    let (crb_theta, crb_r) = schur_bounds(referenced, scenario.gain, scenario.noise_power)?;
    let fim = fisher_matrix(plain, scenario.gain, scenario.noise_power);
    Ok(CrbReport { fim: Some(to_array(&fim)), ..CrbReport::new(crb_theta, crb_r, CrbMethod::ExactFim) })
}

/// Bounds from the full information with a white transmit covariance.
pub fn fim_crb(scenario: &Scenario, model: ChannelModel) -> Result<CrbReport> {
    fim_crb_with(scenario, model, FimOptions::default())
}

pub fn fim_crb_with(scenario: &Scenario, model: ChannelModel, options: FimOptions) -> Result<CrbReport> {
    scenario.validate_for_bounds()?;
    let referenced = statistical_products(scenario, model, options, GainFrame::Referenced)?;
    let plain = statistical_products(scenario, model, options, GainFrame::Plain)?;
    report_from(&referenced, &plain, scenario)
}

/// Bounds conditioned on a realized transmit frame.
pub fn fim_crb_conditional(
    scenario: &Scenario,
    model: ChannelModel,
    options: FimOptions,
    transmit: &[Block],
) -> Result<CrbReport> {
    scenario.validate_for_bounds()?;
    let referenced = conditional_products(scenario, model, options, transmit, GainFrame::Referenced)?;
    let plain = conditional_products(scenario, model, options, transmit, GainFrame::Plain)?;
    report_from(&referenced, &plain, scenario)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::crb::intermediate_terms;
    use crate::crb::reduced::crb_phase_only;
    use crate::geometry::{ArrayGeometry, ArrayKind, TargetLocation};
    use crate::signal::{generate_transmit_frame, OfdmConfig, K0};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn reference_scenario_matches_reduced_form() {
        for kind in [ArrayKind::Ula, ArrayKind::Uca] {
            let s = Scenario::reference(kind);
            let fim = fim_crb(&s, ChannelModel::PhaseOnly).unwrap();
            let sum = crb_phase_only(&s).unwrap();
            assert!(rel(fim.crb_theta, sum.crb_theta) < 1e-6, "{kind:?}");
            assert!(rel(fim.crb_r, sum.crb_r) < 1e-6, "{kind:?}");
        }
    }

    #[test]
    fn phase_only_products_match_moment_expressions() {
        let s = Scenario::reference(ArrayKind::Ula).with_target(TargetLocation::new(1.0, 8.0));
        let ip = statistical_inner_products(&s, ChannelModel::PhaseOnly, FimOptions::default()).unwrap();
        let t = intermediate_terms(&s.geometry, &s.target).unwrap();
        let (n, m, l) = (256.0, 256.0, 256.0);
        let m2 = s.ofdm.second_moment();
        assert!(rel(ip.signal, l * n * m) < 1e-12);
        let expected = 2.0 * K0 * K0 * l * m2 * (n * t.u_theta + t.c_theta * t.c_theta) / n;
        assert!(rel(ip.theta, expected) < 1e-10);
    }

    #[test]
    fn information_is_symmetric_psd() {
        let s = Scenario::reference(ArrayKind::Uca).with_model(ChannelModel::AmplitudePhase);
        let ip = statistical_inner_products(&s, ChannelModel::AmplitudePhase, FimOptions::default()).unwrap();
        let j = fisher_matrix(&ip, s.gain, s.noise_power);
        assert_eq!(j, j.transpose());
        assert!(SymmetricEigen::new(j).eigenvalues.min() > -1e-9 * j.norm());
        assert!(rel(j[(2, 2)], 2.0 * ip.signal / s.noise_power) < 1e-15);
    }

    #[test]
    fn angle_form_matches_schur_form() {
        for model in [ChannelModel::PhaseOnly, ChannelModel::AmplitudePhase] {
            let s = Scenario::reference(ArrayKind::Ula).with_target(TargetLocation::new(0.7, 6.0));
            let ip = statistical_inner_products(&s, model, FimOptions::default()).unwrap();
            let (a, b) = schur_bounds(&ip, s.gain, s.noise_power).unwrap();
            let (c, d) = angle_form_bounds(&ip, s.gain, s.noise_power);
            assert!(rel(a, c) < 1e-10 && rel(b, d) < 1e-10);
        }
    }

    #[test]
    fn amplitude_model_is_negligible_for_small_uca() {
        let s = Scenario::reference(ArrayKind::Uca)
            .with_geometry(ArrayGeometry::with_aperture(ArrayKind::Uca, 256, 0.5).unwrap())
            .with_target(TargetLocation::new(0.4, 100.0));
        let a = fim_crb(&s, ChannelModel::PhaseOnly).unwrap();
        let b = fim_crb(&s, ChannelModel::AmplitudePhase).unwrap();
        assert!(rel(b.crb_theta, a.crb_theta) < 1e-3);
        assert!(rel(b.crb_r, a.crb_r) < 1e-3);
    }

    #[test]
    fn conditional_information_approaches_statistical() {
        let s = Scenario::desk(ArrayKind::Ula)
            .with_geometry(ArrayGeometry::ula(4, 0.1).unwrap())
            .with_ofdm(OfdmConfig::with_bandwidth(28e9, 100e6, 16, 2048).unwrap())
            .with_target(TargetLocation::new(PI / 3.0, 2.0));
        let x = generate_transmit_frame(&s.geometry, &s.ofdm, s.power, 3, 0).unwrap();
        let cond = conditional_inner_products(&s, ChannelModel::PhaseOnly, FimOptions::default(), &x).unwrap();
        let stat = statistical_inner_products(&s, ChannelModel::PhaseOnly, FimOptions::default()).unwrap();
        assert!(rel(cond.signal, stat.signal) < 0.05);
        assert!(rel(cond.theta, stat.theta) < 0.05);
        assert!(rel(cond.range, stat.range) < 0.05);
    }

    #[test]
    fn single_antenna_information_is_singular() {
        let s = Scenario::reference(ArrayKind::Ula).with_geometry(ArrayGeometry::ula(1, 0.5).unwrap());
        assert!(matches!(fim_crb(&s, ChannelModel::PhaseOnly), Err(Error::SingularInformation(_))));
    }

    #[test]
    fn referenced_gain_gives_the_same_bounds() {
        for kind in [ArrayKind::Ula, ArrayKind::Uca] {
            for model in [ChannelModel::PhaseOnly, ChannelModel::AmplitudePhase] {
                let s = Scenario::reference(kind).with_target(TargetLocation::new(1.1, 6.0));
                let plain = statistical_inner_products(&s, model, FimOptions::default()).unwrap();
                let referenced = statistical_products(&s, model, FimOptions::default(), GainFrame::Referenced).unwrap();
                let a = schur_bounds(&plain, s.gain, s.noise_power).unwrap();
                let b = schur_bounds(&referenced, s.gain, s.noise_power).unwrap();
                assert!(rel(a.0, b.0) < 1e-6 && rel(a.1, b.1) < 1e-6, "{kind:?} {model:?}");
            }
        }
    }

    #[test]
    fn narrowband_distant_target_keeps_precision() {
        // Plain products lose about seven digits of the distance bound here.
        let s = Scenario::reference(ArrayKind::Uca)
            .with_geometry(ArrayGeometry::with_aperture(ArrayKind::Uca, 232, 2.393).unwrap())
            .with_ofdm(OfdmConfig::with_bandwidth(28e9, 1.446e6, 64, 4).unwrap())
            .with_target(TargetLocation::new(2.803, 78.083));
        let fim = fim_crb(&s, ChannelModel::PhaseOnly).unwrap();
        let reduced = crb_phase_only(&s).unwrap();
        assert!(rel(fim.crb_theta, reduced.crb_theta) < 1e-10);
        assert!(rel(fim.crb_r, reduced.crb_r) < 1e-10);
    }
}
