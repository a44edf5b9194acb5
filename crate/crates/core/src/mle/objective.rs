//! Concentrated likelihood of a frame as a function of the target location.
//!
//! For fixed `(theta, r)` the least-squares gain is
//! `beta = sum_m tr(Y_m X_m^H A_m^H) / sum_m ||A_m X_m||_F^2` and substituting
//! it back leaves `|sum_m tr(Y_m X_m^H A_m^H)|^2 / sum_m ||A_m X_m||_F^2`
//! to maximize. With `A_m = a a^T`, `w = a^H Y_m` and `v = a^T X_m`, the trace
//! is `sum_l w_l conj(v_l)` and the norm is `||a||^2 ||v||^2`, so each
//! subcarrier costs `O(N L)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::TargetLocation;
use crate::signal::{ChannelModel, ReferenceDistance, ResponseProfile, SignalFrame, K0};

/// Numerator trace and denominator norm of the concentrated likelihood.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub trace: Complex64,
    pub energy: f64,
}

impl Correlation {
    pub fn objective(&self) -> f64 {
        self.trace.norm_sqr() / self.energy
    }

    pub fn gain(&self) -> Complex64 {
        self.trace / self.energy
    }
}

/// Reusable evaluator holding scratch buffers for one frame.
#[derive(Debug, Clone)]
pub struct Objective<'a> {
    frame: &'a SignalFrame,
    model: ChannelModel,
    response: Vec<Complex64>,
    step: Vec<Complex64>,
}

impl<'a> Objective<'a> {
    pub fn new(frame: &'a SignalFrame, model: ChannelModel) -> Self {
        let n = frame.n_antennas();
        let zero = Complex64::new(0.0, 0.0);
        Self { frame, model, response: vec![zero; n], step: vec![zero; n] }
    }

    pub fn frame(&self) -> &SignalFrame {
        self.frame
    }

    pub fn correlation(&mut self, loc: &TargetLocation) -> Result<Correlation> {
        let frame = self.frame;
        let n = frame.n_antennas();
        let ofdm = &frame.ofdm;
        let profile = ResponseProfile::new(&frame.geometry, loc, self.model, ReferenceDistance::Tracking)?;
        profile.response_into(ofdm.wavenumber(0), &mut self.response);
        // a_{m+1} = a_m * exp(-j dk r_n): one complex exponential per antenna per evaluation.
        let dk = K0 * ofdm.subcarrier_spacing_hz;
        for (s, &rn) in self.step.iter_mut().zip(profile.distances()) {
            *s = Complex64::from_polar(1.0, -dk * rn);
        }
        let gain_sq: f64 = profile.amplitudes().iter().map(|a| a * a).sum();
        let mut trace = Complex64::new(0.0, 0.0);
        let mut energy = 0.0;
        for m in 0..frame.n_subcarriers() {
            if m > 0 && m % 64 == 0 {
                // Resynchronise the recurrence to keep rounding from accumulating.
                profile.response_into(ofdm.wavenumber(m), &mut self.response);
            } else if m > 0 {
                for (a, s) in self.response.iter_mut().zip(&self.step) {
                    *a *= s;
                }
            }
            let x = frame.transmit[m].as_slice();
            let y = frame.receive[m].as_slice();
            let mut v_norm = 0.0;
            for (xc, yc) in x.chunks_exact(n).zip(y.chunks_exact(n)) {
                let (v, w) = project(&self.response, xc, yc);
                trace += w * v.conj();
                v_norm += v.norm_sqr();
            }
            energy += gain_sq * v_norm;
        }
        if !(energy > 0.0) {
            return Err(Error::Domain("transmit frame carries no energy toward this location".into()));
        }
        Ok(Correlation { trace, energy })
    }

    pub fn evaluate(&mut self, loc: &TargetLocation) -> Result<f64> {
        Ok(self.correlation(loc)?.objective())
    }
}

/// `(a^T x, a^H y)`, using a wider vector unit when the CPU has one. Both
/// paths perform the same operations in the same order, so results agree
/// bit for bit.
#[inline]
fn project(a: &[Complex64], x: &[Complex64], y: &[Complex64]) -> (Complex64, Complex64) {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("avx2") {
            // SAFETY: the required CPU feature was detected at runtime.
            return unsafe { project_avx2(a, x, y) };
        }
    }
    project_lanes(a, x, y)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn project_avx2(a: &[Complex64], x: &[Complex64], y: &[Complex64]) -> (Complex64, Complex64) {
    project_lanes(a, x, y)
}

/// Four independent partial sums per component so the loop vectorizes.
#[inline(always)]
fn project_lanes(a: &[Complex64], x: &[Complex64], y: &[Complex64]) -> (Complex64, Complex64) {
    const LANES: usize = 4;
    let mut acc = [[0.0f64; LANES]; 4];
    let split = a.len() - a.len() % LANES;
    for ((ac, xc), yc) in
        a[..split].chunks_exact(LANES).zip(x[..split].chunks_exact(LANES)).zip(y[..split].chunks_exact(LANES))
    {
        for k in 0..LANES {
            let (ar, ai) = (ac[k].re, ac[k].im);
            acc[0][k] += ar * xc[k].re - ai * xc[k].im;
            acc[1][k] += ar * xc[k].im + ai * xc[k].re;
            acc[2][k] += ar * yc[k].re + ai * yc[k].im;
            acc[3][k] += ar * yc[k].im - ai * yc[k].re;
        }
    }
    let mut v = Complex64::new(acc[0].iter().sum(), acc[1].iter().sum());
    let mut w = Complex64::new(acc[2].iter().sum(), acc[3].iter().sum());
    for ((ak, xk), yk) in a[split..].iter().zip(&x[split..]).zip(&y[split..]) {
        v += ak * xk;
        w += ak.conj() * yk;
    }
    (v, w)
}

/// Concentrated likelihood at `loc`; larger is better.
pub fn concentrated_objective(frame: &SignalFrame, loc: &TargetLocation, model: ChannelModel) -> Result<f64> {
    Objective::new(frame, model).evaluate(loc)
}

/// Least-squares gain at `loc`.
pub fn estimate_gain(frame: &SignalFrame, loc: &TargetLocation, model: ChannelModel) -> Result<Complex64> {
    Ok(Objective::new(frame, model).correlation(loc)?.gain())
}
