//! Fast invariant checks behind the `selftest` command.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::closed_form::{phi, psi, upsilon};
use crate::crb::{crb_phase_only, fim_crb, intermediate_terms};
use crate::error::Result;
use crate::geometry::{ArrayGeometry, ArrayKind, TargetLocation};
use crate::mle::concentrated_objective;
use crate::scenario::Scenario;
use crate::signal::{simulate_frame, ChannelModel, OfdmConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed value against its tolerance.
    pub detail: String,
}

fn check(name: &'static str, worst: f64, tolerance: f64) -> Check {
    Check { name, passed: worst <= tolerance, detail: format!("worst {worst:.3e}, tolerance {tolerance:.0e}") }
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn random_scenario(rng: &mut ChaCha12Rng) -> Result<Scenario> {
    let kind = if rng.gen_bool(0.5) { ArrayKind::Ula } else { ArrayKind::Uca };
    let n = rng.gen_range(4..=128);
    let aperture = rng.gen_range(1.0..10.0);
    let r = aperture / rng.gen_range(0.2..1.5);
    let ofdm = OfdmConfig::with_bandwidth(28e9, rng.gen_range(1e7..1e9), rng.gen_range(1..=64), 4)?;
    Ok(Scenario::reference(kind)
        .with_geometry(ArrayGeometry::with_aperture(kind, n, aperture)?)
        .with_ofdm(ofdm)
        .with_target(TargetLocation::new(rng.gen_range(0.3..PI - 0.3), r)))
}

/// Runs every check; a failure to even evaluate a check is an error.
pub fn run_selftest() -> Result<Vec<Check>> {
    let mut rng = ChaCha12Rng::seed_from_u64(20);
    let scenarios = (0..20).map(|_| random_scenario(&mut rng)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();

    let mut worst = 0.0f64;
    for s in &scenarios {
        for (n, q) in s.geometry.antenna_positions().iter().enumerate() {
            let [x, y] = s.target.cartesian();
            let direct = (x - q[0]).hypot(y - q[1]);
            worst = worst.max(relative(s.geometry.propagation_distance(n, &s.target), direct));
        }
    }
    out.push(check("distance equals Euclidean norm", worst, 1e-12));

    let mut worst = 0.0f64;
    for s in &scenarios {
        for g in s.geometry.distance_gradients(&s.target)? {
            worst = worst.max((g.d_theta.powi(2) / s.target.r.powi(2) + g.d_r.powi(2) - 1.0).abs());
        }
    }
    out.push(check("unit distance gradient", worst, 1e-12));

    let mut worst = 0.0f64;
    for s in &scenarios {
        let t = intermediate_terms(&s.geometry, &s.target)?;
        let n = s.geometry.n_antennas() as f64;
        worst = worst.max(relative(t.u_theta / s.target.r.powi(2) + t.u_r, n));
    }
    out.push(check("gradient energy sums to N", worst, 1e-12));

    let mut worst = 0.0f64;
    for s in scenarios.iter().take(8) {
        let reduced = crb_phase_only(s)?;
        let full = fim_crb(s, ChannelModel::PhaseOnly)?;
        worst = worst.max(relative(reduced.crb_theta, full.crb_theta)).max(relative(reduced.crb_r, full.crb_r));
    }
    out.push(check("reduced bound equals full information bound", worst, 1e-8));

    let mut worst = 0.0f64;
    for s in scenarios.iter().filter(|s| s.geometry.kind() == ArrayKind::Ula) {
        let mirrored = s.with_target(TargetLocation::new(PI - s.target.theta, s.target.r));
        let (a, b) = (crb_phase_only(s)?, crb_phase_only(&mirrored)?);
        worst = worst.max(relative(a.crb_theta, b.crb_theta)).max(relative(a.crb_r, b.crb_r));
    }
    out.push(check("linear-array mirror symmetry", worst, 1e-10));

    let special = [
        relative(phi(2.0), 1.0 - PI / 4.0),
        relative(psi(2.0), 1.0f64.asinh()),
        upsilon(0.0).abs(),
        relative(upsilon(1.0), 2.0 / PI),
    ];
    out.push(check("special-function values", special.into_iter().fold(0.0, f64::max), 1e-9));

    let s = Scenario::desk(ArrayKind::Ula)
        .with_geometry(ArrayGeometry::ula(8, 0.05)?)
        .with_ofdm(OfdmConfig::with_bandwidth(28e9, 100e6, 4, 4)?)
        .with_target(TargetLocation::new(1.0, 2.0));
    let frame = simulate_frame(&s, 7, 0)?;
    let mut rotated = frame.clone();
    for y in &mut rotated.receive {
        *y *= Complex64::from_polar(1.0, 2.1);
    }
    let mut worst = 0.0f64;
    for loc in [TargetLocation::new(1.0, 2.0), TargetLocation::new(0.8, 3.5), TargetLocation::new(2.2, 1.1)] {
        let a = concentrated_objective(&frame, &loc, ChannelModel::PhaseOnly)?;
        let b = concentrated_objective(&rotated, &loc, ChannelModel::PhaseOnly)?;
        worst = worst.max(relative(b, a));
    }
    out.push(check("objective ignores a common phase", worst, 1e-12));

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        let checks = run_selftest().unwrap();
        assert_eq!(checks.len(), 7);
        for c in checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
