//! Discrete sums of distance gradients over the array.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{ArrayGeometry, TargetLocation};

/// Sums of the per-antenna distance gradients `g_t = dr_n/dtheta`, `g_r = dr_n/dr`.
///
/// Besides the plain sums, the centered sums (sums of products of deviations
/// from the array mean) are kept separately: the bounds depend on them
/// through differences such as `N u_r - c_r^2` that cancel badly when formed
/// from the plain sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntermediateTerms {
    pub n_antennas: usize,
    /// `sum g_t^2`.
    pub u_theta: f64,
    /// `sum g_r^2`.
    pub u_r: f64,
    /// `sum g_t`.
    pub c_theta: f64,
    /// `sum g_r`.
    pub c_r: f64,
    /// `sum g_t g_r`.
    pub epsilon: f64,
    /// `u_theta u_r - epsilon^2`.
    pub phi: f64,
    /// `u_theta c_r^2 + u_r c_theta^2 - 2 epsilon c_theta c_r`.
    pub psi: f64,
    /// `sum (g_t - mean g_t)^2 = u_theta - c_theta^2 / N`.
    pub centered_theta: f64,
    /// `sum (g_r - mean g_r)^2 = u_r - c_r^2 / N`.
    pub centered_r: f64,
    /// `sum (g_t - mean g_t)(g_r - mean g_r) = epsilon - c_theta c_r / N`.
    pub centered_cross: f64,
}

impl IntermediateTerms {
    /// Builds the terms from plain sums; the centered sums are formed by subtraction.
    pub fn from_sums(n_antennas: usize, u_theta: f64, u_r: f64, c_theta: f64, c_r: f64, epsilon: f64) -> Self {
        let n = n_antennas as f64;
        Self {
            n_antennas,
            u_theta,
            u_r,
            c_theta,
            c_r,
            epsilon,
            phi: u_theta * u_r - epsilon * epsilon,
            psi: u_theta * c_r * c_r + u_r * c_theta * c_theta - 2.0 * epsilon * c_theta * c_r,
            centered_theta: u_theta - c_theta * c_theta / n,
            centered_r: u_r - c_r * c_r / n,
            centered_cross: epsilon - c_theta * c_r / n,
        }
    }

    /// `N phi - psi`, equal to `N` times the determinant of the centered sums.
    pub fn centered_determinant(&self) -> f64 {
        self.n_antennas as f64 * (self.centered_theta * self.centered_r - self.centered_cross * self.centered_cross)
    }
}

/// `1 - dr_n/dr`, evaluated without cancellation.
///
/// With `p` the antenna offset along the target direction and `s` the
/// offset across it, `r_n^2 - (r - p)^2 = s^2`, so
/// `1 - (r - p)/r_n = s^2 / (r_n (r_n + r - p))`.
fn radial_deficit(rn: f64, r: f64, along: f64, across: f64) -> f64 {
    let denom = rn * (rn + r - along);
    if denom > 0.0 {
        across * across / denom
    } else {
        1.0 - (r - along) / rn
    }
}

fn centered(values: &[f64], mean: f64) -> impl Iterator<Item = f64> + '_ {
    values.iter().map(move |v| v - mean)
}

/// Exact discrete sums for `geom` and `loc`.
pub fn intermediate_terms(geom: &ArrayGeometry, loc: &TargetLocation) -> Result<IntermediateTerms> {
    let n = geom.n_antennas();
    let mut g_t = Vec::with_capacity(n);
    let mut g_r = Vec::with_capacity(n);
    let mut deficit = Vec::with_capacity(n);
    for i in 0..n {
        let g = geom.distance_gradient(i, loc)?;
        let rn = geom.propagation_distance(i, loc);
        let q = geom.antenna_position(i);
        let (c, s) = (loc.theta.cos(), loc.theta.sin());
        let along = q[0] * c + q[1] * s;
        let across = -q[0] * s + q[1] * c;
        g_t.push(g.d_theta);
        g_r.push(g.d_r);
        deficit.push(radial_deficit(rn, loc.r, along, across));
    }
    let nf = n as f64;
    let u_theta: f64 = g_t.iter().map(|v| v * v).sum();
    let u_r: f64 = g_r.iter().map(|v| v * v).sum();
    let c_theta: f64 = g_t.iter().sum();
    let c_r: f64 = g_r.iter().sum();
    let epsilon: f64 = g_t.iter().zip(&g_r).map(|(a, b)| a * b).sum();

    let mean_t = c_theta / nf;
    let mean_h = deficit.iter().sum::<f64>() / nf;
    let centered_theta: f64 = centered(&g_t, mean_t).map(|v| v * v).sum();
    let centered_r: f64 = centered(&deficit, mean_h).map(|v| v * v).sum();
    // g_r - mean g_r = -(h - mean h)
    let centered_cross: f64 = -centered(&g_t, mean_t).zip(centered(&deficit, mean_h)).map(|(a, b)| a * b).sum::<f64>();

    Ok(IntermediateTerms {
        n_antennas: n,
        u_theta,
        u_r,
        c_theta,
        c_r,
        epsilon,
        phi: u_theta * u_r - epsilon * epsilon,
        psi: u_theta * c_r * c_r + u_r * c_theta * c_theta - 2.0 * epsilon * c_theta * c_r,
        centered_theta,
        centered_r,
        centered_cross,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use proptest::prelude::*;

    use super::*;
    use crate::geometry::ArrayKind;

    #[test]
    fn single_antenna_terms() {
        let geom = ArrayGeometry::ula(1, 0.5).unwrap();
        let t = intermediate_terms(&geom, &TargetLocation::new(1.0, 3.0)).unwrap();
        assert_eq!(t.u_theta, 0.0);
        assert_eq!(t.c_theta, 0.0);
        assert_eq!(t.u_r, 1.0);
        assert_eq!(t.c_r, 1.0);
        assert_eq!(t.epsilon, 0.0);
        assert_eq!(t.centered_determinant(), 0.0);
    }

    #[test]
    fn centered_sums_agree_with_subtraction_in_near_field() {
        let geom = ArrayGeometry::with_aperture(ArrayKind::Ula, 64, 5.0).unwrap();
        let t = intermediate_terms(&geom, &TargetLocation::new(PI / 4.0, 4.0)).unwrap();
        let plain = IntermediateTerms::from_sums(64, t.u_theta, t.u_r, t.c_theta, t.c_r, t.epsilon);
        assert!((plain.centered_r - t.centered_r).abs() <= 1e-9 * t.centered_r);
        assert!((plain.centered_theta - t.centered_theta).abs() <= 1e-12 * t.centered_theta);
        assert!((plain.centered_cross - t.centered_cross).abs() <= 1e-9 * t.centered_cross.abs());
        let n_phi_minus_psi = 64.0 * t.phi - t.psi;
        assert!((n_phi_minus_psi - t.centered_determinant()).abs() <= 1e-8 * n_phi_minus_psi);
    }

    #[test]
    fn ula_terms_mirror_under_reflection() {
        let geom = ArrayGeometry::ula(9, 0.2).unwrap();
        let a = intermediate_terms(&geom, &TargetLocation::new(0.8, 2.0)).unwrap();
        let b = intermediate_terms(&geom, &TargetLocation::new(PI - 0.8, 2.0)).unwrap();
        assert!((a.u_theta - b.u_theta).abs() <= 1e-13 * a.u_theta);
        assert!((a.c_theta + b.c_theta).abs() <= 1e-12 * a.c_theta.abs());
        assert!((a.epsilon + b.epsilon).abs() <= 1e-12 * a.epsilon.abs());
        assert!((a.centered_determinant() - b.centered_determinant()).abs() <= 1e-10 * a.centered_determinant());
    }

    proptest! {
        #[test]
        fn norm_identity_holds(
            uca in any::<bool>(),
            n in 1usize..200,
            spacing in 0.001f64..0.5,
            theta in 0.01f64..3.13,
            r in 0.5f64..500.0,
        ) {
            let kind = if uca { ArrayKind::Uca } else { ArrayKind::Ula };
            let geom = ArrayGeometry::new(kind, n, spacing).unwrap();
            let loc = TargetLocation::new(theta, r);
            let t = intermediate_terms(&geom, &loc).unwrap();
            let nf = n as f64;
            prop_assert!((t.u_theta / (r * r) + t.u_r - nf).abs() <= 1e-13 * nf);
            prop_assert!(t.phi >= -1e-12 * t.u_theta * t.u_r);
            prop_assert!(t.c_theta * t.c_theta <= nf * t.u_theta * (1.0 + 1e-12));
            prop_assert!(t.c_r * t.c_r <= nf * t.u_r * (1.0 + 1e-12));
            prop_assert!(t.centered_r >= 0.0 && t.centered_theta >= 0.0);
        }
    }
}
