//! Dimensionless shape functions governing the closed-form bounds.

use crate::closed_form::special::{broadside_deficit, phi, psi, upsilon};

/// `r^2 phi(D / r)`; the broadside ULA angle bound is inversely proportional to it.
pub fn xi_theta(r: f64, aperture: f64) -> f64 {
    r * r * phi(aperture / r)
}

/// Broadside ULA distance shape:
/// `12 (1 - phi - psi^2) + (B^2 - df^2)/f_c^2 (1 - phi + psi^2)` at `D / r`.
pub fn xi_r(d_over_r: f64, b_over_fc: f64, df_over_fc: f64) -> f64 {
    let p = psi(d_over_r);
    let excess = b_over_fc * b_over_fc - df_over_fc * df_over_fc;
    12.0 * broadside_deficit(d_over_r) + excess * (1.0 - phi(d_over_r) + p * p)
}

/// UCA distance shape at `R / r`, `12 w_c + (B^2 - df^2)/f_c^2 w_b`.
///
/// `R < r` uses `1 - R^2/(2 r^2)`, `R >= r` uses `1/2`, both with `upsilon(r / R)`.
pub fn xi_r_uca(r_over_dist: f64, b_over_fc: f64, df_over_fc: f64) -> f64 {
    let excess = b_over_fc * b_over_fc - df_over_fc * df_over_fc;
    if r_over_dist < 1.0 {
        xi_r_uca_outside(r_over_dist, excess)
    } else {
        xi_r_uca_inside(r_over_dist, excess)
    }
}

/// Outside-target branch, usable at any ratio (for continuity checks).
pub fn xi_r_uca_outside(r_over_dist: f64, excess: f64) -> f64 {
    let u = upsilon(1.0 / r_over_dist);
    let base = 1.0 - r_over_dist * r_over_dist / 2.0;
    let deficit = if r_over_dist < 1.0 {
        crate::closed_form::special::uca_outside_deficit(1.0 / r_over_dist)
    } else {
        base - u * u
    };
    12.0 * deficit + excess * (base + u * u)
}

/// Inside-target branch, usable at any ratio.
pub fn xi_r_uca_inside(r_over_dist: f64, excess: f64) -> f64 {
    let u = upsilon(1.0 / r_over_dist);
    12.0 * (0.5 - u * u) + excess * (0.5 + u * u)
}
