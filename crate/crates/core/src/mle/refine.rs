//! Quasi-Newton polishing of a grid estimate.
//!
//! BFGS on the negated concentrated objective, with central-difference
//! gradients, a backtracking Armijo search that only accepts decreases, and
//! projection onto the parameter box after every trial step.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::TargetLocation;
use crate::mle::objective::Objective;
use crate::signal::{ChannelModel, SignalFrame};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefineOptions {
    /// Central-difference step in angle (rad).
    pub theta_step: f64,
    /// Central-difference step in distance (m).
    pub r_step: f64,
    pub max_iterations: usize,
    /// Stop once an accepted step is shorter than this.
    pub step_tolerance: f64,
    pub theta_bounds: [f64; 2],
    pub r_min: f64,
    /// Largest angle change a single trial step may make.
    pub max_theta_move: f64,
    /// Largest relative distance change a single trial step may make.
    pub max_r_move: f64,
}

impl Default for RefineOptions {
    fn default() -> Self {
        Self {
            theta_step: 1e-5,
            r_step: 1e-3,
            max_iterations: 100,
            step_tolerance: 1e-9,
            theta_bounds: [1e-6, PI - 1e-6],
            r_min: 0.01,
            max_theta_move: 0.05,
            max_r_move: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimationResult {
    pub theta_hat: f64,
    pub r_hat: f64,
    pub beta_hat: Complex64,
    pub objective_value: f64,
    pub refinement_iterations: usize,
    pub converged: bool,
}

impl EstimationResult {
    pub fn location(&self) -> TargetLocation {
        TargetLocation::new(self.theta_hat, self.r_hat)
    }
}

struct Problem<'o, 'f> {
    objective: &'o mut Objective<'f>,
    options: RefineOptions,
}

impl Problem<'_, '_> {
    fn project(&self, x: Vector2<f64>) -> Vector2<f64> {
        let [lo, hi] = self.options.theta_bounds;
        Vector2::new(x[0].clamp(lo, hi), x[1].max(self.options.r_min))
    }

    fn cost(&mut self, x: &Vector2<f64>) -> Result<f64> {
        Ok(-self.objective.evaluate(&TargetLocation::new(x[0], x[1]))?)
    }

    fn steps(&self) -> [f64; 2] {
        [self.options.theta_step, self.options.r_step]
    }

    fn gradient(&mut self, x: &Vector2<f64>) -> Result<Vector2<f64>> {
        let h = self.steps();
        let mut g = Vector2::zeros();
        for i in 0..2 {
            let mut at = |k: f64| -> Result<f64> {
                let mut y = *x;
                y[i] += k * h[i];
                self.cost(&y)
            };
            // Fourth-order stencil: the O(h^2) bias of the plain one would move the stationary point.
            g[i] = (8.0 * (at(1.0)? - at(-1.0)?) - (at(2.0)? - at(-2.0)?)) / (12.0 * h[i]);
        }
        Ok(g)
    }

    /// Inverse of the finite-difference Hessian when it is positive definite,
    /// otherwise a diagonal guess from the step sizes.
    fn initial_inverse(&mut self, x: &Vector2<f64>, f: f64) -> Result<Matrix2<f64>> {
        let h = self.steps();
        let mut hess = Matrix2::zeros();
        for i in 0..2 {
            let mut up = *x;
            let mut down = *x;
            up[i] += h[i];
            down[i] -= h[i];
            hess[(i, i)] = (self.cost(&up)? - 2.0 * f + self.cost(&down)?) / (h[i] * h[i]);
        }
        let mut corner = |a: f64, b: f64| -> Result<f64> { self.cost(&Vector2::new(x[0] + a * h[0], x[1] + b * h[1])) };
        let cross =
            (corner(1.0, 1.0)? - corner(1.0, -1.0)? - corner(-1.0, 1.0)? + corner(-1.0, -1.0)?) / (4.0 * h[0] * h[1]);
        hess[(0, 1)] = cross;
        hess[(1, 0)] = cross;
        let det = hess[(0, 0)] * hess[(1, 1)] - cross * cross;
        if hess[(0, 0)] > 0.0 && det > 0.0 {
            if let Some(inv) = hess.try_inverse() {
                return Ok(inv);
            }
        }
        Ok(self.fallback_inverse(&hess, f))
    }

    fn fallback_inverse(&self, hess: &Matrix2<f64>, f: f64) -> Matrix2<f64> {
        let h = self.steps();
        let scale = f.abs().max(f64::MIN_POSITIVE);
        let diag = |i: usize| {
            let c = hess[(i, i)].abs();
            if c.is_finite() && c > 0.0 {
                1.0 / c
            } else {
                1e4 * h[i] * h[i] / scale
            }
        };
        Matrix2::new(diag(0), 0.0, 0.0, diag(1))
    }
}

/// Locally maximizes the concentrated objective starting from `init`.
///
/// The returned objective is never below the objective at the projected
/// starting point. `converged` is false when the iteration budget runs out or
/// the line search stalls away from a stationary point.
pub fn refine(
    frame: &SignalFrame,
    init: TargetLocation,
    model: ChannelModel,
    options: &RefineOptions,
) -> Result<EstimationResult> {
    let mut objective = Objective::new(frame, model);
    refine_with(&mut objective, init, options)
}

pub(crate) fn refine_with(
    objective: &mut Objective<'_>,
    init: TargetLocation,
    options: &RefineOptions,
) -> Result<EstimationResult> {
    let mut p = Problem { objective, options: *options };
    let mut x = p.project(Vector2::new(init.theta, init.r));
    let mut f = p.cost(&x)?;
    let mut g = p.gradient(&x)?;
    let mut inv = p.initial_inverse(&x, f)?;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < options.max_iterations {
        let mut dir = -(inv * g);
        if !(g.dot(&dir) < 0.0) {
            inv = p.fallback_inverse(&Matrix2::zeros(), f);
            dir = -(inv * g);
        }
        let limit = (dir[0].abs() / options.max_theta_move).max(dir[1].abs() / (options.max_r_move * x[1]));
        if limit > 1.0 {
            dir /= limit;
        }
        let full_step = dir.norm();

        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial = p.project(x + dir * t);
            let s = trial - x;
            if s.norm() == 0.0 {
                break;
            }
            let ft = p.cost(&trial)?;
            if ft < f && ft <= f + 1e-4 * g.dot(&s).min(0.0) {
                accepted = Some((trial, ft, s));
                break;
            }
            t *= 0.5;
        }
        let Some((next, f_next, s)) = accepted else {
            // Evaluation noise dominates once the proposed move is this small.
            converged = full_step < options.step_tolerance.sqrt();
            break;
        };
        iterations += 1;
        let g_next = p.gradient(&next)?;
        let y = g_next - g;
        let sy = s.dot(&y);
        if sy > 1e-12 * s.norm() * y.norm() {
            let rho = 1.0 / sy;
            let eye = Matrix2::identity();
            inv = (eye - rho * s * y.transpose()) * inv * (eye - rho * y * s.transpose()) + rho * s * s.transpose();
        }
        x = next;
        f = f_next;
        g = g_next;
        if s.norm() < options.step_tolerance {
            converged = true;
            break;
        }
    }

    let loc = TargetLocation::new(x[0], x[1]);
    let corr = p.objective.correlation(&loc)?;
    Ok(EstimationResult {
        theta_hat: x[0],
        r_hat: x[1],
        beta_hat: corr.gain(),
        objective_value: corr.objective(),
        refinement_iterations: iterations,
        converged,
    })
}
