//! Full estimator (grid then refinement) and Monte-Carlo error statistics.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::crb::{statistical_inner_products, FimOptions};
use crate::error::{Error, Result};
use crate::mle::grid::{evaluate_grid, GridSpec, RangeSpacing};
use crate::mle::objective::Objective;
use crate::mle::refine::{refine_with, EstimationResult, RefineOptions};
use crate::scenario::Scenario;
use crate::signal::{simulate_frame, ChannelModel, SignalFrame};

/// Grid, number of grid peaks to polish, and refinement settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchPlan {
    pub grid: GridSpec,
    pub candidates: usize,
    pub refine: RefineOptions,
}

impl SearchPlan {
    /// Refines only the best grid point.
    pub fn from_grid(grid: GridSpec) -> Self {
        Self { grid, candidates: 1, refine: RefineOptions::default() }
    }

    /// The 64 x 64 whole-field grid of [`GridSpec::default_for`].
    pub fn default_for(scenario: &Scenario) -> Self {
        Self::from_grid(GridSpec::default_for(&scenario.geometry, scenario.ofdm.carrier_wavelength()))
    }

    pub fn with_candidates(mut self, candidates: usize) -> Self {
        self.candidates = candidates.max(1);
        self
    }
}

/// Search window centred on a nominal target, sampled at about half a
/// mainlobe width so the true peak cannot fall between samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaOfInterest {
    /// Angular half-width of the window, in mainlobe half-widths.
    pub theta_lobes: f64,
    /// Nearest distance searched, as a fraction of the nominal distance.
    pub near_fraction: f64,
    /// Farthest distance searched, in Rayleigh distances.
    pub far_rayleigh: f64,
    /// Sample spacing in half-power lobe widths.
    pub lobe_fraction: f64,
    pub candidates: usize,
    /// Upper bound on points per axis.
    pub max_points: usize,
}

impl Default for AreaOfInterest {
    fn default() -> Self {
        Self {
            theta_lobes: 120.0,
            near_fraction: 0.5,
            far_rayleigh: 4.0,
            lobe_fraction: 0.75,
            candidates: 6,
            max_points: 512,
        }
    }
}

impl AreaOfInterest {
    /// Half-power half-widths `(angle, distance)` of the objective's mainlobe at the nominal target.
    ///
    /// Near the peak the normalized objective behaves like `1 - d^T P d`, where
    /// `P` is the Gram matrix of the mean derivatives projected off the mean
    /// itself and divided by its energy.
    pub fn lobe_half_widths(scenario: &Scenario) -> Result<(f64, f64)> {
        let ip = statistical_inner_products(scenario, scenario.model, FimOptions::default())?;
        if !(ip.signal > 0.0) {
            return Err(Error::InvalidConfig("scenario has no signal energy".into()));
        }
        let p_theta = (ip.theta - ip.theta_signal.norm_sqr() / ip.signal) / ip.signal;
        let p_r = (ip.range - ip.range_signal.norm_sqr() / ip.signal) / ip.signal;
        if !(p_theta > 0.0 && p_r > 0.0) {
            return Err(Error::SingularInformation("objective has a flat direction at the nominal target".into()));
        }
        Ok(((0.5 / p_theta).sqrt(), (0.5 / p_r).sqrt()))
    }

    pub fn plan(&self, scenario: &Scenario) -> Result<SearchPlan> {
        let (w_theta, w_r) = Self::lobe_half_widths(scenario)?;
        let t0 = scenario.target.theta;
        let r0 = scenario.target.r;
        let half = self.theta_lobes * w_theta;
        let lo = (t0 - half).max(0.05);
        let hi = (t0 + half).min(PI - 0.05);
        let rayleigh = scenario.geometry.rayleigh_distance(scenario.ofdm.carrier_wavelength());
        let r_lo = self.near_fraction * r0;
        let r_hi = (self.far_rayleigh * rayleigh).max(4.0 * r0);
        let points = |span: f64, step: f64| ((span / step).ceil() as usize + 1).clamp(2, self.max_points);
        let n_theta = points(hi - lo, 2.0 * self.lobe_fraction * w_theta);
        // Distance lobes widen like r^2, so a uniform step in 1/r keeps the sampling per lobe fixed.
        let n_r = points(1.0 / r_lo - 1.0 / r_hi, 2.0 * self.lobe_fraction * w_r / (r0 * r0));
        let grid = GridSpec::new([lo, hi], [r_lo, r_hi], n_theta, n_r, RangeSpacing::Inverse)?;
        Ok(SearchPlan { grid, candidates: self.candidates.max(1), refine: RefineOptions::default() })
    }
}

/// Grid search followed by quasi-Newton refinement of the best grid peaks.
pub fn estimate(frame: &SignalFrame, plan: &SearchPlan, model: ChannelModel) -> Result<EstimationResult> {
    let surface = evaluate_grid(frame, &plan.grid, model)?;
    let starts = if plan.candidates <= 1 { vec![surface.best()] } else { surface.local_maxima(plan.candidates) };
    let mut objective = Objective::new(frame, model);
    let mut best: Option<EstimationResult> = None;
    for start in starts {
        let res = refine_with(&mut objective, start.location(), &plan.refine)?;
        if best.is_none_or(|b| res.objective_value > b.objective_value) {
            best = Some(res);
        }
    }
    best.ok_or_else(|| Error::InvalidConfig("search grid is empty".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: u64,
    pub estimate: EstimationResult,
    pub error_theta: f64,
    pub error_r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloSummary {
    pub mse_theta: f64,
    pub mse_r: f64,
    pub converged_fraction: f64,
    pub trials: Vec<TrialResult>,
}

impl MonteCarloSummary {
    pub fn n_trials(&self) -> usize {
        self.trials.len()
    }
}

/// Synthesizes and estimates `n_trials` independent frames.
///
/// Every trial counts toward the mean-squared errors, including those whose
/// refinement did not converge. Trials run on the current rayon pool and the
/// sums are accumulated in trial order, so results do not depend on the
/// thread count.
pub fn run_monte_carlo(
    scenario: &Scenario,
    plan: &SearchPlan,
    n_trials: usize,
    seed: u64,
) -> Result<MonteCarloSummary> {
    if n_trials == 0 {
        return Err(Error::InvalidConfig("trial count must be at least 1".into()));
    }
    plan.grid.validate()?;
    let trials = (0..n_trials as u64)
        .into_par_iter()
        .map(|trial| {
            let frame = simulate_frame(scenario, seed, trial)?;
            let estimate = estimate(&frame, plan, scenario.model)?;
            Ok(TrialResult {
                trial,
                estimate,
                error_theta: estimate.theta_hat - scenario.target.theta,
                error_r: estimate.r_hat - scenario.target.r,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let q = n_trials as f64;
    let mse_theta = trials.iter().map(|t| t.error_theta * t.error_theta).sum::<f64>() / q;
    let mse_r = trials.iter().map(|t| t.error_r * t.error_r).sum::<f64>() / q;
    let converged_fraction = trials.iter().filter(|t| t.estimate.converged).count() as f64 / q;
    Ok(MonteCarloSummary { mse_theta, mse_r, converged_fraction, trials })
}
