//! Search grids over the (angle, distance) plane.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ArrayGeometry, TargetLocation};
use crate::mle::objective::Objective;
use crate::signal::{ChannelModel, SignalFrame};

/// How distance samples are placed between the range endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RangeSpacing {
    Linear,
    Logarithmic,
    /// Uniform in `1/r`, which matches how distance resolution degrades with range.
    Inverse,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub theta_range: [f64; 2],
    pub r_range: [f64; 2],
    pub n_theta: usize,
    pub n_r: usize,
    pub r_spacing: RangeSpacing,
}

impl GridSpec {
    pub fn new(
        theta_range: [f64; 2],
        r_range: [f64; 2],
        n_theta: usize,
        n_r: usize,
        r_spacing: RangeSpacing,
    ) -> Result<Self> {
        let grid = Self { theta_range, r_range, n_theta, n_r, r_spacing };
        grid.validate()?;
        Ok(grid)
    }

    /// A grid made of the single location `loc`.
    pub fn point(loc: TargetLocation) -> Self {
        Self {
            theta_range: [loc.theta, loc.theta],
            r_range: [loc.r, loc.r],
            n_theta: 1,
            n_r: 1,
            r_spacing: RangeSpacing::Linear,
        }
    }

    /// 64 angles on `[0.05, pi - 0.05]` and 64 log-spaced distances on
    /// `[0.5 m, 4 x Rayleigh distance]`.
    pub fn default_for(geometry: &ArrayGeometry, wavelength: f64) -> Self {
        let far = (4.0 * geometry.rayleigh_distance(wavelength)).max(1.0);
        Self {
            theta_range: [0.05, PI - 0.05],
            r_range: [0.5, far],
            n_theta: 64,
            n_r: 64,
            r_spacing: RangeSpacing::Logarithmic,
        }
    }

    /// Checks the ranges and counts. A one-point axis must have equal endpoints.
    pub fn validate(&self) -> Result<()> {
        let axis = |name: &str, [lo, hi]: [f64; 2], n: usize| -> Result<()> {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} range must be finite")));
            }
            match n {
                0 => Err(Error::InvalidConfig(format!("{name} grid needs at least one point"))),
                1 if lo != hi => Err(Error::InvalidConfig(format!("{name} grid with one point needs equal endpoints"))),
                1 => Ok(()),
                _ if !(hi > lo) => Err(Error::InvalidConfig(format!("{name} range [{lo}, {hi}] is degenerate"))),
                _ => Ok(()),
            }
        };
        axis("theta", self.theta_range, self.n_theta)?;
        axis("distance", self.r_range, self.n_r)?;
        if !(self.r_range[0] > 0.0) {
            return Err(Error::InvalidConfig("distance grid must stay above zero".into()));
        }
        Ok(())
    }

    pub fn thetas(&self) -> Vec<f64> {
        linspace(self.theta_range[0], self.theta_range[1], self.n_theta)
    }

    pub fn distances(&self) -> Vec<f64> {
        let [lo, hi] = self.r_range;
        let n = self.n_r;
        match self.r_spacing {
            RangeSpacing::Linear => linspace(lo, hi, n),
            RangeSpacing::Logarithmic => linspace(lo.ln(), hi.ln(), n).into_iter().map(f64::exp).collect(),
            RangeSpacing::Inverse => {
                let mut r: Vec<f64> = linspace(1.0 / hi, 1.0 / lo, n).into_iter().map(|x| 1.0 / x).collect();
                r.reverse();
                r
            }
        }
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_r
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { hi } else { lo + step * i as f64 }).collect()
}

/// A sampled grid point with its indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub theta: f64,
    pub r: f64,
    pub objective: f64,
    pub theta_index: usize,
    pub r_index: usize,
}

impl GridPoint {
    pub fn location(&self) -> TargetLocation {
        TargetLocation::new(self.theta, self.r)
    }
}

/// Objective values on the whole grid, stored angle-major.
#[derive(Debug, Clone)]
pub struct GridSurface {
    pub thetas: Vec<f64>,
    pub distances: Vec<f64>,
    pub values: Vec<f64>,
}

impl GridSurface {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.distances.len() + j]
    }

    fn point(&self, i: usize, j: usize) -> GridPoint {
        GridPoint { theta: self.thetas[i], r: self.distances[j], objective: self.at(i, j), theta_index: i, r_index: j }
    }

    /// Maximum with ties going to the smallest angle index, then the smallest distance index.
    pub fn best(&self) -> GridPoint {
        let mut best = (0, 0);
        for i in 0..self.thetas.len() {
            for j in 0..self.distances.len() {
                if self.at(i, j) > self.at(best.0, best.1) {
                    best = (i, j);
                }
            }
        }
        self.point(best.0, best.1)
    }

    /// Up to `k` local maxima over the 8-neighbourhood, largest first.
    /// Plateaus are broken by index order so each one contributes a single point.
    pub fn local_maxima(&self, k: usize) -> Vec<GridPoint> {
        let (nt, nr) = (self.thetas.len(), self.distances.len());
        let mut peaks = Vec::new();
        for i in 0..nt {
            for j in 0..nr {
                let v = self.at(i, j);
                let mut is_peak = true;
                'scan: for di in -1i64..=1 {
                    for dj in -1i64..=1 {
                        if di == 0 && dj == 0 {
                            continue;
                        }
                        let (ii, jj) = (i as i64 + di, j as i64 + dj);
                        if ii < 0 || jj < 0 || ii >= nt as i64 || jj >= nr as i64 {
                            continue;
                        }
                        let w = self.at(ii as usize, jj as usize);
                        let earlier = (ii as usize, jj as usize) < (i, j);
                        if w > v || (w == v && earlier) {
                            is_peak = false;
                            break 'scan;
                        }
                    }
                }
                if is_peak {
                    peaks.push(self.point(i, j));
                }
            }
        }
        peaks.sort_by(|a, b| {
            b.objective.total_cmp(&a.objective).then(a.theta_index.cmp(&b.theta_index)).then(a.r_index.cmp(&b.r_index))
        });
        peaks.truncate(k.max(1));
        peaks
    }
}

/// Evaluates the concentrated objective at every grid point.
pub fn evaluate_grid(frame: &SignalFrame, grid: &GridSpec, model: ChannelModel) -> Result<GridSurface> {
    grid.validate()?;
    let thetas = grid.thetas();
    let distances = grid.distances();
    let mut objective = Objective::new(frame, model);
    let mut values = Vec::with_capacity(grid.len());
    for &theta in &thetas {
        for &r in &distances {
            values.push(objective.evaluate(&TargetLocation::new(theta, r))?);
        }
    }
    Ok(GridSurface { thetas, distances, values })
}

/// Grid point that maximizes the concentrated objective.
pub fn grid_search(frame: &SignalFrame, grid: &GridSpec, model: ChannelModel) -> Result<GridPoint> {
    Ok(evaluate_grid(frame, grid, model)?.best())
}
