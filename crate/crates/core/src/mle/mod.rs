//! Concentrated maximum-likelihood estimation of target angle and distance.

pub mod grid;
pub mod objective;
pub mod refine;
pub mod search;

pub use grid::{evaluate_grid, grid_search, GridPoint, GridSpec, GridSurface, RangeSpacing};
pub use objective::{concentrated_objective, estimate_gain, Correlation, Objective};
pub use refine::{refine, EstimationResult, RefineOptions};
pub use search::{estimate, run_monte_carlo, AreaOfInterest, MonteCarloSummary, SearchPlan, TrialResult};
