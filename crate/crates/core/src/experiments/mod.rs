//! Configured sweeps, Monte-Carlo experiments, figure presets and plot scripts.

pub mod config;
pub mod dataset;
pub mod plot;
pub mod presets;
pub mod run;
pub mod selftest;

pub use config::{ArraySize, AxisSpacing, BandSize, DistanceGrid, ExperimentConfig, MethodSpec, Sweep, SweepAxis};
pub use dataset::{Dataset, Row, COLUMNS};
pub use plot::{emit_plot_script, plot_script};
pub use presets::{preset, run_preset, Preset, PresetKind, PRESET_IDS};
pub use run::{evaluate_bound, reference_bound, run_crb_sweep, run_mse_experiment, with_threads};
pub use selftest::{run_selftest, Check};
