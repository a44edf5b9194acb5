//! Ready-made experiments, one per published figure.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::experiments::config::ExperimentConfig;
use crate::experiments::dataset::Dataset;
use crate::experiments::run::{run_crb_sweep, run_mse_experiment};
use crate::signal::SPEED_OF_LIGHT;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetKind {
    /// Bounds only.
    Bounds,
    /// Monte-Carlo estimation plus bounds.
    MeanSquaredError,
}

#[derive(Debug, Clone)]
pub struct Preset {
    pub id: &'static str,
    pub title: &'static str,
    pub kind: PresetKind,
    /// Runs whose rows are concatenated in order.
    pub runs: Vec<ExperimentConfig>,
}

pub const PRESET_IDS: [&str; 9] = ["fig4", "fig4-noiseless", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11"];

const CARRIER_HZ: f64 = 28e9;

fn wavelength() -> f64 {
    SPEED_OF_LIGHT / CARRIER_HZ
}

fn base(lines: &str) -> ExperimentConfig {
    ExperimentConfig::from_text(lines).expect("preset text is valid")
}

fn angles() -> [f64; 2] {
    [PI / 4.0, PI / 2.0]
}

/// Looks up a preset by figure id.
pub fn preset(id: &str) -> Result<Preset> {
    let p = match id {
        "fig4" => Preset {
            id: "fig4",
            title: "Estimator MSE against the bounds versus SNR (reduced size)",
            kind: PresetKind::MeanSquaredError,
            runs: vec![base(
                "n_antennas = 32\nn_subcarriers = 32\nn_symbols = 8\ntrials = 200\nseed = 1\n\
                 sweep = snr_db\nsweep_start = -30\nsweep_stop = 30\nsweep_points = 13\nmethod = sum, closed\n",
            )],
        },
        "fig4-noiseless" => Preset {
            id: "fig4-noiseless",
            title: "Noiseless estimator smoke run",
            kind: PresetKind::MeanSquaredError,
            runs: vec![base("n_antennas = 32\nn_subcarriers = 32\nn_symbols = 8\ntrials = 3\nseed = 1\nnoise_power = 0\nmethod = sum\n")],
        },
        "fig5" => {
            let sweep = "sweep = n_antennas\nsweep_start = 8\nsweep_stop = 4096\nsweep_points = 19\nsweep_spacing = log\n\
                         model = phase, accurate\n";
            let mut runs = Vec::new();
            for theta in angles() {
                let common = format!("{sweep}theta_rad = {theta}\n");
                runs.push(base(&format!("{common}aperture_m = 5\nmethod = fim, sum, closed, asymptotic:fixed-aperture\n")));
                runs.push(base(&format!(
                    "{common}spacing_m = {}\nmatched_spacing = true\nmethod = fim, sum, closed, asymptotic:fixed-spacing\n",
                    wavelength() / 2.0
                )));
            }
            Preset { id: "fig5", title: "Bounds versus number of antennas, fixed aperture and fixed spacing", kind: PresetKind::Bounds, runs }
        }
        "fig6" => Preset {
            id: "fig6",
            title: "Bounds versus aperture at a fixed number of antennas",
            kind: PresetKind::Bounds,
            runs: angles()
                .iter()
                .map(|theta| {
                    base(&format!(
                        "theta_rad = {theta}\nsweep = aperture\nsweep_start = 0.05\nsweep_stop = 10000\nsweep_points = 43\n\
                         sweep_spacing = log\nmethod = sum, closed, asymptotic:aperture\n"
                    ))
                })
                .collect(),
        },
        "fig7" => {
            let sweep = "sweep = n_subcarriers\nsweep_start = 1\nsweep_stop = 4096\nsweep_points = 25\nsweep_spacing = log\nmethod = sum, closed\n";
            Preset {
                id: "fig7",
                title: "Bounds versus number of subcarriers, fixed bandwidth and fixed subcarrier spacing",
                kind: PresetKind::Bounds,
                runs: vec![
                    base(&format!("{sweep}bandwidth_hz = 10e6\n")),
                    base(&format!("{sweep}subcarrier_spacing_hz = {}\n", 10e6 / 256.0)),
                ],
            }
        }
        "fig8" => Preset {
            id: "fig8",
            title: "Bounds versus bandwidth at a fixed number of subcarriers",
            kind: PresetKind::Bounds,
            runs: vec![base(
                "sweep = bandwidth\nsweep_start = 1e6\nsweep_stop = 1e10\nsweep_points = 41\nsweep_spacing = log\nmethod = sum, closed\n",
            )],
        },
        "fig9" => {
            let sweep = "sweep = aperture\nsweep_start = 0.2\nsweep_stop = 2000\nsweep_points = 41\nsweep_spacing = log\nmethod = sum, closed\n";
            Preset {
                id: "fig9",
                title: "Distance bound versus aperture-to-distance ratio for several bandwidth-to-carrier ratios",
                kind: PresetKind::Bounds,
                runs: FIG9_BANDWIDTH_RATIOS
                    .iter()
                    .map(|ratio| base(&format!("{sweep}bandwidth_hz = {}\n", ratio * CARRIER_HZ)))
                    .collect(),
            }
        }
        "fig10" => {
            let sweep = "aperture_m = 2\nsweep = distance\nsweep_start = 1.5\nsweep_stop = 10000\nsweep_points = 41\n\
                         sweep_spacing = log\nmethod = sum, closed, asymptotic:far-field\n";
            Preset {
                id: "fig10",
                title: "Bounds versus target distance for several bandwidths",
                kind: PresetKind::Bounds,
                runs: FIG10_BANDWIDTHS_HZ.iter().map(|b| base(&format!("{sweep}bandwidth_hz = {b}\n"))).collect(),
            }
        }
        "fig11" => Preset {
            id: "fig11",
            title: "Bounds over a polar grid of target locations",
            kind: PresetKind::Bounds,
            runs: vec![base(&format!(
                "sweep = location_grid\nsweep_start = 0.05\nsweep_stop = {}\nsweep_points = 64\n\
                 grid_r_start = 2\ngrid_r_stop = 60\ngrid_r_points = 64\nmethod = sum\n",
                PI - 0.05
            ))],
        },
        other => {
            return Err(Error::InvalidConfig(format!("unknown figure `{other}` (expected one of {})", PRESET_IDS.join(", "))))
        }
    };
    Ok(p)
}

/// Bandwidth-to-carrier ratios of the fig9 series.
pub const FIG9_BANDWIDTH_RATIOS: [f64; 4] = [1e-3, 1e-2, 0.1, 0.5];

/// Bandwidths of the fig10 series.
pub const FIG10_BANDWIDTHS_HZ: [f64; 3] = [10e6, 100e6, 1e9];

impl Preset {
    /// Applies `key = value` overrides to every run, e.g. a smaller trial count.
    pub fn with_overrides(mut self, pairs: &[(String, String, String)]) -> Result<Self> {
        for run in &mut self.runs {
            run.merge_pairs(pairs.iter().map(|(w, k, v)| (w.as_str(), k.as_str(), v.as_str())))?;
        }
        Ok(self)
    }

    pub fn run(&self) -> Result<Dataset> {
        let mut out = Dataset::default();
        for cfg in &self.runs {
            out.extend(match self.kind {
                PresetKind::Bounds => run_crb_sweep(cfg)?,
                PresetKind::MeanSquaredError => run_mse_experiment(cfg)?,
            });
        }
        Ok(out)
    }
}

/// Runs the preset for `id` with its built-in settings.
pub fn run_preset(id: &str) -> Result<Dataset> {
    preset(id)?.run()
}
