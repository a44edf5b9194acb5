use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use nfsense::experiments::{
    emit_plot_script, evaluate_bound, preset, run_crb_sweep, run_mse_experiment, run_selftest, Dataset,
    ExperimentConfig,
};
use nfsense::{Error, Result};

/// Near-field sensing bounds and estimators for wideband MIMO-OFDM arrays.
#[derive(Parser)]
#[command(name = "nfsense", version)]
struct Cli {
    #[command(flatten)]
    scenario: ScenarioArgs,

    /// `key = value` configuration file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScenarioArgs {
    /// ula, uca, or a comma-separated list.
    #[arg(long, global = true)]
    geometry: Option<String>,
    #[arg(long, global = true)]
    n_antennas: Option<String>,
    #[arg(long, global = true, conflicts_with = "spacing_m")]
    aperture_m: Option<String>,
    #[arg(long, global = true)]
    spacing_m: Option<String>,
    #[arg(long, global = true)]
    fc_hz: Option<String>,
    #[arg(long, global = true)]
    bandwidth_hz: Option<String>,
    #[arg(long, global = true)]
    subcarriers: Option<String>,
    #[arg(long, global = true)]
    symbols: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    snr_db: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    beta_db: Option<String>,
    #[arg(long, global = true)]
    theta_deg: Option<String>,
    #[arg(long, global = true)]
    r_m: Option<String>,
    /// phase or accurate, or a comma-separated list.
    #[arg(long, global = true)]
    model: Option<String>,
    /// fim, sum, closed, asymptotic or asymptotic:<limit>, or a list.
    #[arg(long, global = true)]
    method: Option<String>,
    #[arg(long, global = true)]
    trials: Option<String>,
    /// Falls back to NFSENSE_SEED.
    #[arg(long, global = true)]
    seed: Option<String>,
    #[arg(long, global = true)]
    threads: Option<String>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// snr_db, n_antennas, aperture, n_subcarriers, bandwidth, distance, theta or location_grid.
    #[arg(long)]
    axis: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    start: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    stop: Option<String>,
    #[arg(long)]
    points: Option<String>,
    /// linear or log.
    #[arg(long)]
    spacing: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Bounds for a single scenario.
    Crb {
        #[arg(long)]
        json: bool,
    },
    /// Bound sweep written as CSV.
    Sweep(SweepArgs),
    /// Monte-Carlo estimator MSE written as CSV.
    Mse(SweepArgs),
    /// Runs a figure preset and writes its CSV and plot script.
    Figure { id: String },
    /// Writes a gnuplot script for an existing dataset.
    Plot {
        /// Dataset produced by `sweep`, `mse` or `figure`.
        #[arg(long)]
        data: PathBuf,
        /// Figure id selecting the layout.
        #[arg(long)]
        figure: String,
    },
    /// Runs the built-in invariant checks.
    Selftest,
}

type Pairs = Vec<(String, String, String)>;

fn push(pairs: &mut Pairs, flag: &str, key: &str, value: &Option<String>) {
    if let Some(v) = value {
        pairs.push((format!("--{flag}"), key.to_string(), v.clone()));
    }
}

/// Seed fallback first, then the configuration file, then flags.
fn override_pairs(cli: &Cli, sweep: Option<&SweepArgs>) -> Result<Pairs> {
    let a = &cli.scenario;
    let mut pairs = Pairs::new();
    if a.seed.is_none() {
        if let Ok(seed) = std::env::var("NFSENSE_SEED") {
            pairs.push(("NFSENSE_SEED".into(), "seed".into(), seed));
        }
    }
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
        // Validates the file on its own so errors carry line numbers.
        ExperimentConfig::from_text(&text).map_err(|e| match e {
            Error::InvalidConfig(m) => Error::InvalidConfig(format!("{}: {m}", path.display())),
            other => other,
        })?;
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if let Some((k, v)) = line.split_once('=') {
                pairs.push((format!("{}:{}", path.display(), i + 1), k.trim().to_string(), v.trim().to_string()));
            }
        }
    }
    for (flag, key, value) in [
        ("geometry", "geometry", &a.geometry),
        ("n-antennas", "n_antennas", &a.n_antennas),
        ("aperture-m", "aperture_m", &a.aperture_m),
        ("spacing-m", "spacing_m", &a.spacing_m),
        ("fc-hz", "fc_hz", &a.fc_hz),
        ("bandwidth-hz", "bandwidth_hz", &a.bandwidth_hz),
        ("subcarriers", "n_subcarriers", &a.subcarriers),
        ("symbols", "n_symbols", &a.symbols),
        ("snr-db", "snr_db", &a.snr_db),
        ("beta-db", "beta_db", &a.beta_db),
        ("theta-deg", "theta_deg", &a.theta_deg),
        ("r-m", "r_m", &a.r_m),
        ("model", "model", &a.model),
        ("method", "method", &a.method),
        ("trials", "trials", &a.trials),
        ("seed", "seed", &a.seed),
        ("threads", "threads", &a.threads),
    ] {
        push(&mut pairs, flag, key, value);
    }
    if let Some(s) = sweep {
        push(&mut pairs, "axis", "sweep", &s.axis);
        push(&mut pairs, "start", "sweep_start", &s.start);
        push(&mut pairs, "stop", "sweep_stop", &s.stop);
        push(&mut pairs, "points", "sweep_points", &s.points);
        push(&mut pairs, "spacing", "sweep_spacing", &s.spacing);
    }
    Ok(pairs)
}

fn build_config(pairs: &Pairs) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    cfg.merge_pairs(pairs.iter().map(|(w, k, v)| (w.as_str(), k.as_str(), v.as_str())))?;
    Ok(cfg)
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(path, bytes)?;
        }
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct BoundEntry {
    geometry: String,
    model: String,
    method: String,
    crb_theta_rad2: Option<f64>,
    crb_r_m2: Option<f64>,
}

fn crb(cfg: &ExperimentConfig, json: bool, out: Option<&Path>) -> Result<()> {
    let mut entries = Vec::new();
    let mut text = String::new();
    for &kind in &cfg.geometries {
        for &model in &cfg.models {
            let s = cfg.scenario(kind, model)?;
            let lambda = s.ofdm.carrier_wavelength();
            if !json {
                text.push_str(&format!(
                    "{} N={} D={:.4} m d={:.4e} m, fc={:.4e} Hz B={:.4e} Hz M={} L={}, SNR={:.1} dB, |beta|^2={:.1} dB, \
                     theta={:.4} rad r={} m ({:?}, Rayleigh distance {:.4e} m), model {}\n",
                    kind.as_str(),
                    s.geometry.n_antennas(),
                    s.geometry.nominal_aperture(),
                    s.geometry.spacing(),
                    s.ofdm.carrier_hz,
                    s.ofdm.bandwidth_hz(),
                    s.ofdm.n_subcarriers,
                    s.ofdm.n_symbols,
                    s.snr_db(),
                    s.gain_db(),
                    s.target.theta,
                    s.target.r,
                    s.geometry.field_region(&s.target, lambda),
                    s.geometry.rayleigh_distance(lambda),
                    model.as_str()
                ));
            }
            for &method in &cfg.methods {
                let bound = evaluate_bound(&s, method)?;
                if !json {
                    match bound {
                        Some((t, r)) => text.push_str(&format!(
                            "  {:<28} CRB_theta = {t:.6e} rad^2   CRB_r = {r:.6e} m^2\n",
                            method.label()
                        )),
                        None => text.push_str(&format!("  {:<28} not available\n", method.label())),
                    }
                }
                entries.push(BoundEntry {
                    geometry: kind.as_str().into(),
                    model: model.as_str().into(),
                    method: method.label(),
                    crb_theta_rad2: bound.map(|b| b.0),
                    crb_r_m2: bound.map(|b| b.1),
                });
            }
        }
    }
    if json {
        // JSON has no infinity; unbounded limits become null.
        let finite = |v: Option<f64>| v.filter(|x| x.is_finite());
        for e in &mut entries {
            e.crb_theta_rad2 = finite(e.crb_theta_rad2);
            e.crb_r_m2 = finite(e.crb_r_m2);
        }
        text = serde_json::to_string_pretty(&entries).map_err(|e| Error::Io(e.to_string()))? + "\n";
    }
    write_output(out, text.as_bytes())
}

fn csv_out(data: &Dataset, out: Option<&Path>) -> Result<()> {
    write_output(out, &data.to_csv_bytes()?)
}

fn run(cli: &Cli) -> Result<()> {
    let out = cli.scenario.out.as_deref();
    match &cli.command {
        Command::Crb { json } => crb(&build_config(&override_pairs(cli, None)?)?, *json, out),
        Command::Sweep(s) => csv_out(&run_crb_sweep(&build_config(&override_pairs(cli, Some(s))?)?)?, out),
        Command::Mse(s) => csv_out(&run_mse_experiment(&build_config(&override_pairs(cli, Some(s))?)?)?, out),
        Command::Figure { id } => {
            let p = preset(id)?.with_overrides(&override_pairs(cli, None)?)?;
            let data = p.run()?;
            let path = out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(format!("{id}.csv")));
            data.save(&path)?;
            let script = emit_plot_script(&path, id, None)?;
            eprintln!("wrote {} ({} rows) and {}", path.display(), data.rows.len(), script.display());
            Ok(())
        }
        Command::Plot { data, figure } => {
            let script = emit_plot_script(data, figure, out)?;
            eprintln!("wrote {}", script.display());
            Ok(())
        }
        Command::Selftest => {
            let checks = run_selftest()?;
            let mut failed = 0;
            for c in &checks {
                println!("{} {:<48} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                failed += usize::from(!c.passed);
            }
            if failed > 0 {
                return Err(Error::Domain(format!("{failed} of {} checks failed", checks.len())));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nfsense: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
