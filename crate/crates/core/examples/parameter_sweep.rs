//! Bound sweep from a `key = value` configuration, written as CSV with a plot script.

use nfsense::experiments::{emit_plot_script, run_crb_sweep, ExperimentConfig};

const CONFIG: &str = "
geometry = ula, uca
n_antennas = 64
aperture_m = 1
method = fim, sum, closed
sweep = distance
sweep_start = 2
sweep_stop = 2000
sweep_points = 7
sweep_spacing = log
";

fn main() -> nfsense::Result<()> {
    let config = ExperimentConfig::from_text(CONFIG)?;
    let data = run_crb_sweep(&config)?;
    for row in data.rows.iter().filter(|r| r.method == "sum") {
        println!(
            "{} r={:>8.2} m  CRB_theta {:.3e}  CRB_r {:.3e}",
            row.geometry,
            row.r_m,
            row.crb_theta_rad2.unwrap_or(f64::NAN),
            row.crb_r_m2.unwrap_or(f64::NAN)
        );
    }

    let dir = std::env::temp_dir().join("nfsense-sweep-example");
    let csv = dir.join("distance.csv");
    data.save(&csv)?;
    let script = emit_plot_script(&csv, "fig10", None)?;
    println!("wrote {} and {}", csv.display(), script.display());
    Ok(())
}
