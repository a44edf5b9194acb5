//! Runs a figure preset with a reduced sweep and reads the CSV back.

use nfsense::experiments::{preset, Dataset};

fn main() -> nfsense::Result<()> {
    let overrides = [("example", "sweep_points", "5"), ("example", "n_antennas", "64")]
        .map(|(w, k, v)| (w.to_string(), k.to_string(), v.to_string()));
    let fig = preset("fig8")?.with_overrides(&overrides)?;
    println!("{}: {}", fig.id, fig.title);

    let data = fig.run()?;
    let path = std::env::temp_dir().join("nfsense-preset-example").join("fig8.csv");
    data.save(&path)?;
    let back = Dataset::load(&path)?;
    assert_eq!(back.rows.len(), data.rows.len());
    println!("{} rows written to {}", back.rows.len(), path.display());
    for row in back.rows.iter().filter(|r| r.geometry == "ula" && r.method == "closed") {
        println!("  B={:.1e} Hz  CRB_r {:.3e} m^2", row.bandwidth_hz, row.crb_r_m2.unwrap_or(f64::NAN));
    }
    Ok(())
}
