//! Gnuplot scripts for the figure datasets.

use std::path::{Component, Path, PathBuf};

use crate::error::{Error, Result};
use crate::experiments::dataset::{read_header, COLUMNS};
use crate::experiments::presets::{FIG10_BANDWIDTHS_HZ, FIG9_BANDWIDTH_RATIOS, PRESET_IDS};

/// 1-based gnuplot column of `name`.
fn col(name: &str) -> usize {
    COLUMNS.iter().position(|c| *c == name).expect("known column") + 1
}

struct Series {
    title: String,
    /// Gnuplot boolean expression selecting the rows.
    filter: String,
}

fn is(column: &str, value: &str) -> String {
    format!("strcol({}) eq \"{value}\"", col(column))
}

fn near(column: &str, value: f64) -> String {
    format!("abs(${} - {value:e}) <= 1e-9 * abs({value:e})", col(column))
}

fn and(parts: &[String]) -> String {
    parts.iter().map(|p| format!("({p})")).collect::<Vec<_>>().join(" && ")
}

struct Panel {
    y: String,
    ylabel: &'static str,
}

struct Layout {
    x: String,
    xlabel: &'static str,
    logx: bool,
    panels: Vec<Panel>,
    series: Vec<Series>,
    /// Columns the script reads.
    needs: Vec<&'static str>,
}

fn crb_panels() -> Vec<Panel> {
    vec![
        Panel { y: format!("${}", col("crb_theta_rad2")), ylabel: "CRB angle (rad^2)" },
        Panel { y: format!("${}", col("crb_r_m2")), ylabel: "CRB distance (m^2)" },
    ]
}

fn per_geometry(methods: &[(&str, &str)], extra: &[(String, String)]) -> Vec<Series> {
    let mut out = Vec::new();
    for geom in ["ula", "uca"] {
        for (method, label) in methods {
            for (cond, suffix) in extra {
                let mut parts = vec![is("geometry", geom), is("method", method)];
                if !cond.is_empty() {
                    parts.push(cond.clone());
                }
                out.push(Series { title: format!("{} {label}{suffix}", geom.to_uppercase()), filter: and(&parts) });
            }
        }
    }
    out
}

fn no_extra() -> Vec<(String, String)> {
    vec![(String::new(), String::new())]
}

fn angle_extra() -> Vec<(String, String)> {
    vec![
        (near("theta_rad", std::f64::consts::FRAC_PI_4), ", theta=pi/4".into()),
        (near("theta_rad", std::f64::consts::FRAC_PI_2), ", theta=pi/2".into()),
    ]
}

fn layout(figure: &str) -> Result<Layout> {
    let base_needs = vec!["geometry", "model", "method", "crb_theta_rad2", "crb_r_m2"];
    let l = match figure {
        "fig4" | "fig4-noiseless" => {
            let mse = |g: &str| and(&[is("geometry", g), is("method", "mle")]);
            let mut series = Vec::new();
            for g in ["ula", "uca"] {
                series.push(Series { title: format!("{} MSE", g.to_uppercase()), filter: mse(g) });
            }
            series.extend(per_geometry(&[("sum", "CRB"), ("closed", "closed form")], &no_extra()));
            Layout {
                x: format!("${}", col("snr_db")),
                xlabel: "SNR (dB)",
                logx: false,
                panels: vec![
                    Panel {
                        y: format!(
                            "(strcol({}) eq \"mle\" ? ${} : ${})",
                            col("method"),
                            col("mse_theta_rad2"),
                            col("crb_theta_rad2")
                        ),
                        ylabel: "MSE / CRB angle (rad^2)",
                    },
                    Panel {
                        y: format!(
                            "(strcol({}) eq \"mle\" ? ${} : ${})",
                            col("method"),
                            col("mse_r_m2"),
                            col("crb_r_m2")
                        ),
                        ylabel: "MSE / CRB distance (m^2)",
                    },
                ],
                series,
                needs: [base_needs, vec!["snr_db", "mse_theta_rad2", "mse_r_m2"]].concat(),
            }
        }
        "fig5" => {
            let mut series = Vec::new();
            for (cond, regime) in
                [(near("aperture_m", 5.0), "fixed D"), (format!("!({})", near("aperture_m", 5.0)), "fixed d")]
            {
                for (theta_cond, angle) in angle_extra() {
                    for geom in ["ula", "uca"] {
                        for (model, method, label) in [
                            ("phase", "sum", "phase"),
                            ("accurate", "fim", "amplitude+phase"),
                            ("phase", "closed", "closed form"),
                        ] {
                            series.push(Series {
                                title: format!("{} {label}, {regime}{angle}", geom.to_uppercase()),
                                filter: and(&[
                                    is("geometry", geom),
                                    is("model", model),
                                    is("method", method),
                                    cond.clone(),
                                    theta_cond.clone(),
                                ]),
                            });
                        }
                    }
                }
            }
            Layout {
                x: format!("${}", col("n_antennas")),
                xlabel: "number of antennas N",
                logx: true,
                panels: crb_panels(),
                series,
                needs: [base_needs, vec!["n_antennas", "aperture_m", "theta_rad"]].concat(),
            }
        }
        "fig6" => Layout {
            x: format!("${}", col("aperture_m")),
            xlabel: "aperture D (m)",
            logx: true,
            panels: crb_panels(),
            series: per_geometry(&[("sum", "CRB"), ("closed", "closed form")], &angle_extra()),
            needs: [base_needs, vec!["aperture_m", "theta_rad"]].concat(),
        },
        "fig7" => Layout {
            x: format!("${}", col("n_subcarriers")),
            xlabel: "number of subcarriers M",
            logx: true,
            panels: crb_panels(),
            series: per_geometry(
                &[("sum", "CRB"), ("closed", "closed form")],
                &[
                    (near("bandwidth_hz", 10e6), ", fixed B".into()),
                    (format!("!({})", near("bandwidth_hz", 10e6)), ", fixed spacing".into()),
                ],
            ),
            needs: [base_needs, vec!["n_subcarriers", "bandwidth_hz"]].concat(),
        },
        "fig8" => Layout {
            x: format!("${}", col("bandwidth_hz")),
            xlabel: "bandwidth B (Hz)",
            logx: true,
            panels: crb_panels(),
            series: per_geometry(&[("sum", "CRB"), ("closed", "closed form")], &no_extra()),
            needs: [base_needs, vec!["bandwidth_hz"]].concat(),
        },
        "fig9" => {
            let extra: Vec<(String, String)> = FIG9_BANDWIDTH_RATIOS
                .iter()
                .map(|ratio| {
                    (
                        format!("abs(${} / ${} - {ratio:e}) <= 1e-9", col("bandwidth_hz"), col("fc_hz")),
                        format!(", B/fc={ratio}"),
                    )
                })
                .collect();
            Layout {
                x: format!("(${} / ${})", col("aperture_m"), col("r_m")),
                xlabel: "D / r",
                logx: true,
                panels: vec![Panel { y: format!("${}", col("crb_r_m2")), ylabel: "CRB distance (m^2)" }],
                series: per_geometry(&[("closed", "closed form")], &extra),
                needs: [base_needs, vec!["aperture_m", "r_m", "bandwidth_hz", "fc_hz"]].concat(),
            }
        }
        "fig10" => {
            let extra: Vec<(String, String)> = FIG10_BANDWIDTHS_HZ
                .iter()
                .map(|b| (near("bandwidth_hz", *b), format!(", B={} MHz", b / 1e6)))
                .collect();
            Layout {
                x: format!("${}", col("r_m")),
                xlabel: "target distance r (m)",
                logx: true,
                panels: crb_panels(),
                series: per_geometry(&[("sum", "CRB"), ("asymptotic:far-field", "far-field limit")], &extra),
                needs: [base_needs, vec!["r_m", "bandwidth_hz"]].concat(),
            }
        }
        "fig11" => Layout {
            x: format!("${}", col("theta_rad")),
            xlabel: "target angle (rad)",
            logx: false,
            panels: crb_panels(),
            series: per_geometry(&[("sum", "CRB")], &no_extra()),
            needs: [base_needs, vec!["theta_rad", "r_m"]].concat(),
        },
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown figure `{other}` (expected one of {})",
                PRESET_IDS.join(", ")
            )))
        }
    };
    Ok(l)
}

/// `target` relative to the directory `from`.
fn relative_to(target: &Path, from: &Path) -> PathBuf {
    let t: Vec<Component> = target.components().collect();
    let f: Vec<Component> = from.components().collect();
    let common = t.iter().zip(&f).take_while(|(a, b)| a == b).count();
    let mut out = PathBuf::new();
    for _ in common..f.len() {
        out.push("..");
    }
    for c in &t[common..] {
        out.push(c.as_os_str());
    }
    out
}

fn absolute(p: &Path) -> Result<PathBuf> {
    Ok(if p.is_absolute() { p.to_path_buf() } else { std::env::current_dir()?.join(p) })
}

/// Script text for `figure`, reading the dataset at `data_ref` as written in the script.
pub fn plot_script(figure: &str, data_ref: &str) -> Result<String> {
    let l = layout(figure)?;
    let png = format!("{figure}.png");
    let mut s = String::new();
    s.push_str(&format!("# {figure}: run with gnuplot from the directory holding this script\n"));
    s.push_str("set datafile separator ','\nset datafile missing ''\n");
    s.push_str(&format!("set terminal pngcairo size 1000,{} enhanced\n", 420 * l.panels.len()));
    s.push_str(&format!("set output '{png}'\n"));
    s.push_str(&format!("data = '{}'\n", data_ref.replace('\'', "''")));
    s.push_str("set key outside right top font ',8'\nset grid\nset format y '10^{%L}'\nset logscale y\n");
    if l.logx {
        s.push_str("set logscale x\n");
    }
    s.push_str(&format!("set xlabel '{}'\n", l.xlabel));
    s.push_str(&format!("set multiplot layout {},1\n", l.panels.len()));
    for panel in &l.panels {
        s.push_str(&format!("set ylabel '{}'\n", panel.ylabel));
        let curves: Vec<String> = l
            .series
            .iter()
            .map(|series| {
                format!(
                    "    data every ::1 using ({x}):(({f}) ? {y} : NaN) with linespoints pointsize 0.6 title '{t}'",
                    x = l.x,
                    f = series.filter,
                    y = panel.y,
                    t = series.title
                )
            })
            .collect();
        s.push_str("plot \\\n");
        s.push_str(&curves.join(", \\\n"));
        s.push('\n');
    }
    s.push_str("unset multiplot\n");
    Ok(s)
}

/// Writes a plot script for `figure` at `script`, checking the dataset's
/// columns first. The script refers to the dataset by a path relative to
/// its own directory. Returns the script path.
pub fn emit_plot_script(dataset: &Path, figure: &str, script: Option<&Path>) -> Result<PathBuf> {
    let l = layout(figure)?;
    let header = read_header(dataset)?;
    for need in &l.needs {
        if !header.iter().any(|h| h == need) {
            return Err(Error::MissingColumn((*need).to_string()));
        }
    }
    let script = match script {
        Some(p) => p.to_path_buf(),
        None => dataset.with_file_name(format!("{figure}.gp")),
    };
    let data_abs = absolute(dataset)?;
    let script_abs = absolute(&script)?;
    let dir = script_abs.parent().map(Path::to_path_buf).unwrap_or_default();
    let reference = relative_to(&data_abs, &dir);
    let text = plot_script(figure, &reference.to_string_lossy())?;
    if !dir.as_os_str().is_empty() {
        std::fs::create_dir_all(&dir)?;
    }
    std::fs::write(&script, text)?;
    Ok(script)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::dataset::{Dataset, Row};
    use crate::geometry::ArrayKind;
    use crate::scenario::Scenario;

    fn dataset_in(dir: &Path) -> PathBuf {
        let path = dir.join("data").join("fig.csv");
        let row = Row::describe(&Scenario::desk(ArrayKind::Ula), "sum");
        Dataset::new(vec![row]).save(&path).unwrap();
        path
    }

    #[test]
    fn fig4_script_plots_snr_on_a_log_axis() {
        let tmp = tempfile::tempdir().unwrap();
        let data = dataset_in(tmp.path());
        let script = emit_plot_script(&data, "fig4", Some(&tmp.path().join("plots/fig4.gp"))).unwrap();
        let text = std::fs::read_to_string(script).unwrap();
        assert!(text.contains("data = '../data/fig.csv'"), "{text}");
        assert!(text.contains("set xlabel 'SNR (dB)'"));
        assert!(text.contains("set logscale y") && !text.contains("set logscale x"));
        assert!(text.contains("MSE"));
    }

    #[test]
    fn fig9_script_uses_the_aperture_ratio() {
        let text = plot_script("fig9", "d.csv").unwrap();
        assert!(text.contains("set xlabel 'D / r'") && text.contains("set logscale x"));
        assert!(text.contains("B/fc=0.5") && text.contains("B/fc=0.001"));
        assert!(text.contains(&format!("${}", col("crb_r_m2"))));
    }

    #[test]
    fn unknown_figure_and_missing_columns() {
        assert!(matches!(plot_script("fig12", "d.csv"), Err(Error::InvalidConfig(_))));
        let tmp = tempfile::tempdir().unwrap();
        let bad = tmp.path().join("bad.csv");
        std::fs::write(&bad, "geometry,model,method,crb_theta_rad2\nula,phase,sum,1\n").unwrap();
        match emit_plot_script(&bad, "fig8", None) {
            Err(Error::MissingColumn(c)) => assert_eq!(c, "crb_r_m2"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn every_figure_has_a_script() {
        for id in PRESET_IDS {
            let text = plot_script(id, "x.csv").unwrap();
            assert!(text.starts_with(&format!("# {id}")));
            assert!(text.matches("plot \\").count() >= 1);
        }
    }

    #[test]
    fn relative_paths() {
        assert_eq!(relative_to(Path::new("/a/b/c.csv"), Path::new("/a/b")), PathBuf::from("c.csv"));
        assert_eq!(relative_to(Path::new("/a/x/c.csv"), Path::new("/a/b")), PathBuf::from("../x/c.csv"));
    }
}
