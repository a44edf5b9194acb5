//! End-to-end runs of the `nfsense` binary.

use std::path::Path;
use std::process::{Command, Output};

fn nfsense(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nfsense"))
        .args(args)
        .current_dir(dir)
        .env_remove("NFSENSE_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

const SMALL: [&str; 10] =
    ["--geometry", "ula", "--n-antennas", "8", "--subcarriers", "4", "--symbols", "2", "--aperture-m", "0.3"];

#[test]
fn crb_json_is_parseable() {
    let dir = tempfile::tempdir().unwrap();
    let out =
        nfsense(&["crb", "--json", "--geometry", "ula,uca", "--method", "sum,closed,asymptotic:far-field"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let entries: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let entries = entries.as_array().unwrap();
    assert_eq!(entries.len(), 6);
    assert!(entries.iter().all(|e| e["crb_theta_rad2"].as_f64().unwrap() > 0.0));
}

#[test]
fn crb_text_names_the_field_region() {
    let dir = tempfile::tempdir().unwrap();
    let out = nfsense(&["crb", "--snr-db", "-10"], dir.path());
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("RadiatingNear") && text.contains("CRB_theta"));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&nfsense(&["crb", "--aperture-m", "1", "--spacing-m", "0.1"], dir.path())), 2);
    assert_eq!(code(&nfsense(&["crb", "--n-antennas", "0"], dir.path())), 2);
    assert_eq!(code(&nfsense(&["crb", "--model", "waves"], dir.path())), 2);
    assert_eq!(code(&nfsense(&["figure", "fig99"], dir.path())), 2);
    assert_eq!(code(&nfsense(&["nosuchcommand"], dir.path())), 2);

    std::fs::write(dir.path().join("bad.cfg"), "n_antennas = 8\nfrobnicate = 1\n").unwrap();
    let out = nfsense(&["crb", "--config", "bad.cfg"], dir.path());
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.cfg"), "geometry = uca\nn_antennas = 16\nmethod = sum\n").unwrap();
    let out = nfsense(&["sweep", "--config", "run.cfg", "--n-antennas", "24"], dir.path());
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("uca,phase,sum,24,"), "{row}");
}

#[test]
fn sweep_output_does_not_depend_on_threads() {
    let dir = tempfile::tempdir().unwrap();
    let mut args =
        vec!["sweep", "--axis", "distance", "--start", "1", "--stop", "100", "--points", "9", "--spacing", "log"];
    args.extend(SMALL);
    let one = nfsense(&[args.as_slice(), &["--threads", "1"]].concat(), dir.path());
    let two = nfsense(&[args.as_slice(), &["--threads", "3"]].concat(), dir.path());
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, two.stdout);
    assert_eq!(String::from_utf8_lossy(&one.stdout).lines().count(), 1 + 9 * 2);
}

#[test]
fn seed_comes_from_the_environment_unless_given() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["mse", "--trials", "3", "--snr-db", "0", "--method", "sum"];
    args.extend(SMALL);
    let run = |seed_env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_nfsense"));
        cmd.args(&args).args(extra).current_dir(dir.path()).env_remove("NFSENSE_SEED");
        if let Some(s) = seed_env {
            cmd.env("NFSENSE_SEED", s);
        }
        let out = cmd.output().unwrap();
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let env5 = run(Some("5"), &[]);
    assert_eq!(env5, run(None, &["--seed", "5"]));
    assert_ne!(env5, run(Some("6"), &[]));
    assert_eq!(run(Some("6"), &["--seed", "5"]), env5);
}

#[test]
fn figure_writes_data_and_script() {
    let dir = tempfile::tempdir().unwrap();
    let out = nfsense(&["figure", "fig8", "--n-antennas", "16", "--out", "res/fig8.csv"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("res/fig8.csv")).unwrap();
    assert!(csv.starts_with("geometry,model,method,"));
    let script = std::fs::read_to_string(dir.path().join("res/fig8.gp")).unwrap();
    assert!(script.contains("'fig8.csv'"));
}

#[test]
fn plot_checks_columns() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("thin.csv"), "geometry,model\nula,phase\n").unwrap();
    let out = nfsense(&["plot", "--data", "thin.csv", "--figure", "fig10"], dir.path());
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("method"));

    let out = nfsense(&["sweep", "--out", "s.csv", "--method", "sum"], dir.path());
    assert_eq!(code(&out), 0);
    let out = nfsense(&["plot", "--data", "s.csv", "--figure", "fig4"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("fig4.gp").exists());
    let out = nfsense(&["plot", "--data", "s.csv", "--figure", "fig12"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = nfsense(&["selftest"], dir.path());
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() >= 7 && text.lines().all(|l| l.starts_with("PASS")));
}
