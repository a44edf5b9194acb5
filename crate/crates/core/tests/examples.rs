//! Runs every example program and checks that it succeeds.

use std::path::PathBuf;
use std::process::Command;

const EXAMPLES: [&str; 8] = [
    "array_geometry",
    "simulate_echo",
    "bounds",
    "closed_form",
    "estimate_location",
    "monte_carlo",
    "parameter_sweep",
    "figure_preset",
];

/// `cargo test` builds examples next to `deps/`, in `examples/`.
fn example_path(name: &str) -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|deps| deps.parent()).unwrap();
    profile_dir.join("examples").join(format!("{name}{}", std::env::consts::EXE_SUFFIX))
}

/// Builds the examples when this test was selected on its own (`--test examples`).
fn ensure_built() {
    if EXAMPLES.iter().all(|name| example_path(name).exists()) {
        return;
    }
    let status = Command::new(env!("CARGO"))
        .args(["build", "--examples", "-p", "nfsense"])
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .status()
        .unwrap();
    assert!(status.success(), "building the examples failed");
}

#[test]
fn examples_run() {
    ensure_built();
    for name in EXAMPLES {
        let path = example_path(name);
        assert!(path.exists(), "example `{name}` was not built at {}", path.display());
        let out = Command::new(&path).output().unwrap();
        assert!(out.status.success(), "example `{name}` failed:\n{}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stdout.is_empty(), "example `{name}` printed nothing");
    }
}

#[test]
fn every_example_is_listed() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples");
    let mut found: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| e.ok()?.path().file_stem()?.to_str().map(String::from))
        .collect();
    found.sort();
    let mut listed: Vec<String> = EXAMPLES.iter().map(|s| s.to_string()).collect();
    listed.sort();
    assert_eq!(found, listed);
}
