//! Sweep and Monte-Carlo runners.

use rayon::prelude::*;

use crate::closed_form::{asymptotic, closed_form_crb, Limit};
use crate::crb::{crb_phase_only, fim_crb, CrbReport};
use crate::error::{Error, Result};
use crate::experiments::config::{ExperimentConfig, MethodSpec};
use crate::experiments::dataset::{Dataset, Row};
use crate::mle::{run_monte_carlo, AreaOfInterest};
use crate::scenario::Scenario;
use crate::signal::ChannelModel;

/// Runs `f` on a pool with `threads` workers, or on the global pool when unset.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidConfig(format!("cannot start {n} worker threads: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Bound from `method`, or `None` where it does not apply, the information is
/// singular, or the target sits on an antenna.
pub fn evaluate_bound(scenario: &Scenario, method: MethodSpec) -> Result<Option<(f64, f64)>> {
    let phase_only = scenario.model == ChannelModel::PhaseOnly;
    let from = |r: Result<CrbReport>| r.map(|c| Some((c.crb_theta, c.crb_r)));
    let result = match method {
        MethodSpec::Fim => from(fim_crb(scenario, scenario.model)),
        // The reduced, closed-form and limiting bounds all assume the phase-only response.
        _ if !phase_only => Ok(None),
        MethodSpec::Sum => from(crb_phase_only(scenario)),
        MethodSpec::Closed => from(closed_form_crb(scenario)),
        MethodSpec::Asymptotic(kind) => asymptotic(kind, scenario).map(|a| {
            let cell = |l: Limit| l.value().unwrap_or(f64::INFINITY);
            Some((cell(a.crb_theta), cell(a.crb_r)))
        }),
    };
    match result {
        Err(Error::SingularInformation(_) | Error::Domain(_) | Error::DegenerateGeometry { .. }) => Ok(None),
        other => other,
    }
}

fn bound_row(scenario: &Scenario, method: MethodSpec) -> Result<Row> {
    let mut row = Row::describe(scenario, &method.label());
    if let Some((t, r)) = evaluate_bound(scenario, method)? {
        row.crb_theta_rad2 = Some(t);
        row.crb_r_m2 = Some(r);
    }
    Ok(row)
}

/// One row per sweep point, geometry, model and method, in that nesting order.
pub fn run_crb_sweep(config: &ExperimentConfig) -> Result<Dataset> {
    config.validate()?;
    let mut tasks = Vec::new();
    for point in config.points() {
        for &kind in &config.geometries {
            for &model in &config.models {
                for &method in &config.methods {
                    tasks.push((point.clone(), kind, model, method));
                }
            }
        }
    }
    let rows = with_threads(config.threads, || {
        tasks
            .par_iter()
            .map(|(point, kind, model, method)| bound_row(&point.scenario(*kind, *model)?, *method))
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(Dataset::new(rows))
}

/// Reference bound for judging the estimator: the reduced sums for the
/// phase-only model and the full information otherwise.
pub fn reference_bound(scenario: &Scenario) -> Result<Option<(f64, f64)>> {
    if !(scenario.noise_power > 0.0) {
        return Ok(None);
    }
    let method = if scenario.model == ChannelModel::PhaseOnly { MethodSpec::Sum } else { MethodSpec::Fim };
    evaluate_bound(scenario, method)
}

/// Monte-Carlo MSE of the estimator per sweep point and geometry, followed by
/// the configured bounds at the same point.
///
/// The estimator row carries the reference bound in its bound columns. Each
/// point reuses the configured seed, so points differ only in the swept
/// parameter.
pub fn run_mse_experiment(config: &ExperimentConfig) -> Result<Dataset> {
    config.validate()?;
    let mut rows = Vec::new();
    for point in config.points() {
        for &kind in &config.geometries {
            for &model in &config.models {
                let scenario = point.scenario(kind, model)?;
                let plan = AreaOfInterest::default().plan(&scenario)?;
                let mc =
                    with_threads(config.threads, || run_monte_carlo(&scenario, &plan, config.trials, config.seed))??;
                let mut row = Row::describe(&scenario, "mle");
                if let Some((t, r)) = reference_bound(&scenario)? {
                    row.crb_theta_rad2 = Some(t);
                    row.crb_r_m2 = Some(r);
                }
                row.mse_theta_rad2 = Some(mc.mse_theta);
                row.mse_r_m2 = Some(mc.mse_r);
                row.trials = Some(mc.n_trials());
                row.converged_fraction = Some(mc.converged_fraction);
                rows.push(row);
                for &method in &config.methods {
                    if scenario.noise_power > 0.0 {
                        rows.push(bound_row(&scenario, method)?);
                    } else {
                        rows.push(Row::describe(&scenario, &method.label()));
                    }
                }
            }
        }
    }
    Ok(Dataset::new(rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::AsymptoticKind;
    use crate::geometry::ArrayKind;

    fn small_sweep() -> ExperimentConfig {
        ExperimentConfig::from_text(
            "n_antennas = 16\nn_subcarriers = 8\nn_symbols = 4\nmodel = phase, accurate\n\
             method = fim, sum, closed, asymptotic:far-field\nsweep = distance\nsweep_start = 10\nsweep_stop = 40\nsweep_points = 3\n",
        )
        .unwrap()
    }

    #[test]
    fn sweep_layout_and_applicability() {
        let d = run_crb_sweep(&small_sweep()).unwrap();
        assert_eq!(d.rows.len(), 3 * 2 * 2 * 4);
        for row in &d.rows {
            let filled = row.crb_theta_rad2.is_some();
            let phase = row.model == "phase";
            assert_eq!(filled, phase || row.method == "fim", "{row:?}");
        }
        // Far-field limits are finite for both shapes in the phase model.
        assert!(d
            .rows
            .iter()
            .filter(|r| r.method == "asymptotic:far-field")
            .all(|r| r.model != "phase" || r.crb_r_m2.unwrap().is_finite()));
        assert!(d.rows.iter().all(|r| r.mse_theta_rad2.is_none()));
    }

    #[test]
    fn sweep_is_deterministic_and_thread_independent() {
        let mut c = small_sweep();
        let a = run_crb_sweep(&c).unwrap().to_csv_bytes().unwrap();
        c.threads = Some(2);
        let b = run_crb_sweep(&c).unwrap().to_csv_bytes().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unbounded_limits_are_written_as_inf() {
        let c = ExperimentConfig::from_text("geometry = ula\nmethod = asymptotic:aperture\n").unwrap();
        let d = run_crb_sweep(&c).unwrap();
        assert_eq!(d.rows.len(), 1);
        assert_eq!(d.rows[0].crb_theta_rad2, Some(f64::INFINITY));
        let text = String::from_utf8(d.to_csv_bytes().unwrap()).unwrap();
        assert!(text.contains(",inf,"), "{text}");
        assert_eq!(MethodSpec::Asymptotic(AsymptoticKind::ApertureLimit).label(), "asymptotic:aperture");
    }

    #[test]
    fn singular_points_leave_empty_cells() {
        let c = ExperimentConfig::from_text("geometry = ula\nn_antennas = 1\nmethod = sum, fim\n").unwrap();
        let d = run_crb_sweep(&c).unwrap();
        assert!(d.rows.iter().all(|r| r.crb_theta_rad2.is_none() && r.crb_r_m2.is_none()), "{:?}", d.rows);
    }

    #[test]
    fn noiseless_mse_smoke() {
        let c = ExperimentConfig::from_text(
            "n_antennas = 16\nn_subcarriers = 8\nn_symbols = 4\naperture_m = 0.5\nr_m = 3\nnoise_power = 0\ntrials = 2\nseed = 3\n",
        )
        .unwrap();
        let d = run_mse_experiment(&c).unwrap();
        let mle: Vec<&Row> = d.rows.iter().filter(|r| r.method == "mle").collect();
        assert_eq!(mle.len(), 2);
        for r in mle {
            assert!(r.mse_theta_rad2.unwrap() < 1e-10 && r.mse_r_m2.unwrap() < 1e-10, "{r:?}");
            assert!(r.crb_theta_rad2.is_none() && r.snr_db.is_none());
            assert_eq!(r.trials, Some(2));
        }
        let again = run_mse_experiment(&c).unwrap();
        assert_eq!(d.to_csv_bytes().unwrap(), again.to_csv_bytes().unwrap());
        assert_eq!(d.rows.iter().filter(|r| r.kind().unwrap() == ArrayKind::Uca).count(), 3);
    }
}
