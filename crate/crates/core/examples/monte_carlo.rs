//! Estimator mean squared error against the bound over repeated trials.

use nfsense::crb::crb_phase_only;
use nfsense::mle::{run_monte_carlo, AreaOfInterest};
use nfsense::{ArrayKind, Scenario};

fn main() -> nfsense::Result<()> {
    let trials = 24;
    for snr_db in [10.0, 20.0] {
        let s = Scenario::desk(ArrayKind::Ula).with_snr_db(snr_db);
        let plan = AreaOfInterest::default().plan(&s)?;
        let mc = run_monte_carlo(&s, &plan, trials, 3)?;
        let bound = crb_phase_only(&s)?;
        println!(
            "SNR {snr_db:>5} dB: MSE/CRB theta {:.2}  r {:.2}  converged {:.0}% ({} trials)",
            mc.mse_theta / bound.crb_theta,
            mc.mse_r / bound.crb_r,
            100.0 * mc.converged_fraction,
            mc.n_trials()
        );
    }
    Ok(())
}
