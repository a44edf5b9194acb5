//! Grid search plus quasi-Newton refinement on one noisy frame.

use nfsense::mle::{estimate, grid_search, AreaOfInterest};
use nfsense::signal::simulate_frame;
use nfsense::{ArrayKind, ChannelModel, Scenario};

fn main() -> nfsense::Result<()> {
    let scenario = Scenario::desk(ArrayKind::Ula).with_snr_db(10.0);
    let frame = simulate_frame(&scenario, 7, 0)?;

    let plan = AreaOfInterest::default().plan(&scenario)?;
    println!(
        "search: theta [{:.4}, {:.4}] x {}  r [{:.2}, {:.2}] x {}",
        plan.grid.theta_range[0],
        plan.grid.theta_range[1],
        plan.grid.n_theta,
        plan.grid.r_range[0],
        plan.grid.r_range[1],
        plan.grid.n_r
    );

    let coarse = grid_search(&frame, &plan.grid, ChannelModel::PhaseOnly)?;
    println!("best grid point: theta {:.6} r {:.4}", coarse.theta, coarse.r);

    let est = estimate(&frame, &plan, ChannelModel::PhaseOnly)?;
    println!(
        "estimate: theta {:.6} (true {:.6})  r {:.4} (true {:.4})  |beta| {:.3e}  iterations {}  converged {}",
        est.theta_hat,
        scenario.target.theta,
        est.r_hat,
        scenario.target.r,
        est.beta_hat.norm(),
        est.refinement_iterations,
        est.converged
    );
    Ok(())
}
