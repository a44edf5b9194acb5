//! Angle and distance bounds from the full Fisher information and from the phase-only sum.

use nfsense::crb::{crb_phase_only, fim_crb, intermediate_terms};
use nfsense::{ArrayKind, ChannelModel, Scenario};

fn main() -> nfsense::Result<()> {
    for kind in [ArrayKind::Ula, ArrayKind::Uca] {
        let s = Scenario::reference(kind);
        let terms = intermediate_terms(&s.geometry, &s.target)?;
        println!("{}: u_theta={:.4e} u_r={:.6} phi={:.4e}", kind.as_str(), terms.u_theta, terms.u_r, terms.phi);

        let sum = crb_phase_only(&s)?;
        println!("  phase-only sum     theta {:.6e} rad^2  r {:.6e} m^2", sum.crb_theta, sum.crb_r);
        for model in [ChannelModel::PhaseOnly, ChannelModel::AmplitudePhase] {
            let fim = fim_crb(&s, model)?;
            println!("  fisher ({:<8})  theta {:.6e} rad^2  r {:.6e} m^2", model.as_str(), fim.crb_theta, fim.crb_r);
        }
    }
    Ok(())
}
