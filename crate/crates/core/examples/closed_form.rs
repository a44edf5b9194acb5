//! Large-array closed forms next to the exact sums, plus the four limits.

use nfsense::closed_form::{asymptotic, closed_form_crb, AsymptoticKind};
use nfsense::crb::crb_phase_only;
use nfsense::{ArrayGeometry, ArrayKind, Scenario};

fn main() -> nfsense::Result<()> {
    for kind in [ArrayKind::Ula, ArrayKind::Uca] {
        println!("{}", kind.as_str());
        for n in [16, 64, 256, 1024] {
            let s = Scenario::reference(kind).with_geometry(ArrayGeometry::with_aperture(kind, n, 5.0)?);
            let exact = crb_phase_only(&s)?;
            let closed = closed_form_crb(&s)?;
            println!(
                "  N={n:>5}  theta rel. gap {:.2e}  r rel. gap {:.2e}",
                (closed.crb_theta / exact.crb_theta - 1.0).abs(),
                (closed.crb_r / exact.crb_r - 1.0).abs()
            );
        }
        let s = Scenario::reference(kind);
        for limit in AsymptoticKind::ALL {
            let a = asymptotic(limit, &s)?;
            println!("  limit {:<15} theta {}  r {}", limit.as_str(), a.crb_theta, a.crb_r);
        }
    }
    Ok(())
}
