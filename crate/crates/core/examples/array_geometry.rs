//! Antenna layouts, propagation distances and the near/far-field split.

use nfsense::{ArrayGeometry, ArrayKind, TargetLocation};

fn main() -> nfsense::Result<()> {
    let wavelength = 299_792_458.0 / 28e9;
    let target = TargetLocation::new(std::f64::consts::FRAC_PI_4, 20.0);

    for kind in [ArrayKind::Ula, ArrayKind::Uca] {
        let geom = ArrayGeometry::with_aperture(kind, 8, 0.5)?;
        println!(
            "{}: N={} spacing={:.4} m aperture={:.4} m rayleigh={:.1} m region={:?}",
            kind.as_str(),
            geom.n_antennas(),
            geom.spacing(),
            geom.aperture(),
            geom.rayleigh_distance(wavelength),
            geom.field_region(&target, wavelength)
        );
        for (n, grad) in geom.distance_gradients(&target)?.iter().enumerate() {
            let [x, y] = geom.antenna_position(n);
            println!(
                "  antenna {n}: ({x:+.4}, {y:+.4}) m  r_n={:.6} m  dr/dtheta={:+.5}  dr/dr={:+.6}",
                geom.propagation_distance(n, &target),
                grad.d_theta,
                grad.d_r
            );
        }
    }

    // A source sitting on an antenna has no defined gradient.
    let geom = ArrayGeometry::ula(3, 1.0)?;
    let on_element = TargetLocation::new(0.0, 1.0);
    println!("gradient at an antenna: {:?}", geom.distance_gradients(&on_element).err());
    Ok(())
}
