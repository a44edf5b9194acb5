//! Randomized invariants across modules.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use proptest::prelude::*;

use nfsense::closed_form::{closed_form_crb, upsilon};
use nfsense::crb::{crb_phase_only, fim_crb};
use nfsense::experiments::{Dataset, Row};
use nfsense::mle::concentrated_objective;
use nfsense::signal::dump::{read_frame, write_frame};
use nfsense::signal::simulate_frame;
use nfsense::{ArrayGeometry, ArrayKind, ChannelModel, OfdmConfig, Scenario, TargetLocation};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn kind(uca: bool) -> ArrayKind {
    if uca {
        ArrayKind::Uca
    } else {
        ArrayKind::Ula
    }
}

fn small_scenario(uca: bool, n: usize, m: usize, aperture: f64, theta: f64, r_over_d: f64) -> Scenario {
    let k = kind(uca);
    Scenario::reference(k)
        .with_geometry(ArrayGeometry::with_aperture(k, n, aperture).unwrap())
        .with_ofdm(OfdmConfig::with_bandwidth(28e9, 50e6, m, 2).unwrap())
        .with_target(TargetLocation::new(theta, aperture * r_over_d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reduced_and_full_bounds_agree(
        uca in any::<bool>(),
        n in 3usize..96,
        m in 1usize..32,
        aperture in 0.1f64..5.0,
        theta in 0.1f64..3.0,
        r_over_d in 1.0f64..40.0,
    ) {
        let s = small_scenario(uca, n, m, aperture, theta, r_over_d);
        let a = crb_phase_only(&s).unwrap();
        let b = fim_crb(&s, ChannelModel::PhaseOnly).unwrap();
        prop_assert!(rel(a.crb_theta, b.crb_theta) < 1e-9);
        prop_assert!(rel(a.crb_r, b.crb_r) < 1e-9);
    }

    #[test]
    fn bounds_scale_inversely_with_snr(
        uca in any::<bool>(),
        n in 3usize..64,
        theta in 0.2f64..2.9,
        snr_db in -20.0f64..20.0,
    ) {
        let s = small_scenario(uca, n, 8, 1.0, theta, 10.0);
        let a = crb_phase_only(&s.with_snr_db(snr_db)).unwrap();
        let b = crb_phase_only(&s.with_snr_db(snr_db + 10.0)).unwrap();
        prop_assert!(rel(a.crb_theta, 10.0 * b.crb_theta) < 1e-10);
        prop_assert!(rel(a.crb_r, 10.0 * b.crb_r) < 1e-10);
    }

    #[test]
    fn ula_bounds_mirror(n in 2usize..128, theta in 0.05f64..1.5, r_over_d in 1.0f64..50.0) {
        let s = small_scenario(false, n, 4, 1.0, theta, r_over_d);
        let a = crb_phase_only(&s).unwrap();
        let b = crb_phase_only(&s.with_target(TargetLocation::new(PI - theta, s.target.r))).unwrap();
        prop_assert!(rel(a.crb_theta, b.crb_theta) < 1e-10);
        prop_assert!(rel(a.crb_r, b.crb_r) < 1e-10);
    }

    #[test]
    fn uca_closed_form_ignores_angle(n in 3usize..128, theta in 0.0f64..TAU, shift in 0.01f64..3.0, r_over_d in 0.1f64..50.0) {
        let s = small_scenario(true, n, 4, 1.0, theta, r_over_d);
        let a = closed_form_crb(&s).unwrap();
        let b = closed_form_crb(&s.with_target(TargetLocation::new(theta + shift, s.target.r))).unwrap();
        prop_assert_eq!(a.crb_theta, b.crb_theta);
        prop_assert_eq!(a.crb_r, b.crb_r);
    }

    #[test]
    fn upsilon_stays_in_unit_interval(alpha in 0.0f64..1e3) {
        let u = upsilon(alpha);
        prop_assert!((0.0..=1.0).contains(&u));
    }

    #[test]
    fn objective_is_bounded_and_phase_blind(
        uca in any::<bool>(),
        seed in 0u64..1000,
        theta in 0.2f64..2.9,
        r in 3.0f64..60.0,
        phase in 0.0f64..TAU,
    ) {
        let s = small_scenario(uca, 8, 4, 0.5, 1.0, 20.0).with_snr_db(0.0);
        let frame = simulate_frame(&s, seed, 0).unwrap();
        let loc = TargetLocation::new(theta, r);
        let value = concentrated_objective(&frame, &loc, ChannelModel::PhaseOnly).unwrap();
        let energy: f64 = frame.receive.iter().map(|y| y.norm_squared()).sum();
        prop_assert!(value >= 0.0 && value <= energy * (1.0 + 1e-12));
        let mut rotated = frame.clone();
        let z = Complex64::from_polar(1.0, phase);
        for y in &mut rotated.receive {
            *y *= z;
        }
        let turned = concentrated_objective(&rotated, &loc, ChannelModel::PhaseOnly).unwrap();
        prop_assert!(rel(turned, value) < 1e-12);
    }

    #[test]
    fn frame_dump_round_trips(uca in any::<bool>(), n in 1usize..6, m in 1usize..5, seed in 0u64..100) {
        let k = kind(uca);
        let s = Scenario::reference(k)
            .with_geometry(ArrayGeometry::with_aperture(k, n.max(3), 0.2).unwrap())
            .with_ofdm(OfdmConfig::with_bandwidth(28e9, 10e6, m, 3).unwrap());
        let frame = simulate_frame(&s, seed, 1).unwrap();
        let mut bytes = Vec::new();
        write_frame(&mut bytes, &frame).unwrap();
        let back = read_frame(bytes.as_slice()).unwrap();
        prop_assert_eq!(back.transmit, frame.transmit);
        prop_assert_eq!(back.receive, frame.receive);
    }

    #[test]
    fn csv_round_trips(
        values in proptest::collection::vec((any::<f64>(), prop::option::of(-1e300f64..1e300), 1usize..5000), 1..20),
    ) {
        let s = Scenario::desk(ArrayKind::Ula);
        let rows: Vec<Row> = values
            .iter()
            .map(|&(x, opt, count)| {
                let mut row = Row::describe(&s, "sum");
                row.r_m = if x.is_nan() { 1.0 } else { x };
                row.crb_theta_rad2 = opt;
                row.crb_r_m2 = opt.map(|_| f64::INFINITY);
                row.n_antennas = count;
                row
            })
            .collect();
        let data = Dataset::new(rows);
        let bytes = data.to_csv_bytes().unwrap();
        let back = Dataset::read_csv(bytes.as_slice()).unwrap();
        prop_assert_eq!(back, data);
    }
}
