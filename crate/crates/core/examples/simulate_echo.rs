//! Synthesizes one OFDM echo frame and round-trips it through the binary dump.

use nfsense::signal::dump::{read_frame, write_frame};
use nfsense::signal::simulate_frame;
use nfsense::{ArrayKind, Scenario};

fn main() -> nfsense::Result<()> {
    let scenario = Scenario::desk(ArrayKind::Ula).with_snr_db(10.0);
    let frame = simulate_frame(&scenario, 42, 0)?;
    println!(
        "N={} M={} L={}  gain={:.3e}  noise power={:.3e}",
        frame.n_antennas(),
        frame.n_subcarriers(),
        frame.n_symbols(),
        frame.snapshot.gain,
        frame.snapshot.noise_power
    );

    let energy: f64 = frame.receive.iter().map(|y| y.norm_squared()).sum();
    println!(
        "received energy per sample: {:.3e}",
        energy / (frame.n_antennas() * frame.n_subcarriers() * frame.n_symbols()) as f64
    );

    let mut bytes = Vec::new();
    write_frame(&mut bytes, &frame)?;
    let dump = read_frame(bytes.as_slice())?;
    println!("dump: {} bytes, version {}, note `{}`", bytes.len(), dump.version, dump.note);
    assert_eq!(dump.receive, frame.receive);
    Ok(())
}
