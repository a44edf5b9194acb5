//! Binary frame dump.
//!
//! Layout (all little-endian): magic `NFSF`, version `u32`, `N`, `M`, `L` as
//! `u32`, the byte length of a UTF-8 layout note as `u32` followed by the note,
//! then every transmit block and every receive block as interleaved `f64`
//! pairs `(re, im)`. Blocks are written subcarrier by subcarrier, each in
//! column-major order.

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::signal::frame::{Block, SignalFrame};

pub const MAGIC: [u8; 4] = *b"NFSF";
pub const VERSION: u32 = 1;
pub const LAYOUT_NOTE: &str = "X then Y; subcarrier-major; column-major N x L blocks; f64 (re, im) pairs";

/// Raw contents of a dump file.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameDump {
    pub version: u32,
    pub note: String,
    pub transmit: Vec<Block>,
    pub receive: Vec<Block>,
}

pub fn write_frame<W: Write>(mut out: W, frame: &SignalFrame) -> Result<()> {
    let dims = [frame.n_antennas(), frame.n_subcarriers(), frame.n_symbols()];
    out.write_all(&MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    for d in dims {
        let d = u32::try_from(d).map_err(|_| Error::DimensionMismatch(format!("{d} exceeds u32")))?;
        out.write_all(&d.to_le_bytes())?;
    }
    out.write_all(&(LAYOUT_NOTE.len() as u32).to_le_bytes())?;
    out.write_all(LAYOUT_NOTE.as_bytes())?;
    for block in frame.transmit.iter().chain(&frame.receive) {
        for z in block.iter() {
            out.write_all(&z.re.to_le_bytes())?;
            out.write_all(&z.im.to_le_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

fn read_u32<R: Read>(input: &mut R) -> Result<u32> {
    let mut buf = [0u8; 4];
    input.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_f64<R: Read>(input: &mut R) -> Result<f64> {
    let mut buf = [0u8; 8];
    input.read_exact(&mut buf)?;
    Ok(f64::from_le_bytes(buf))
}

pub fn read_frame<R: Read>(mut input: R) -> Result<FrameDump> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if magic != MAGIC {
        return Err(Error::Io("not a frame dump (bad magic)".into()));
    }
    let version = read_u32(&mut input)?;
    if version != VERSION {
        return Err(Error::Io(format!("unsupported dump version {version}")));
    }
    let n = read_u32(&mut input)? as usize;
    let m = read_u32(&mut input)? as usize;
    let l = read_u32(&mut input)? as usize;
    let note_len = read_u32(&mut input)? as usize;
    let mut note = vec![0u8; note_len];
    input.read_exact(&mut note)?;
    let note = String::from_utf8(note).map_err(|e| Error::Io(e.to_string()))?;
    let read_blocks = |input: &mut R| -> Result<Vec<Block>> {
        (0..m)
            .map(|_| {
                let mut values = Vec::with_capacity(n * l);
                for _ in 0..n * l {
                    let re = read_f64(input)?;
                    let im = read_f64(input)?;
                    values.push(Complex64::new(re, im));
                }
                Ok(Block::from_vec(n, l, values))
            })
            .collect()
    };
    let transmit = read_blocks(&mut input)?;
    let receive = read_blocks(&mut input)?;
    Ok(FrameDump { version, note, transmit, receive })
}
