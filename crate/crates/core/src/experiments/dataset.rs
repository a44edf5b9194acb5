//! Result rows and their CSV form.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ArrayKind;
use crate::scenario::Scenario;

/// Column order of every dataset.
pub const COLUMNS: [&str; 20] = [
    "geometry",
    "model",
    "method",
    "n_antennas",
    "aperture_m",
    "spacing_m",
    "fc_hz",
    "bandwidth_hz",
    "n_subcarriers",
    "n_symbols",
    "snr_db",
    "beta_db",
    "theta_rad",
    "r_m",
    "crb_theta_rad2",
    "crb_r_m2",
    "mse_theta_rad2",
    "mse_r_m2",
    "trials",
    "converged_fraction",
];

/// One output row. `None` becomes an empty cell and an unbounded limit is written as `inf`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub geometry: String,
    pub model: String,
    pub method: String,
    pub n_antennas: usize,
    pub aperture_m: f64,
    pub spacing_m: f64,
    pub fc_hz: f64,
    pub bandwidth_hz: f64,
    pub n_subcarriers: usize,
    pub n_symbols: usize,
    /// Empty for noiseless runs.
    pub snr_db: Option<f64>,
    pub beta_db: f64,
    pub theta_rad: f64,
    pub r_m: f64,
    pub crb_theta_rad2: Option<f64>,
    pub crb_r_m2: Option<f64>,
    pub mse_theta_rad2: Option<f64>,
    pub mse_r_m2: Option<f64>,
    pub trials: Option<usize>,
    pub converged_fraction: Option<f64>,
}

impl Row {
    /// Scenario columns filled in, result columns empty.
    pub fn describe(scenario: &Scenario, method: &str) -> Self {
        let g = &scenario.geometry;
        let o = &scenario.ofdm;
        Self {
            geometry: g.kind().as_str().to_string(),
            model: scenario.model.as_str().to_string(),
            method: method.to_string(),
            n_antennas: g.n_antennas(),
            aperture_m: g.nominal_aperture(),
            spacing_m: g.spacing(),
            fc_hz: o.carrier_hz,
            bandwidth_hz: o.bandwidth_hz(),
            n_subcarriers: o.n_subcarriers,
            n_symbols: o.n_symbols,
            snr_db: (scenario.noise_power > 0.0).then(|| scenario.snr_db()),
            beta_db: scenario.gain_db(),
            theta_rad: scenario.target.theta,
            r_m: scenario.target.r,
            crb_theta_rad2: None,
            crb_r_m2: None,
            mse_theta_rad2: None,
            mse_r_m2: None,
            trials: None,
            converged_fraction: None,
        }
    }

    pub fn kind(&self) -> Result<ArrayKind> {
        self.geometry.parse()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub rows: Vec<Row>,
}

impl Dataset {
    pub fn new(rows: Vec<Row>) -> Self {
        Self { rows }
    }

    pub fn extend(&mut self, other: Dataset) {
        self.rows.extend(other.rows);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        w.write_record(COLUMNS).map_err(csv_error)?;
        for row in &self.rows {
            w.serialize(row).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_bytes(&self) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(buf)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.to_csv_bytes()?)?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let header = r.headers().map_err(csv_error)?.clone();
        for col in COLUMNS {
            if !header.iter().any(|h| h == col) {
                return Err(Error::MissingColumn(col.to_string()));
            }
        }
        let rows = r.deserialize().collect::<std::result::Result<Vec<Row>, _>>().map_err(csv_error)?;
        Ok(Self { rows })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }
}

/// Header of a CSV file, for column checks that do not need typed rows.
pub fn read_header(path: &Path) -> Result<Vec<String>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_error)?;
    Ok(r.headers().map_err(csv_error)?.iter().map(str::to_string).collect())
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::from(io),
        other => Error::InvalidConfig(format!("malformed dataset: {other:?}")),
    }
}
