//! Experiment configuration: flat `key = value` text with flag overrides.
//!
//! ```text
//! # comments start with '#'
//! geometry = ula, uca
//! n_antennas = 256
//! aperture_m = 5
//! sweep = n_antennas
//! sweep_start = 4
//! sweep_stop = 4096
//! sweep_points = 11
//! sweep_spacing = log
//! ```

use std::f64::consts::PI;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::closed_form::AsymptoticKind;
use crate::crb::CrbMethod;
use crate::error::{Error, Result};
use crate::geometry::{ArrayGeometry, ArrayKind, TargetLocation};
use crate::scenario::Scenario;
use crate::signal::{ChannelModel, OfdmConfig};

/// Swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    SnrDb,
    NAntennas,
    Aperture,
    NSubcarriers,
    Bandwidth,
    Distance,
    Theta,
    /// Angle along the main axis times a distance grid.
    LocationGrid,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 8] = [
        SweepAxis::SnrDb,
        SweepAxis::NAntennas,
        SweepAxis::Aperture,
        SweepAxis::NSubcarriers,
        SweepAxis::Bandwidth,
        SweepAxis::Distance,
        SweepAxis::Theta,
        SweepAxis::LocationGrid,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::SnrDb => "snr_db",
            SweepAxis::NAntennas => "n_antennas",
            SweepAxis::Aperture => "aperture",
            SweepAxis::NSubcarriers => "n_subcarriers",
            SweepAxis::Bandwidth => "bandwidth",
            SweepAxis::Distance => "distance",
            SweepAxis::Theta => "theta",
            SweepAxis::LocationGrid => "location_grid",
        }
    }

    fn is_count(self) -> bool {
        matches!(self, SweepAxis::NAntennas | SweepAxis::NSubcarriers)
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|a| a.as_str() == s).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|a| a.as_str()).collect();
            Error::InvalidConfig(format!("unknown sweep axis `{s}` (expected one of {})", names.join(", ")))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AxisSpacing {
    Linear,
    Logarithmic,
}

impl std::str::FromStr for AxisSpacing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" | "lin" => Ok(AxisSpacing::Linear),
            "log" | "logarithmic" => Ok(AxisSpacing::Logarithmic),
            other => Err(Error::InvalidConfig(format!("unknown spacing `{other}` (expected linear or log)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub axis: SweepAxis,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: AxisSpacing,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        let raw = axis_values(self.start, self.stop, self.points, self.spacing);
        if !self.axis.is_count() {
            return raw;
        }
        let mut counts: Vec<f64> = raw.into_iter().map(|v| v.round().max(1.0)).collect();
        counts.dedup();
        counts
    }
}

fn axis_values(start: f64, stop: f64, points: usize, spacing: AxisSpacing) -> Vec<f64> {
    if points <= 1 {
        return vec![start];
    }
    let last = (points - 1) as f64;
    (0..points)
        .map(|i| {
            let t = i as f64 / last;
            if i + 1 == points {
                stop
            } else {
                match spacing {
                    AxisSpacing::Linear => start + (stop - start) * t,
                    AxisSpacing::Logarithmic => (start.ln() + (stop.ln() - start.ln()) * t).exp(),
                }
            }
        })
        .collect()
}

/// Distance axis of a location-grid sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl DistanceGrid {
    pub fn values(&self) -> Vec<f64> {
        axis_values(self.start, self.stop, self.points, AxisSpacing::Linear)
    }
}

/// How the array is sized; the other quantity follows from `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ArraySize {
    Aperture(f64),
    Spacing(f64),
}

/// How the band is sized; the other quantity follows from `M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BandSize {
    Bandwidth(f64),
    SubcarrierSpacing(f64),
}

/// A bound to evaluate at every sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MethodSpec {
    Fim,
    Sum,
    Closed,
    Asymptotic(AsymptoticKind),
}

impl MethodSpec {
    pub fn label(self) -> String {
        match self {
            MethodSpec::Fim => CrbMethod::ExactFim.as_str().to_string(),
            MethodSpec::Sum => CrbMethod::DiscreteSum.as_str().to_string(),
            MethodSpec::Closed => CrbMethod::ClosedForm.as_str().to_string(),
            MethodSpec::Asymptotic(kind) => format!("{}:{}", CrbMethod::Asymptotic.as_str(), kind.as_str()),
        }
    }

    /// Parses `fim`, `sum`, `closed`, `asymptotic` (every limit) or `asymptotic:<limit>`.
    pub fn parse_list(s: &str) -> Result<Vec<MethodSpec>> {
        let mut out = Vec::new();
        for item in split_list(s) {
            match item.split_once(':') {
                Some(("asymptotic", kind)) => out.push(MethodSpec::Asymptotic(kind.parse()?)),
                _ => match item.parse::<CrbMethod>()? {
                    CrbMethod::ExactFim => out.push(MethodSpec::Fim),
                    CrbMethod::DiscreteSum => out.push(MethodSpec::Sum),
                    CrbMethod::ClosedForm => out.push(MethodSpec::Closed),
                    CrbMethod::Asymptotic => out.extend(AsymptoticKind::ALL.map(MethodSpec::Asymptotic)),
                },
            }
        }
        if out.is_empty() {
            return Err(Error::InvalidConfig("method list is empty".into()));
        }
        Ok(out)
    }
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub geometries: Vec<ArrayKind>,
    pub n_antennas: usize,
    pub array_size: ArraySize,
    /// Give circular arrays `pi` times the configured spacing so both shapes share an aperture.
    pub matched_spacing: bool,
    pub fc_hz: f64,
    pub band_size: BandSize,
    pub n_subcarriers: usize,
    pub n_symbols: usize,
    pub snr_db: f64,
    /// Overrides `snr_db` when set; zero gives noiseless frames.
    pub noise_power: Option<f64>,
    pub beta_db: f64,
    pub theta_rad: f64,
    pub r_m: f64,
    pub models: Vec<ChannelModel>,
    pub methods: Vec<MethodSpec>,
    pub sweep: Option<Sweep>,
    pub distance_grid: Option<DistanceGrid>,
    pub trials: usize,
    pub seed: u64,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub figure: Option<String>,
}

impl Default for ExperimentConfig {
    /// Full-size reference parameters: 28 GHz, 10 MHz, 5 m aperture,
    /// N = M = L = 256, gain -30 dB, target at 20 m and 45 degrees, SNR 0 dB.
    fn default() -> Self {
        Self {
            geometries: vec![ArrayKind::Ula, ArrayKind::Uca],
            n_antennas: 256,
            array_size: ArraySize::Aperture(5.0),
            matched_spacing: false,
            fc_hz: 28e9,
            band_size: BandSize::Bandwidth(10e6),
            n_subcarriers: 256,
            n_symbols: 256,
            snr_db: 0.0,
            noise_power: None,
            beta_db: -30.0,
            theta_rad: PI / 4.0,
            r_m: 20.0,
            models: vec![ChannelModel::PhaseOnly],
            methods: vec![MethodSpec::Sum, MethodSpec::Closed],
            sweep: None,
            distance_grid: None,
            trials: 500,
            seed: 0,
            threads: None,
            out: None,
            figure: None,
        }
    }
}

/// Keys accepted by [`ExperimentConfig::set`].
pub const KEYS: &[&str] = &[
    "geometry",
    "n_antennas",
    "aperture_m",
    "spacing_m",
    "matched_spacing",
    "fc_hz",
    "bandwidth_hz",
    "subcarrier_spacing_hz",
    "n_subcarriers",
    "n_symbols",
    "snr_db",
    "noise_power",
    "beta_db",
    "theta_deg",
    "theta_rad",
    "r_m",
    "model",
    "method",
    "sweep",
    "sweep_start",
    "sweep_stop",
    "sweep_points",
    "sweep_spacing",
    "grid_r_start",
    "grid_r_stop",
    "grid_r_points",
    "trials",
    "seed",
    "threads",
    "out",
    "figure",
];

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::InvalidConfig(format!("`{key}` expects a number, got `{value}`")))
}

fn boolean(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::InvalidConfig(format!("`{key}` expects true or false, got `{value}`"))),
    }
}

/// Sweep fields collected before the axis is known.
#[derive(Debug, Clone, Copy, Default)]
struct PendingSweep {
    axis: Option<SweepAxis>,
    start: Option<f64>,
    stop: Option<f64>,
    points: Option<usize>,
    spacing: Option<AxisSpacing>,
    r_start: Option<f64>,
    r_stop: Option<f64>,
    r_points: Option<usize>,
}

impl ExperimentConfig {
    /// Parses a configuration file on top of the defaults.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.merge_text(text)?;
        Ok(cfg)
    }

    /// Applies `key = value` lines; errors name the offending line.
    pub fn merge_text(&mut self, text: &str) -> Result<()> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidConfig(format!("line {}: expected `key = value`, got `{line}`", i + 1)))?;
            pairs.push((format!("line {}", i + 1), key.trim().to_string(), value.trim().to_string()));
        }
        let has = |k: &str| pairs.iter().any(|(_, key, _)| key == k);
        if has("aperture_m") && has("spacing_m") {
            return Err(Error::InvalidConfig("aperture_m and spacing_m are mutually exclusive".into()));
        }
        if has("bandwidth_hz") && has("subcarrier_spacing_hz") {
            return Err(Error::InvalidConfig("bandwidth_hz and subcarrier_spacing_hz are mutually exclusive".into()));
        }
        self.merge_pairs(pairs.iter().map(|(w, k, v)| (w.as_str(), k.as_str(), v.as_str())))
    }

    /// Applies `(where, key, value)` triples, then validates the result.
    /// `where` only labels error messages, e.g. `line 3` or `--n-antennas`.
    pub fn merge_pairs<'a>(&mut self, pairs: impl IntoIterator<Item = (&'a str, &'a str, &'a str)>) -> Result<()> {
        let mut pending = self.pending();
        for (place, key, value) in pairs {
            self.set(&mut pending, key, value).map_err(|e| Error::InvalidConfig(format!("{place}: {}", strip(e))))?;
        }
        self.finish(pending)?;
        self.validate()
    }

    fn pending(&self) -> PendingSweep {
        let mut p = PendingSweep::default();
        if let Some(s) = self.sweep {
            p.axis = Some(s.axis);
            p.start = Some(s.start);
            p.stop = Some(s.stop);
            p.points = Some(s.points);
            p.spacing = Some(s.spacing);
        }
        if let Some(g) = self.distance_grid {
            p.r_start = Some(g.start);
            p.r_stop = Some(g.stop);
            p.r_points = Some(g.points);
        }
        p
    }

    fn set(&mut self, p: &mut PendingSweep, key: &str, value: &str) -> Result<()> {
        match key {
            "geometry" => {
                self.geometries = split_list(value).map(str::parse).collect::<Result<_>>()?;
                if self.geometries.is_empty() {
                    return Err(Error::InvalidConfig("geometry list is empty".into()));
                }
            }
            "n_antennas" => self.n_antennas = number(key, value)?,
            "aperture_m" => self.array_size = ArraySize::Aperture(number(key, value)?),
            "spacing_m" => self.array_size = ArraySize::Spacing(number(key, value)?),
            "matched_spacing" => self.matched_spacing = boolean(key, value)?,
            "fc_hz" => self.fc_hz = number(key, value)?,
            "bandwidth_hz" => self.band_size = BandSize::Bandwidth(number(key, value)?),
            "subcarrier_spacing_hz" => self.band_size = BandSize::SubcarrierSpacing(number(key, value)?),
            "n_subcarriers" => self.n_subcarriers = number(key, value)?,
            "n_symbols" => self.n_symbols = number(key, value)?,
            "snr_db" => {
                self.snr_db = number(key, value)?;
                self.noise_power = None;
            }
            "noise_power" => self.noise_power = Some(number(key, value)?),
            "beta_db" => self.beta_db = number(key, value)?,
            "theta_deg" => self.theta_rad = number::<f64>(key, value)?.to_radians(),
            "theta_rad" => self.theta_rad = number(key, value)?,
            "r_m" => self.r_m = number(key, value)?,
            "model" => {
                self.models = split_list(value).map(str::parse).collect::<Result<_>>()?;
                if self.models.is_empty() {
                    return Err(Error::InvalidConfig("model list is empty".into()));
                }
            }
            "method" => self.methods = MethodSpec::parse_list(value)?,
            "sweep" => {
                p.axis = if value == "none" { None } else { Some(value.parse()?) };
            }
            "sweep_start" => p.start = Some(number(key, value)?),
            "sweep_stop" => p.stop = Some(number(key, value)?),
            "sweep_points" => p.points = Some(number(key, value)?),
            "sweep_spacing" => p.spacing = Some(value.parse()?),
            "grid_r_start" => p.r_start = Some(number(key, value)?),
            "grid_r_stop" => p.r_stop = Some(number(key, value)?),
            "grid_r_points" => p.r_points = Some(number(key, value)?),
            "trials" => self.trials = number(key, value)?,
            "seed" => self.seed = number(key, value)?,
            "threads" => self.threads = Some(number(key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "figure" => self.figure = Some(value.to_string()),
            other => return Err(Error::InvalidConfig(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    fn finish(&mut self, p: PendingSweep) -> Result<()> {
        self.sweep = match p.axis {
            None => None,
            Some(axis) => {
                let start = p.start.ok_or_else(|| Error::InvalidConfig("sweep needs sweep_start".into()))?;
                let stop = p.stop.unwrap_or(start);
                let points = p.points.unwrap_or(if stop == start { 1 } else { 2 });
                Some(Sweep { axis, start, stop, points, spacing: p.spacing.unwrap_or(AxisSpacing::Linear) })
            }
        };
        self.distance_grid = match (p.r_start, p.r_stop, p.r_points) {
            (None, None, None) => None,
            (Some(start), Some(stop), Some(points)) => Some(DistanceGrid { start, stop, points }),
            _ => return Err(Error::InvalidConfig("grid_r_start, grid_r_stop and grid_r_points go together".into())),
        };
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")))
            }
        };
        if self.n_antennas == 0 || self.n_subcarriers == 0 || self.n_symbols == 0 {
            return Err(Error::InvalidConfig("antenna, subcarrier and symbol counts must be at least 1".into()));
        }
        match self.array_size {
            ArraySize::Aperture(d) => positive("aperture_m", d)?,
            ArraySize::Spacing(d) => positive("spacing_m", d)?,
        }
        match self.band_size {
            BandSize::Bandwidth(b) => positive("bandwidth_hz", b)?,
            BandSize::SubcarrierSpacing(b) => positive("subcarrier_spacing_hz", b)?,
        }
        positive("fc_hz", self.fc_hz)?;
        positive("r_m", self.r_m)?;
        if let Some(s) = self.noise_power {
            if !(s.is_finite() && s >= 0.0) {
                return Err(Error::InvalidConfig(format!("noise_power must be non-negative, got {s}")));
            }
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidConfig("threads must be at least 1".into()));
        }
        if let Some(s) = self.sweep {
            if s.points == 0 {
                return Err(Error::InvalidConfig("sweep_points must be at least 1".into()));
            }
            if !(s.start.is_finite() && s.stop.is_finite()) {
                return Err(Error::InvalidConfig("sweep range must be finite".into()));
            }
            if s.spacing == AxisSpacing::Logarithmic && !(s.start > 0.0 && s.stop > 0.0) {
                return Err(Error::InvalidConfig("a logarithmic sweep needs positive endpoints".into()));
            }
            if s.axis == SweepAxis::LocationGrid && self.distance_grid.is_none() {
                return Err(Error::InvalidConfig(
                    "location_grid sweep needs grid_r_start, grid_r_stop and grid_r_points".into(),
                ));
            }
        }
        if let Some(g) = self.distance_grid {
            if g.points == 0 || !(g.start > 0.0 && g.stop >= g.start) {
                return Err(Error::InvalidConfig(
                    "distance grid needs 0 < grid_r_start <= grid_r_stop and points >= 1".into(),
                ));
            }
        }
        Ok(())
    }

    /// All `(config, geometry)` scenarios of the sweep, in output order.
    pub fn points(&self) -> Vec<ExperimentConfig> {
        let Some(sweep) = self.sweep else {
            return vec![self.clone()];
        };
        let mut out = Vec::new();
        for v in sweep.values() {
            let mut c = self.clone();
            c.sweep = None;
            match sweep.axis {
                SweepAxis::SnrDb => {
                    c.snr_db = v;
                    c.noise_power = None;
                }
                SweepAxis::NAntennas => c.n_antennas = v as usize,
                SweepAxis::Aperture => c.array_size = ArraySize::Aperture(v),
                SweepAxis::NSubcarriers => c.n_subcarriers = v as usize,
                SweepAxis::Bandwidth => c.band_size = BandSize::Bandwidth(v),
                SweepAxis::Distance => c.r_m = v,
                SweepAxis::Theta => c.theta_rad = v,
                SweepAxis::LocationGrid => {
                    c.theta_rad = v;
                    for r in self.distance_grid.map(|g| g.values()).unwrap_or_default() {
                        let mut cr = c.clone();
                        cr.r_m = r;
                        out.push(cr);
                    }
                    continue;
                }
            }
            out.push(c);
        }
        out
    }

    pub fn geometry(&self, kind: ArrayKind) -> Result<ArrayGeometry> {
        match self.array_size {
            ArraySize::Aperture(d) => ArrayGeometry::with_aperture(kind, self.n_antennas, d),
            ArraySize::Spacing(d) => {
                let d = if self.matched_spacing && kind == ArrayKind::Uca { PI * d } else { d };
                ArrayGeometry::new(kind, self.n_antennas, d)
            }
        }
    }

    pub fn ofdm(&self) -> Result<OfdmConfig> {
        match self.band_size {
            BandSize::Bandwidth(b) => OfdmConfig::with_bandwidth(self.fc_hz, b, self.n_subcarriers, self.n_symbols),
            BandSize::SubcarrierSpacing(df) => OfdmConfig::new(self.fc_hz, self.n_subcarriers, df, self.n_symbols),
        }
    }

    /// Scenario for one geometry at this (already swept) point.
    pub fn scenario(&self, kind: ArrayKind, model: ChannelModel) -> Result<Scenario> {
        let s = Scenario::reference(kind)
            .with_geometry(self.geometry(kind)?)
            .with_ofdm(self.ofdm()?)
            .with_target(TargetLocation::new(self.theta_rad, self.r_m))
            .with_gain_db(self.beta_db)
            .with_model(model);
        Ok(match self.noise_power {
            Some(n) => s.with_noise_power(n),
            None => s.with_snr_db(self.snr_db),
        })
    }
}

fn strip(e: Error) -> String {
    match e {
        Error::InvalidConfig(msg) => msg,
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_the_reference_setup() {
        let c = ExperimentConfig::default();
        let s = c.scenario(ArrayKind::Ula, ChannelModel::PhaseOnly).unwrap();
        let r = Scenario::reference(ArrayKind::Ula);
        assert_eq!(s.geometry, r.geometry);
        assert_eq!(s.ofdm, r.ofdm);
        assert_eq!(s.target, r.target);
        assert!((s.gain - r.gain).norm() < 1e-15 && s.noise_power == r.noise_power);
    }

    #[test]
    fn parses_a_file() {
        let text = "# fixed spacing sweep\ngeometry = ula\nspacing_m = 0.005\nmatched_spacing = true\n\
                    sweep = n_antennas\nsweep_start = 4\nsweep_stop = 64\nsweep_points = 5\nsweep_spacing = log\n\
                    method = fim, asymptotic:far-field\nmodel = phase, accurate  # both\ntheta_deg = 90\n";
        let c = ExperimentConfig::from_text(text).unwrap();
        assert_eq!(c.geometries, vec![ArrayKind::Ula]);
        assert_eq!(c.array_size, ArraySize::Spacing(0.005));
        assert_eq!(c.methods, vec![MethodSpec::Fim, MethodSpec::Asymptotic(AsymptoticKind::FarField)]);
        assert_eq!(c.models.len(), 2);
        assert!((c.theta_rad - PI / 2.0).abs() < 1e-15);
        let n: Vec<usize> = c.points().iter().map(|p| p.n_antennas).collect();
        assert_eq!(n, vec![4, 8, 16, 32, 64]);
    }

    #[test]
    fn errors_name_the_line() {
        let err = ExperimentConfig::from_text("n_antennas = 8\nbogus = 1\n").unwrap_err().to_string();
        assert!(err.contains("line 2") && err.contains("bogus"), "{err}");
        let err = ExperimentConfig::from_text("n_antennas = eight\n").unwrap_err().to_string();
        assert!(err.contains("line 1") && err.contains("n_antennas"), "{err}");
        assert!(ExperimentConfig::from_text("no equals sign\n").is_err());
        assert!(ExperimentConfig::from_text("aperture_m = 1\nspacing_m = 0.1\n").is_err());
        assert!(ExperimentConfig::from_text("sweep = distance\n").is_err());
        assert!(ExperimentConfig::from_text(
            "sweep = distance\nsweep_start = 0\nsweep_stop = 5\nsweep_spacing = log\n"
        )
        .is_err());
        assert!(ExperimentConfig::from_text("trials = 0\n").is_err());
        assert!(ExperimentConfig::from_text("sweep = location_grid\nsweep_start = 0.1\n").is_err());
    }

    #[test]
    fn overrides_win() {
        let mut c = ExperimentConfig::from_text("n_antennas = 8\naperture_m = 2\n").unwrap();
        c.merge_pairs([("--n-antennas", "n_antennas", "16"), ("--spacing-m", "spacing_m", "0.1")]).unwrap();
        assert_eq!((c.n_antennas, c.array_size), (16, ArraySize::Spacing(0.1)));
        let err = c.merge_pairs([("--r-m", "r_m", "-1")]).unwrap_err().to_string();
        assert!(err.contains("r_m"), "{err}");
    }

    #[test]
    fn collapsed_sweep_has_one_point() {
        let c = ExperimentConfig::from_text("sweep = distance\nsweep_start = 30\n").unwrap();
        let pts = c.points();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].r_m, 30.0);
    }

    #[test]
    fn location_grid_expands_to_a_product() {
        let c = ExperimentConfig::from_text(
            "sweep = location_grid\nsweep_start = 0.5\nsweep_stop = 2.5\nsweep_points = 3\n\
             grid_r_start = 2\ngrid_r_stop = 6\ngrid_r_points = 5\n",
        )
        .unwrap();
        let pts = c.points();
        assert_eq!(pts.len(), 15);
        assert_eq!((pts[0].theta_rad, pts[0].r_m), (0.5, 2.0));
        assert_eq!((pts[6].theta_rad, pts[6].r_m), (1.5, 3.0));
    }

    #[test]
    fn matched_spacing_equalizes_apertures() {
        let c = ExperimentConfig::from_text("spacing_m = 0.01\nmatched_spacing = true\nn_antennas = 64\n").unwrap();
        let ula = c.geometry(ArrayKind::Ula).unwrap();
        let uca = c.geometry(ArrayKind::Uca).unwrap();
        assert!((ula.nominal_aperture() - uca.aperture()).abs() < 1e-12);
    }

    #[test]
    fn every_listed_key_is_accepted() {
        for key in KEYS {
            let value = match *key {
                "geometry" => "uca",
                "model" => "accurate",
                "method" => "closed",
                "sweep" => "none",
                "sweep_spacing" => "log",
                "matched_spacing" => "true",
                "out" => "x.csv",
                "figure" => "fig5",
                _ => "3",
            };
            let mut c = ExperimentConfig::default();
            let mut p = c.pending();
            c.set(&mut p, key, value).unwrap_or_else(|e| panic!("{key}: {e}"));
        }
    }
}
