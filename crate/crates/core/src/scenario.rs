//! Scenario files for the `dmasim` runner.
//!
//! A scenario is a flat list of `section.key = value` lines; `#` starts a
//! comment. Angles are given in degrees and frequencies in GHz or MHz as the
//! key suffix says; everything is converted to SI units once, here. Missing
//! keys take the reference values.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{DmaDesign, SPEED_OF_LIGHT};
use crate::planner::{design_sector, SectorDesign};
use crate::rate::LinkBudget;
use crate::training::{delta_from_db, ArrayLayout, CodebookOptions};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Auto<T> {
    Auto,
    Value(T),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Damping {
    /// Quality factor at the band center, `Γ = 2π f_c / Q`.
    Quality(f64),
    Hz(f64),
}

/// Gain threshold as written by the user; the linear value is derived.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Threshold {
    Linear(f64),
    Db(f64),
}

impl Threshold {
    pub fn linear(self) -> f64 {
        match self {
            Threshold::Linear(v) => v,
            Threshold::Db(db) => delta_from_db(db),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scenario {
    pub n_y: usize,
    pub n_z: usize,
    /// Slot spacing in units of `λ_c`.
    pub d_y_lambda: Auto<f64>,
    pub n_g: Auto<f64>,
    pub n_g_max: Option<f64>,
    pub damping: Damping,
    pub coupling: f64,
    pub f_min: f64,
    pub f_max: f64,
    /// Waveguide attenuation in Np/m used when attenuation is on.
    pub attenuation: f64,
    pub p_star: u32,

    pub phi_lower: f64,
    pub phi_upper: f64,

    pub tx_power: f64,
    pub distance: f64,
    pub noise_temp: f64,
    pub bandwidth: f64,
    pub subcarriers: usize,

    pub groups: Auto<usize>,
    pub delta: Threshold,
    pub pilots: usize,
    pub codebook_phi_max: f64,
    pub psi_decimals: Option<u32>,

    pub sweep_phi_min: f64,
    pub sweep_phi_max: f64,
    pub sweep_phi_step: f64,
    pub freq_points: usize,
    pub rate_bandwidths: Vec<f64>,
    pub tr_bandwidths: Vec<f64>,
    pub tuning_ranges: Vec<f64>,
    pub rate_angles: usize,
    pub train_angles: usize,
    pub coverage_ng: Vec<f64>,
    pub coverage_points: usize,
    pub coverage_max_fraction: f64,
    pub with_attenuation: bool,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            n_y: 8,
            n_z: 4,
            d_y_lambda: Auto::Auto,
            n_g: Auto::Auto,
            n_g_max: None,
            damping: Damping::Quality(50.0),
            coupling: 1e-9,
            f_min: 12e9,
            f_max: 18e9,
            attenuation: 2.0,
            p_star: 1,
            phi_lower: (-30f64).to_radians(),
            phi_upper: 30f64.to_radians(),
            tx_power: 0.25,
            distance: 500.0,
            noise_temp: 290.0,
            bandwidth: 300e6,
            subcarriers: 64,
            groups: Auto::Value(4),
            delta: Threshold::Db(3.0),
            pilots: 256,
            codebook_phi_max: 30f64.to_radians(),
            psi_decimals: Some(3),
            sweep_phi_min: (-60f64).to_radians(),
            sweep_phi_max: 60f64.to_radians(),
            sweep_phi_step: 0.5f64.to_radians(),
            freq_points: 1201,
            rate_bandwidths: vec![10e6, 30e6, 100e6, 300e6, 1e9],
            tr_bandwidths: vec![100e6, 300e6, 1e9],
            tuning_ranges: (1..=8).map(|g| g as f64 * 1e9).collect(),
            rate_angles: 181,
            train_angles: 500,
            coverage_ng: vec![2.5, 4.0],
            coverage_points: 101,
            coverage_max_fraction: 0.5,
            with_attenuation: true,
        }
    }
}

fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn number(key: &str, raw: &str) -> Result<f64> {
    let v: f64 = raw
        .parse()
        .map_err(|_| config(format!("{key}: `{raw}` is not a number")))?;
    if !v.is_finite() {
        return Err(config(format!("{key}: `{raw}` is not finite")));
    }
    Ok(v)
}

fn integer(key: &str, raw: &str) -> Result<usize> {
    raw.parse()
        .map_err(|_| config(format!("{key}: `{raw}` is not a non-negative integer")))
}

fn list(key: &str, raw: &str, scale: f64) -> Result<Vec<f64>> {
    raw.split(',')
        .map(|item| number(key, item.trim()).map(|v| v * scale))
        .collect()
}

fn flag(key: &str, raw: &str) -> Result<bool> {
    match raw {
        "on" | "true" => Ok(true),
        "off" | "false" => Ok(false),
        _ => Err(config(format!("{key}: expected on/off, got `{raw}`"))),
    }
}

fn threshold(key: &str, raw: &str) -> Result<Threshold> {
    let lower = raw.to_ascii_lowercase();
    match lower.strip_suffix("db") {
        Some(v) => Ok(Threshold::Db(number(key, v.trim())?)),
        None => Ok(Threshold::Linear(number(key, raw)?)),
    }
}

fn fmt_list(values: &[f64], scale: f64) -> String {
    values
        .iter()
        .map(|v| format!("{}", v / scale))
        .collect::<Vec<_>>()
        .join(", ")
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config(format!("line {}: expected `key = value`", lineno + 1)))?;
            let key = key.trim().to_string();
            if entries.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(config(format!("duplicate key {key}")));
            }
        }

        let mut s = Self::default();
        let deg = |key: &str, raw: &str| number(key, raw).map(f64::to_radians);
        for (key, raw) in &entries {
            let k = key.as_str();
            let raw = raw.as_str();
            match k {
                "design.n_y" => s.n_y = integer(k, raw)?,
                "design.n_z" => s.n_z = integer(k, raw)?,
                "design.d_y_lambda" => {
                    s.d_y_lambda = if raw == "auto" { Auto::Auto } else { Auto::Value(number(k, raw)?) }
                }
                "design.n_g" => s.n_g = if raw == "auto" { Auto::Auto } else { Auto::Value(number(k, raw)?) },
                "design.n_g_max" => s.n_g_max = if raw == "none" { None } else { Some(number(k, raw)?) },
                "design.q" => s.damping = Damping::Quality(number(k, raw)?),
                "design.gamma_hz" => s.damping = Damping::Hz(number(k, raw)?),
                "design.coupling_m3" => s.coupling = number(k, raw)?,
                "design.f_min_ghz" => s.f_min = number(k, raw)? * 1e9,
                "design.f_max_ghz" => s.f_max = number(k, raw)? * 1e9,
                "design.attenuation_np_per_m" => s.attenuation = number(k, raw)?,
                "design.p_star" => {
                    s.p_star = u32::try_from(integer(k, raw)?).map_err(|_| config("design.p_star too large"))?
                }
                "sector.phi_lower_deg" => s.phi_lower = deg(k, raw)?,
                "sector.phi_upper_deg" => s.phi_upper = deg(k, raw)?,
                "budget.tx_power_w" => s.tx_power = number(k, raw)?,
                "budget.distance_m" => s.distance = number(k, raw)?,
                "budget.noise_temp_k" => s.noise_temp = number(k, raw)?,
                "budget.bandwidth_mhz" => s.bandwidth = number(k, raw)? * 1e6,
                "budget.subcarriers" => s.subcarriers = integer(k, raw)?,
                "training.groups" => {
                    s.groups = if raw == "auto" { Auto::Auto } else { Auto::Value(integer(k, raw)?) }
                }
                "training.delta" => s.delta = threshold(k, raw)?,
                "training.pilots" => s.pilots = integer(k, raw)?,
                "training.phi_max_deg" => s.codebook_phi_max = deg(k, raw)?,
                "training.psi_decimals" => {
                    s.psi_decimals = if raw == "exact" {
                        None
                    } else {
                        Some(u32::try_from(integer(k, raw)?).map_err(|_| config("psi_decimals too large"))?)
                    }
                }
                "sweep.phi_min_deg" => s.sweep_phi_min = deg(k, raw)?,
                "sweep.phi_max_deg" => s.sweep_phi_max = deg(k, raw)?,
                "sweep.phi_step_deg" => s.sweep_phi_step = deg(k, raw)?,
                "sweep.freq_points" => s.freq_points = integer(k, raw)?,
                "sweep.bandwidths_mhz" => s.rate_bandwidths = list(k, raw, 1e6)?,
                "sweep.tr_bandwidths_mhz" => s.tr_bandwidths = list(k, raw, 1e6)?,
                "sweep.tuning_ranges_ghz" => s.tuning_ranges = list(k, raw, 1e9)?,
                "sweep.rate_angles" => s.rate_angles = integer(k, raw)?,
                "sweep.train_angles" => s.train_angles = integer(k, raw)?,
                "sweep.coverage_ng" => s.coverage_ng = list(k, raw, 1.0)?,
                "sweep.coverage_points" => s.coverage_points = integer(k, raw)?,
                "sweep.coverage_max_fraction" => s.coverage_max_fraction = number(k, raw)?,
                "sweep.attenuation" => s.with_attenuation = flag(k, raw)?,
                _ => return Err(config(format!("unknown key {k}"))),
            }
        }
        s.validate()?;
        Ok(s)
    }

    /// Canonical text form; `parse(to_text())` reproduces the scenario.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        let auto = |v: Auto<f64>| match v {
            Auto::Auto => "auto".to_string(),
            Auto::Value(x) => format!("{x}"),
        };
        line("design.n_y", self.n_y.to_string());
        line("design.n_z", self.n_z.to_string());
        line("design.d_y_lambda", auto(self.d_y_lambda));
        line("design.n_g", auto(self.n_g));
        line("design.n_g_max", self.n_g_max.map_or("none".into(), |v| format!("{v}")));
        match self.damping {
            Damping::Quality(q) => line("design.q", format!("{q}")),
            Damping::Hz(g) => line("design.gamma_hz", format!("{g}")),
        }
        line("design.coupling_m3", format!("{}", self.coupling));
        line("design.f_min_ghz", format!("{}", self.f_min / 1e9));
        line("design.f_max_ghz", format!("{}", self.f_max / 1e9));
        line("design.attenuation_np_per_m", format!("{}", self.attenuation));
        line("design.p_star", self.p_star.to_string());
        line("sector.phi_lower_deg", format!("{}", self.phi_lower.to_degrees()));
        line("sector.phi_upper_deg", format!("{}", self.phi_upper.to_degrees()));
        line("budget.tx_power_w", format!("{}", self.tx_power));
        line("budget.distance_m", format!("{}", self.distance));
        line("budget.noise_temp_k", format!("{}", self.noise_temp));
        line("budget.bandwidth_mhz", format!("{}", self.bandwidth / 1e6));
        line("budget.subcarriers", self.subcarriers.to_string());
        line(
            "training.groups",
            match self.groups {
                Auto::Auto => "auto".into(),
                Auto::Value(l) => l.to_string(),
            },
        );
        line(
            "training.delta",
            match self.delta {
                Threshold::Linear(v) => format!("{v}"),
                Threshold::Db(db) => format!("{db} dB"),
            },
        );
        line("training.pilots", self.pilots.to_string());
        line("training.phi_max_deg", format!("{}", self.codebook_phi_max.to_degrees()));
        line(
            "training.psi_decimals",
            self.psi_decimals.map_or("exact".into(), |d| d.to_string()),
        );
        line("sweep.phi_min_deg", format!("{}", self.sweep_phi_min.to_degrees()));
        line("sweep.phi_max_deg", format!("{}", self.sweep_phi_max.to_degrees()));
        line("sweep.phi_step_deg", format!("{}", self.sweep_phi_step.to_degrees()));
        line("sweep.freq_points", self.freq_points.to_string());
        line("sweep.bandwidths_mhz", fmt_list(&self.rate_bandwidths, 1e6));
        line("sweep.tr_bandwidths_mhz", fmt_list(&self.tr_bandwidths, 1e6));
        line("sweep.tuning_ranges_ghz", fmt_list(&self.tuning_ranges, 1e9));
        line("sweep.rate_angles", self.rate_angles.to_string());
        line("sweep.train_angles", self.train_angles.to_string());
        line("sweep.coverage_ng", fmt_list(&self.coverage_ng, 1.0));
        line("sweep.coverage_points", self.coverage_points.to_string());
        line("sweep.coverage_max_fraction", format!("{}", self.coverage_max_fraction));
        line("sweep.attenuation", if self.with_attenuation { "on" } else { "off" }.into());
        out
    }

    /// First 16 hex digits of the SHA-256 of the canonical text.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        hex::encode(digest)[..16].to_string()
    }

    pub fn center_frequency(&self) -> f64 {
        0.5 * (self.f_min + self.f_max)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(config(format!("{name} must be > 0, got {v}")))
            }
        };
        if self.n_y == 0 || self.n_z == 0 {
            return Err(config("design.n_y and design.n_z must be >= 1"));
        }
        if let Auto::Value(v) = self.d_y_lambda {
            positive("design.d_y_lambda", v)?;
        }
        if let Auto::Value(v) = self.n_g {
            if !(v >= 1.0 && v.is_finite()) {
                return Err(config(format!("design.n_g must be >= 1, got {v}")));
            }
        }
        if let Some(v) = self.n_g_max {
            positive("design.n_g_max", v)?;
        }
        match self.damping {
            Damping::Quality(q) => positive("design.q", q)?,
            Damping::Hz(g) => positive("design.gamma_hz", g)?,
        }
        positive("design.coupling_m3", self.coupling)?;
        positive("design.f_min_ghz", self.f_min)?;
        if !(self.f_max > self.f_min) {
            return Err(config("design.f_max_ghz must exceed design.f_min_ghz"));
        }
        if !(self.attenuation >= 0.0) {
            return Err(config("design.attenuation_np_per_m must be >= 0"));
        }
        if self.p_star == 0 {
            return Err(config("design.p_star must be >= 1"));
        }
        let right = std::f64::consts::FRAC_PI_2;
        if !(self.phi_lower < self.phi_upper && self.phi_lower > -right && self.phi_upper < right) {
            return Err(config("sector must satisfy -90 < phi_lower < phi_upper < 90 degrees"));
        }
        for (name, v) in [
            ("budget.tx_power_w", self.tx_power),
            ("budget.distance_m", self.distance),
            ("budget.noise_temp_k", self.noise_temp),
            ("budget.bandwidth_mhz", self.bandwidth),
        ] {
            positive(name, v)?;
        }
        if self.subcarriers == 0 {
            return Err(config("budget.subcarriers must be >= 1"));
        }
        if let Auto::Value(l) = self.groups {
            if l == 0 || self.n_z % l != 0 {
                return Err(config(format!("training.groups = {l} must divide design.n_z = {}", self.n_z)));
            }
        }
        let delta = self.delta.linear();
        if !(delta > 0.0 && delta < 1.0) {
            return Err(config(format!("training.delta must be in (0, 1) linear, got {delta}")));
        }
        if self.pilots < 2 {
            return Err(config("training.pilots must be >= 2"));
        }
        if !(self.codebook_phi_max > 0.0 && self.codebook_phi_max < right) {
            return Err(config("training.phi_max_deg must be in (0, 90)"));
        }
        if !(self.sweep_phi_min <= self.sweep_phi_max) || !(self.sweep_phi_step > 0.0) {
            return Err(config("sweep angle grid must have min <= max and step > 0"));
        }
        if self.sweep_phi_min <= -right || self.sweep_phi_max >= right {
            return Err(config("sweep angles must stay inside (-90, 90) degrees"));
        }
        if self.freq_points < 2 || self.rate_angles == 0 || self.train_angles == 0 || self.coverage_points < 2 {
            return Err(config("sweep point counts must be positive (frequency and coverage grids >= 2)"));
        }
        for (name, values) in [
            ("sweep.bandwidths_mhz", &self.rate_bandwidths),
            ("sweep.tr_bandwidths_mhz", &self.tr_bandwidths),
            ("sweep.tuning_ranges_ghz", &self.tuning_ranges),
            ("sweep.coverage_ng", &self.coverage_ng),
        ] {
            if values.is_empty() {
                return Err(config(format!("{name} must not be empty")));
            }
            for &v in values {
                positive(name, v)?;
            }
        }
        let f_c = self.center_frequency();
        if self.tuning_ranges.iter().any(|&t| t >= 2.0 * f_c) {
            return Err(config("sweep.tuning_ranges_ghz must stay below twice the center frequency"));
        }
        if self.rate_bandwidths.iter().chain(&self.tr_bandwidths).chain([&self.bandwidth]).any(|&b| b >= 2.0 * self.f_min) {
            return Err(config("bandwidths must keep every subcarrier above 0 Hz"));
        }
        positive("sweep.coverage_max_fraction", self.coverage_max_fraction)?;
        Ok(())
    }

    /// `n_g*` and `d_y*` for the configured sector.
    pub fn sector_design(&self) -> Result<SectorDesign> {
        design_sector(self.phi_lower, self.phi_upper, self.f_min, self.f_max, self.p_star)
    }

    /// Copy with every `auto` design field replaced by its resolved value.
    pub fn resolved(&self) -> Result<Self> {
        let mut out = self.clone();
        if matches!(self.n_g, Auto::Auto) || matches!(self.d_y_lambda, Auto::Auto) {
            let sector = self.sector_design()?;
            if let Some(cap) = self.n_g_max {
                if sector.n_g_star > cap {
                    return Err(Error::InfeasibleDesign(format!(
                        "sector needs n_g* = {} above the cap {cap}",
                        sector.n_g_star
                    )));
                }
            }
            if matches!(self.n_g, Auto::Auto) {
                out.n_g = Auto::Value(sector.n_g_star);
            }
            if matches!(self.d_y_lambda, Auto::Auto) {
                let lambda_c = SPEED_OF_LIGHT / self.center_frequency();
                out.d_y_lambda = Auto::Value(sector.d_y_star / lambda_c);
            }
        }
        Ok(out)
    }

    /// Single-waveguide design on the configured band.
    pub fn design(&self) -> Result<DmaDesign> {
        self.design_on_band(self.f_min, self.f_max)
    }

    /// Same geometry with a different tuning band.
    pub fn design_on_band(&self, f_min: f64, f_max: f64) -> Result<DmaDesign> {
        let r = self.resolved()?;
        let (Auto::Value(n_g), Auto::Value(d_y_lambda)) = (r.n_g, r.d_y_lambda) else {
            return Err(Error::Internal("unresolved design".into()));
        };
        let f_c = self.center_frequency();
        let damping = match self.damping {
            Damping::Quality(q) => std::f64::consts::TAU * f_c / q,
            Damping::Hz(g) => g,
        };
        let spacing = d_y_lambda * SPEED_OF_LIGHT / f_c;
        DmaDesign::new(self.n_y, spacing, n_g, damping, self.coupling, f_min, f_max)?
            .with_attenuation(self.attenuation)
    }

    pub fn budget(&self, center: f64) -> Result<LinkBudget> {
        LinkBudget::new(self.tx_power, self.distance, self.noise_temp, self.bandwidth, self.subcarriers, center)
    }

    pub fn codebook_options(&self) -> CodebookOptions {
        CodebookOptions {
            sectors: match self.groups {
                Auto::Auto => None,
                Auto::Value(l) => Some(l),
            },
            psi_decimals: self.psi_decimals,
        }
    }

    /// Array layout once the sector count is known.
    pub fn layout(&self, design: DmaDesign, groups: usize) -> Result<ArrayLayout> {
        if groups == 0 || self.n_z % groups != 0 {
            return Err(Error::InfeasibleDesign(format!(
                "{groups} sectors cannot be split over {} waveguides",
                self.n_z
            )));
        }
        ArrayLayout::new(self.n_z, design, groups)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve_to_reference_design() {
        let s = Scenario::default();
        let d = s.design().unwrap();
        let r = DmaDesign::reference();
        assert!((d.refractive_index() - 2.5).abs() < 1e-12);
        assert!((d.spacing() - r.spacing()).abs() < 1e-15);
        assert!((d.damping() - r.damping()).abs() < 1e-3);
        assert_eq!(s.delta.linear(), delta_from_db(3.0));
    }

    #[test]
    fn parse_overrides_and_units() {
        let s = Scenario::parse(
            "# comment\ndesign.n_y = 4\ndesign.f_min_ghz = 13 # trailing\nsector.phi_lower_deg = -20\ntraining.delta = 0.6 dB\ntraining.groups = 2\nsweep.bandwidths_mhz = 10, 20\n",
        )
        .unwrap();
        assert_eq!(s.n_y, 4);
        assert_eq!(s.f_min, 13e9);
        assert!((s.phi_lower + 20f64.to_radians()).abs() < 1e-15);
        assert_eq!(s.delta, Threshold::Db(0.6));
        assert_eq!(s.groups, Auto::Value(2));
        assert_eq!(s.rate_bandwidths, vec![10e6, 20e6]);
        assert_eq!(Scenario::parse("training.delta = 0.5").unwrap().delta, Threshold::Linear(0.5));
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "design.q = -50",
            "design.gamma_hz = -1",
            "unknown.key = 1",
            "design.n_y = 8\ndesign.n_y = 4",
            "design.n_y = eight",
            "no equals sign",
            "training.groups = 3",
            "training.delta = 1.5",
            "sector.phi_lower_deg = 10\nsector.phi_upper_deg = 10",
            "design.f_min_ghz = 19",
            "sweep.attenuation = maybe",
        ] {
            assert!(matches!(Scenario::parse(text), Err(Error::Config(_))), "{text}");
        }
    }

    #[test]
    fn text_round_trip() {
        let s = Scenario::parse("design.n_g = 3.1\ntraining.delta = 0.45\ntraining.psi_decimals = exact\ndesign.gamma_hz = 1e9").unwrap();
        let again = Scenario::parse(&s.to_text()).unwrap();
        assert_eq!(s, again);
        assert_eq!(s.to_text(), again.to_text());
        let resolved = Scenario::default().resolved().unwrap();
        assert_eq!(Scenario::parse(&resolved.to_text()).unwrap(), resolved);
    }

    #[test]
    fn fingerprint_tracks_content() {
        let a = Scenario::default();
        let b = Scenario::parse("design.n_y = 8").unwrap();
        let c = Scenario::parse("design.n_y = 6").unwrap();
        assert_eq!(a.fingerprint(), b.fingerprint());
        assert_ne!(a.fingerprint(), c.fingerprint());
        assert_eq!(a.fingerprint().len(), 16);
    }

    #[test]
    fn refractive_index_cap() {
        let s = Scenario::parse("design.n_g_max = 2").unwrap();
        assert!(matches!(s.resolved(), Err(Error::InfeasibleDesign(_))));
        let s = Scenario::parse("design.n_g_max = 2\ndesign.n_g = 1.8\ndesign.d_y_lambda = 0.4").unwrap();
        assert!(s.resolved().is_ok());
    }
}
