//! Run configuration: a flat key-value text format plus validation.
//!
//! Grammar: one `key = value` pair per line; `#` starts a comment; blank
//! lines are ignored; keys are lower_snake_case; list values are
//! comma-separated. Unknown keys are rejected so typos fail before any
//! computation starts. Command-line flags override file values.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::comb::{parse_comb, uniform_comb, FrequencyComb};
use crate::ensemble::DisorderKind;
use crate::error::{Error, Result};

const TAU: f64 = std::f64::consts::TAU;

/// Everything a command needs: comb, pulse, disorder, sweep grids, thermal
/// manifold, output location and seeding.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Teeth count of a uniform comb (odd).
    pub n_teeth: usize,
    /// Comb spacing (rad/us).
    pub delta: f64,
    /// Tooth width (rad/us).
    pub gamma: f64,
    /// Total optical depth alpha*L at unit length.
    pub total_depth: f64,
    /// External comb file; overrides the uniform comb parameters.
    pub comb_file: Option<PathBuf>,
    /// Pulse spectral width (rad/us); defaults to 2 * delta.
    pub sigma: Option<f64>,
    /// Propagation length in units of the unit length.
    pub l_scale: f64,
    /// Disorder kind for simulate/sweeps.
    pub kind: DisorderKind,
    /// Single disorder strength (gamma units for spacing, absolute for depth).
    pub strength: f64,
    /// Strength grid for sweeps.
    pub strengths: Vec<f64>,
    /// Finesse grid for sweeps.
    pub finesses: Vec<f64>,
    /// Length grid for length sweeps / backward estimation.
    pub lengths: Vec<f64>,
    /// Temperatures for the thermal command (kelvin).
    pub temperatures: Vec<f64>,
    /// Total ground-manifold span E_max/hbar - E_min/hbar (rad/us).
    pub ground_span: f64,
    /// Monte-Carlo trial count.
    pub trials: usize,
    /// Master seed for exact replay.
    pub seed: u64,
    /// Output directory.
    pub out_dir: PathBuf,
    /// Emit SVG plots next to the CSVs.
    pub plot: bool,
    /// Residual gate threshold for the backward fit.
    pub gate_threshold: f64,
    /// Length-sweep CSV consumed by fit-backward (instead of simulating).
    pub fit_input: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_teeth: 7,
            delta: TAU * 100.0,
            gamma: TAU * 5.0,
            total_depth: 30.0,
            comb_file: None,
            sigma: None,
            l_scale: 1.0,
            kind: DisorderKind::Spacing,
            strength: 0.0,
            strengths: vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
            finesses: vec![20.0, 60.0, 100.0],
            lengths: Vec::new(),
            temperatures: vec![4.0, 100.0, 300.0],
            ground_span: TAU * 3.0e5,
            trials: 500,
            seed: 1,
            out_dir: PathBuf::from("iafc-out"),
            plot: false,
            gate_threshold: crate::fit::DEFAULT_RESIDUAL_GATE,
            fit_input: None,
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|_| Error::Parse(format!("key `{key}`: `{v}` is not a number")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_f64(key, s))
        .collect()
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Parse(format!("key `{key}`: `{v}` is not a boolean"))),
    }
}

impl RunConfig {
    /// Parses the flat key-value format, starting from defaults.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    /// Reads a config file and applies it over the current values.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Validation(format!("cannot read config {}: {e}", path.display()))
        })?;
        self.apply_text(&text)
    }

    /// Applies `key = value` lines over the current values.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!(
                    "config line {}: expected `key = value`",
                    lineno + 1
                ))
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Sets one key. Unknown keys are rejected.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "n_teeth" => {
                self.n_teeth = value
                    .parse()
                    .map_err(|_| Error::Parse(format!("n_teeth: `{value}` is not a count")))?;
            }
            "delta" => self.delta = parse_f64(key, value)?,
            "gamma" => self.gamma = parse_f64(key, value)?,
            "total_depth" => self.total_depth = parse_f64(key, value)?,
            "comb_file" => self.comb_file = Some(PathBuf::from(value)),
            "sigma" => self.sigma = Some(parse_f64(key, value)?),
            "l_scale" => self.l_scale = parse_f64(key, value)?,
            "kind" => {
                self.kind = match value {
                    "spacing" => DisorderKind::Spacing,
                    "depth" => DisorderKind::Depth,
                    "none" => DisorderKind::None,
                    _ => {
                        return Err(Error::Parse(format!(
                            "kind: `{value}` is not spacing|depth|none"
                        )))
                    }
                };
            }
            "strength" => self.strength = parse_f64(key, value)?,
            "strengths" => self.strengths = parse_list(key, value)?,
            "finesses" => self.finesses = parse_list(key, value)?,
            "lengths" => self.lengths = parse_list(key, value)?,
            "temperatures" => self.temperatures = parse_list(key, value)?,
            "ground_span" => self.ground_span = parse_f64(key, value)?,
            "trials" => {
                self.trials = value
                    .parse()
                    .map_err(|_| Error::Parse(format!("trials: `{value}` is not a count")))?;
            }
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| Error::Parse(format!("seed: `{value}` is not a u64")))?;
            }
            "out_dir" => self.out_dir = PathBuf::from(value),
            "plot" => self.plot = parse_bool(key, value)?,
            "gate_threshold" => self.gate_threshold = parse_f64(key, value)?,
            "fit_input" => self.fit_input = Some(PathBuf::from(value)),
            other => {
                return Err(Error::Parse(format!("unknown config key `{other}`")));
            }
        }
        Ok(())
    }

    /// Pulse width: explicit value or the 2 * delta default that covers all
    /// seven teeth of the reference comb.
    pub fn sigma_value(&self) -> f64 {
        self.sigma.unwrap_or(2.0 * self.delta)
    }

    /// Builds the comb: from `comb_file` when given, else uniform from the
    /// four comb parameters.
    pub fn build_comb(&self) -> Result<FrequencyComb> {
        if let Some(path) = &self.comb_file {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::Validation(format!("cannot read comb file {}: {e}", path.display()))
            })?;
            return parse_comb(&text, path.display().to_string());
        }
        uniform_comb(self.n_teeth, self.delta, self.gamma, self.total_depth)
    }

    /// Checks every numeric field against the module preconditions it feeds.
    pub fn validate(&self) -> Result<()> {
        if self.comb_file.is_none() {
            if self.n_teeth == 0 || self.n_teeth.is_multiple_of(2) {
                return Err(Error::Validation(format!(
                    "n_teeth must be positive and odd, got {}",
                    self.n_teeth
                )));
            }
            if !(self.gamma > 0.0) {
                return Err(Error::Validation("gamma must be > 0".into()));
            }
            if self.n_teeth > 1 && self.delta <= self.gamma {
                return Err(Error::FinesseViolation {
                    delta: self.delta,
                    gamma: self.gamma,
                });
            }
            if !(self.total_depth >= 0.0) {
                return Err(Error::Validation("total_depth must be >= 0".into()));
            }
        }
        if let Some(s) = self.sigma {
            if !(s > 0.0) {
                return Err(Error::Validation("sigma must be > 0".into()));
            }
        }
        if !(self.l_scale >= 0.0) {
            return Err(Error::Validation("l_scale must be >= 0".into()));
        }
        if !(self.strength >= 0.0) {
            return Err(Error::Validation("strength must be >= 0".into()));
        }
        if self.trials == 0 {
            return Err(Error::Validation("trials must be >= 1".into()));
        }
        for &t in &self.temperatures {
            if !(t > 0.0) {
                return Err(Error::Validation(format!("temperature {t} must be > 0 K")));
            }
        }
        if !(self.ground_span >= 0.0) {
            return Err(Error::Validation("ground_span must be >= 0".into()));
        }
        if !(self.gate_threshold >= 0.0) {
            return Err(Error::Validation("gate_threshold must be >= 0".into()));
        }
        Ok(())
    }

    /// Renders the fully-resolved configuration back into the flat key-value
    /// format. Re-running a command on this text reproduces the run exactly.
    pub fn to_manifest(&self) -> String {
        let mut out = String::from("# iafc run manifest: replay with --config <this file>\n");
        let _ = writeln!(out, "n_teeth = {}", self.n_teeth);
        let _ = writeln!(out, "delta = {}", self.delta);
        let _ = writeln!(out, "gamma = {}", self.gamma);
        let _ = writeln!(out, "total_depth = {}", self.total_depth);
        if let Some(p) = &self.comb_file {
            let _ = writeln!(out, "comb_file = {}", p.display());
        }
        let _ = writeln!(out, "sigma = {}", self.sigma_value());
        let _ = writeln!(out, "l_scale = {}", self.l_scale);
        let _ = writeln!(out, "kind = {}", self.kind.as_str());
        let _ = writeln!(out, "strength = {}", self.strength);
        let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        if !self.strengths.is_empty() {
            let _ = writeln!(out, "strengths = {}", join(&self.strengths));
        }
        if !self.finesses.is_empty() {
            let _ = writeln!(out, "finesses = {}", join(&self.finesses));
        }
        if !self.lengths.is_empty() {
            let _ = writeln!(out, "lengths = {}", join(&self.lengths));
        }
        if !self.temperatures.is_empty() {
            let _ = writeln!(out, "temperatures = {}", join(&self.temperatures));
        }
        let _ = writeln!(out, "ground_span = {}", self.ground_span);
        let _ = writeln!(out, "trials = {}", self.trials);
        let _ = writeln!(out, "seed = {}", self.seed);
        let _ = writeln!(out, "gate_threshold = {}", self.gate_threshold);
        if let Some(p) = &self.fit_input {
            let _ = writeln!(out, "fit_input = {}", p.display());
        }
        let _ = writeln!(out, "plot = {}", self.plot);
        out
    }

    /// Common CSV metadata shared by every output of a run.
    pub fn metadata(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("iafc_version".into(), env!("CARGO_PKG_VERSION").into());
        m.insert("n_teeth".into(), self.n_teeth.to_string());
        m.insert("delta".into(), self.delta.to_string());
        m.insert("gamma".into(), self.gamma.to_string());
        m.insert("total_depth".into(), self.total_depth.to_string());
        m.insert("sigma".into(), self.sigma_value().to_string());
        m.insert("l_scale".into(), self.l_scale.to_string());
        m.insert("master_seed".into(), self.seed.to_string());
        m.insert("trials".into(), self.trials.to_string());
        if let Some(p) = &self.comb_file {
            m.insert("comb_file".into(), p.display().to_string());
        }
        m
    }
}
