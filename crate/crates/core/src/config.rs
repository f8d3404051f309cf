//! Run configuration: a flat `key = value` document with `#` comments.
//!
//! ```text
//! # reference channel, Markov source
//! t_sym = 0.4
//! scenario = crr-isia
//! grid_step = 0.02
//! ```
//!
//! Physical keys accept a long and a short spelling (`distance` or `d`,
//! `noise_std` or `sigma_E`, ...). Unknown keys, repeated keys and values
//! violating a model invariant are rejected.

use std::path::PathBuf;

use crate::info::Scenario;
use crate::montecarlo::TailPolicy;
use crate::optimize::SearchSettings;
use crate::physics::SystemParams;
use crate::{Error, Result};

/// Everything a command needs, validated up front.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: SystemParams,
    /// `None` means "all four" for `sweep` and `crr-isia` elsewhere.
    pub scenario: Option<Scenario>,
    pub t_sym: f64,
    pub t_sym_min: f64,
    pub t_sym_max: f64,
    pub t_sym_step: f64,
    pub grid_step: f64,
    pub search: SearchSettings,
    /// Fixed detector threshold; optimised when absent.
    pub tau: Option<f64>,
    pub p: f64,
    pub q: f64,
    pub lambda0: f64,
    pub n_symbols: usize,
    pub seed: u64,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub time_resolution: f64,
    pub tail: TailPolicy,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: SystemParams::default(),
            scenario: None,
            t_sym: 1.0,
            t_sym_min: 0.2,
            t_sym_max: 1.5,
            t_sym_step: 0.05,
            grid_step: 0.01,
            search: SearchSettings::default(),
            tau: None,
            p: 0.5,
            q: 0.5,
            lambda0: 0.5,
            n_symbols: 100_000,
            seed: 0,
            workers: 0,
            out: None,
            time_resolution: 1e-4,
            tail: TailPolicy::Truthful,
        }
    }
}

impl RunConfig {
    /// Scenario for single-scenario commands.
    pub fn scenario_or_default(&self) -> Scenario {
        self.scenario.unwrap_or(Scenario::CRR_ISIA)
    }

    /// Checks every field; the error names the offending key.
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        let positive = [
            ("t_sym", self.t_sym),
            ("t_sym_min", self.t_sym_min),
            ("t_sym_step", self.t_sym_step),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, "must be finite and > 0"));
            }
        }
        if !(self.t_sym_max.is_finite() && self.t_sym_max >= self.t_sym_min) {
            return Err(Error::invalid("t_sym_max", "must be >= t_sym_min"));
        }
        if !(self.grid_step > 0.0 && self.grid_step <= 0.5) {
            return Err(Error::invalid("grid_step", "must lie in (0, 0.5]"));
        }
        if self.search.coarse_steps < 16 {
            return Err(Error::invalid("tau_coarse_steps", "must be >= 16"));
        }
        if let Some(t) = self.tau {
            if !t.is_finite() {
                return Err(Error::invalid("tau", "must be finite"));
            }
        }
        for (name, v) in [("p", self.p), ("q", self.q), ("lambda0", self.lambda0)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid(name, "must lie in [0, 1]"));
            }
        }
        if self.n_symbols == 0 {
            return Err(Error::invalid("n_symbols", "must be >= 1"));
        }
        if !(self.time_resolution > 0.0 && self.time_resolution <= 1e-4) {
            return Err(Error::invalid("time_resolution", "must lie in (0, 1e-4]"));
        }
        Ok(())
    }
}

fn parse_value<T: std::str::FromStr>(line: usize, key: &str, raw: &str) -> Result<T> {
    raw.parse()
        .map_err(|_| Error::Config { line, message: format!("cannot parse `{raw}` for `{key}`") })
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut seen: Vec<&'static str> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::Config { line, message: "expected `key = value`".into() });
        };
        let (key, value) = (key.trim(), value.trim());
        let canonical = set_key(&mut cfg, line, key, value)?;
        if seen.contains(&canonical) {
            return Err(Error::Config { line, message: format!("duplicate key `{key}`") });
        }
        seen.push(canonical);
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Assigns one key and returns its canonical name.
fn set_key(cfg: &mut RunConfig, line: usize, key: &str, value: &str) -> Result<&'static str> {
    let f = |v: &str| parse_value::<f64>(line, key, v);
    let p = &mut cfg.params;
    let name = match key {
        "n_released" | "N_T" => {
            p.n_released = f(value)?;
            "n_released"
        }
        "receiver_radius" | "R" => {
            p.receiver_radius = f(value)?;
            "receiver_radius"
        }
        "distance" | "d" => {
            p.distance = f(value)?;
            "distance"
        }
        "diffusion_coeff" | "D" => {
            p.diffusion_coeff = f(value)?;
            "diffusion_coeff"
        }
        "noise_mean" | "mu_E" => {
            p.noise_mean = f(value)?;
            "noise_mean"
        }
        "noise_std" | "sigma_E" => {
            p.noise_std = f(value)?;
            "noise_std"
        }
        "alpha" => {
            p.alpha = f(value)?;
            "alpha"
        }
        "memory_cap" => {
            p.memory_cap = parse_value(line, key, value)?;
            "memory_cap"
        }
        "scenario" => {
            cfg.scenario = match value {
                "all" => None,
                s => Some(s.parse()?),
            };
            "scenario"
        }
        "t_sym" => {
            cfg.t_sym = f(value)?;
            "t_sym"
        }
        "t_sym_min" => {
            cfg.t_sym_min = f(value)?;
            "t_sym_min"
        }
        "t_sym_max" => {
            cfg.t_sym_max = f(value)?;
            "t_sym_max"
        }
        "t_sym_step" => {
            cfg.t_sym_step = f(value)?;
            "t_sym_step"
        }
        "grid_step" => {
            cfg.grid_step = f(value)?;
            "grid_step"
        }
        "tau_coarse_steps" => {
            cfg.search.coarse_steps = parse_value(line, key, value)?;
            "tau_coarse_steps"
        }
        "tau_refine_rounds" => {
            cfg.search.refine_rounds = parse_value(line, key, value)?;
            "tau_refine_rounds"
        }
        "tau" => {
            cfg.tau = Some(f(value)?);
            "tau"
        }
        "p" => {
            cfg.p = f(value)?;
            "p"
        }
        "q" => {
            cfg.q = f(value)?;
            "q"
        }
        "lambda0" => {
            cfg.lambda0 = f(value)?;
            "lambda0"
        }
        "n_symbols" => {
            cfg.n_symbols = parse_value(line, key, value)?;
            "n_symbols"
        }
        "seed" => {
            cfg.seed = parse_value(line, key, value)?;
            "seed"
        }
        "workers" => {
            cfg.workers = parse_value(line, key, value)?;
            "workers"
        }
        "out" => {
            cfg.out = Some(PathBuf::from(value));
            "out"
        }
        "time_resolution" => {
            cfg.time_resolution = f(value)?;
            "time_resolution"
        }
        "tail" => {
            cfg.tail = match value {
                "truthful" => TailPolicy::Truthful,
                "within-memory" => TailPolicy::WithinMemory,
                _ => {
                    return Err(Error::Config {
                        line,
                        message: format!("`tail` must be truthful or within-memory, got `{value}`"),
                    })
                }
            };
            "tail"
        }
        _ => return Err(Error::Config { line, message: format!("unknown key `{key}`") }),
    };
    Ok(name)
}
