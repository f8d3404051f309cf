//! Command surface shared by the `diffusion-air` binary and the tests.
//!
//! Each command writes one CSV document (to `out`, or to the supplied writer
//! when no path is configured) and returns a one-line summary.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::str::FromStr;

use crate::config::RunConfig;
use crate::detection::{build_transition_table, Detector};
use crate::info::{mutual_information, Scenario, SourceKind};
use crate::montecarlo::{cross_check, simulate_stream, SimConfig};
use crate::optimize::{
    air, air_surface, capacity, capacity_sweep, optimize_threshold, t_sym_grid, CapacityResult,
    InputGrid, SweepPoint, ThresholdSearch,
};
use crate::physics::{compute_cir, effective_memory, ChannelImpulseResponse};
use crate::source::{IndependentSource, MarkovSource, Source};
use crate::{Error, Result};

/// Formats a float with 9 significant digits, `%g` style.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Available subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Cir,
    Memory,
    Transitions,
    Mi,
    Capacity,
    Sweep,
    Surface,
    Simulate,
    Validate,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Cir,
        Command::Memory,
        Command::Transitions,
        Command::Mi,
        Command::Capacity,
        Command::Sweep,
        Command::Surface,
        Command::Simulate,
        Command::Validate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Cir => "cir",
            Command::Memory => "memory",
            Command::Transitions => "transitions",
            Command::Mi => "mi",
            Command::Capacity => "capacity",
            Command::Sweep => "sweep",
            Command::Surface => "surface",
            Command::Simulate => "simulate",
            Command::Validate => "validate",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::invalid("command", format!("unknown command `{s}`")))
    }
}

/// Machine-readable error line printed by the binary.
pub fn error_line(err: &Error) -> String {
    format!("error kind={} message=\"{}\"", err.kind(), err.to_string().replace('"', "'"))
}

fn source_for(kind: SourceKind, cfg: &RunConfig) -> Result<Source> {
    Ok(match kind {
        SourceKind::Markov => MarkovSource::new(cfg.p, cfg.q)?.into(),
        SourceKind::Independent => IndependentSource::new(cfg.lambda0)?.into(),
    })
}

fn threshold_for(
    cfg: &RunConfig,
    scenario: Scenario,
    cir: &ChannelImpulseResponse,
    src: &Source,
) -> Result<f64> {
    match cfg.tau {
        Some(t) => Ok(t),
        None => {
            let search = ThresholdSearch::covering(cir, &cfg.params, cfg.search)?;
            Ok(optimize_threshold(scenario, cir, &cfg.params, src, &search)?.tau)
        }
    }
}

fn sweep_row<W: Write>(out: &mut W, c: &CapacityResult) -> Result<()> {
    writeln!(
        out,
        "{},{},{},{},{},{},{},{}",
        fmt_sig(c.t_sym),
        c.scenario,
        c.memory,
        fmt_sig(c.air),
        fmt_sig(c.mi),
        fmt_sig(c.tau),
        fmt_sig(c.argmax.param1()),
        c.argmax.param2().map(fmt_sig).unwrap_or_default()
    )?;
    Ok(())
}

const SWEEP_HEADER: &str = "t_sym,scenario,M,capacity_bits_per_s,mi_bits_per_use,tau,param1,param2";

fn describe(c: &CapacityResult) -> String {
    let arg = match c.argmax.param2() {
        Some(p2) => format!("({}, {})", fmt_sig(c.argmax.param1()), fmt_sig(p2)),
        None => fmt_sig(c.argmax.param1()),
    };
    format!(
        "{} t_sym={} M={} capacity={} bit/s at {arg}",
        c.scenario,
        fmt_sig(c.t_sym),
        c.memory,
        fmt_sig(c.air)
    )
}

/// Runs `cmd`; the CSV goes to `cfg.out` if set, otherwise to `stdout`.
pub fn run_command<W: Write>(cmd: Command, cfg: &RunConfig, stdout: &mut W) -> Result<String> {
    cfg.validate()?;
    match &cfg.out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            let summary = execute(cmd, cfg, &mut file);
            file.flush()?;
            summary
        }
        None => execute(cmd, cfg, stdout),
    }
}

fn execute<W: Write>(cmd: Command, cfg: &RunConfig, out: &mut W) -> Result<String> {
    let params = &cfg.params;
    let scenario = cfg.scenario_or_default();
    match cmd {
        Command::Cir => {
            let cir = compute_cir(params, cfg.t_sym)?;
            writeln!(out, "interval,t_end,h")?;
            for (i, h) in cir.taps().iter().enumerate() {
                let k = i + 1;
                writeln!(out, "{k},{},{}", fmt_sig(k as f64 * cfg.t_sym), fmt_sig(*h))?;
            }
            let total: f64 = cir.taps().iter().sum();
            Ok(format!(
                "cir: t_sym={} M={} captured={}",
                fmt_sig(cfg.t_sym),
                cir.memory(),
                fmt_sig(total)
            ))
        }
        Command::Memory => {
            let m = effective_memory(params, cfg.t_sym)?;
            writeln!(out, "t_sym,t_alpha,M,t_peak,degenerate")?;
            writeln!(
                out,
                "{},{},{},{},{}",
                fmt_sig(cfg.t_sym),
                fmt_sig(m.t_alpha),
                m.memory,
                fmt_sig(m.t_peak),
                m.degenerate
            )?;
            Ok(format!("memory: M = {} (t_alpha = {} s)", m.memory, fmt_sig(m.t_alpha)))
        }
        Command::Transitions => {
            let cir = compute_cir(params, cfg.t_sym)?;
            let src = source_for(scenario.source_kind, cfg)?;
            let tau = threshold_for(cfg, scenario, &cir, &src)?;
            let table = build_transition_table(&cir, params, Detector::new(tau)?)?;
            table.write_csv(&mut *out)?;
            Ok(format!(
                "transitions: M={} tau={} rows={}",
                cir.memory(),
                fmt_sig(tau),
                2 * table.len()
            ))
        }
        Command::Mi => {
            let cir = compute_cir(params, cfg.t_sym)?;
            let src = source_for(scenario.source_kind, cfg)?;
            let tau = threshold_for(cfg, scenario, &cir, &src)?;
            let table = build_transition_table(&cir, params, Detector::new(tau)?)?;
            let mi = mutual_information(&table, &src, scenario.isi)?;
            let rate = air(mi.mi, cfg.t_sym)?;
            writeln!(out, "scenario,t_sym,M,tau,mi_bits_per_use,mi_raw,clipped,air_bits_per_s")?;
            writeln!(
                out,
                "{scenario},{},{},{},{},{},{},{}",
                fmt_sig(cfg.t_sym),
                cir.memory(),
                fmt_sig(tau),
                fmt_sig(mi.mi),
                fmt_sig(mi.raw),
                mi.clipped,
                fmt_sig(rate)
            )?;
            Ok(format!(
                "mi: {scenario} I={} bit/use AIR={} bit/s tau={}",
                fmt_sig(mi.mi),
                fmt_sig(rate),
                fmt_sig(tau)
            ))
        }
        Command::Capacity => {
            let grid = InputGrid::uniform(cfg.grid_step)?;
            let c = capacity(scenario, params, cfg.t_sym, &grid, cfg.search)?;
            writeln!(out, "{SWEEP_HEADER}")?;
            sweep_row(out, &c)?;
            Ok(format!("capacity: {}", describe(&c)))
        }
        Command::Sweep => {
            let grid = InputGrid::uniform(cfg.grid_step)?;
            let t_syms = t_sym_grid(cfg.t_sym_min, cfg.t_sym_max, cfg.t_sym_step)?;
            let scenarios: Vec<Scenario> = match cfg.scenario {
                Some(s) => vec![s],
                None => Scenario::ALL.to_vec(),
            };
            writeln!(out, "{SWEEP_HEADER}")?;
            let mut best: Vec<String> = Vec::new();
            let mut skipped = 0;
            for sc in scenarios {
                let points = capacity_sweep(sc, params, &t_syms, &grid, cfg.search)?;
                let mut top: Option<CapacityResult> = None;
                for pt in &points {
                    match pt {
                        SweepPoint::Done(c) => {
                            sweep_row(out, c)?;
                            if top.map_or(true, |t| c.air > t.air) {
                                top = Some(*c);
                            }
                        }
                        SweepPoint::Skipped { .. } => skipped += 1,
                    }
                }
                if let Some(t) = top {
                    best.push(describe(&t));
                }
            }
            Ok(format!("sweep: {}; skipped={skipped}", best.join("; ")))
        }
        Command::Surface => {
            let grid = InputGrid::uniform(cfg.grid_step)?;
            let surf = air_surface(scenario, params, cfg.t_sym, &grid, cfg.search)?;
            writeln!(out, "param1,param2,tau,air")?;
            for pt in &surf.points {
                writeln!(
                    out,
                    "{},{},{},{}",
                    fmt_sig(pt.input.param1()),
                    pt.input.param2().map(fmt_sig).unwrap_or_default(),
                    fmt_sig(pt.tau),
                    fmt_sig(pt.air)
                )?;
            }
            Ok(format!("surface: {}", describe(&surf.capacity())))
        }
        Command::Simulate => {
            let cir = compute_cir(params, cfg.t_sym)?;
            let src = source_for(scenario.source_kind, cfg)?;
            let tau = threshold_for(cfg, scenario, &cir, &src)?;
            let sim = SimConfig {
                n_symbols: cfg.n_symbols,
                seed: cfg.seed,
                time_resolution: cfg.time_resolution,
                tail: cfg.tail,
            };
            let stream = simulate_stream(params, &cir, &src, Detector::new(tau)?, &sim)?;
            stream.write_csv(&mut *out)?;
            let errors = stream
                .symbols
                .iter()
                .zip(&stream.counts.detected)
                .filter(|(s, d)| s != d)
                .count();
            Ok(format!(
                "simulate: n={} tau={} symbol_errors={errors}",
                cfg.n_symbols,
                fmt_sig(tau)
            ))
        }
        Command::Validate => {
            let src = source_for(scenario.source_kind, cfg)?;
            let sim = SimConfig {
                n_symbols: cfg.n_symbols,
                seed: cfg.seed,
                time_resolution: cfg.time_resolution,
                tail: cfg.tail,
            };
            let checks = cross_check(params, cfg.t_sym, &src, scenario, cfg.tau, &sim)?;
            writeln!(out, "check,value,reference,tolerance,pass")?;
            for c in &checks {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    c.name,
                    fmt_sig(c.value),
                    fmt_sig(c.reference),
                    fmt_sig(c.tolerance),
                    if c.pass { "pass" } else { "fail" }
                )?;
            }
            let failed: Vec<&str> =
                checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
            if failed.is_empty() {
                Ok(format!("validate: {} checks passed", checks.len()))
            } else {
                Err(Error::CheckFailed(format!(
                    "{} of {} checks failed: {}",
                    failed.len(),
                    checks.len(),
                    failed.join(" ")
                )))
            }
        }
    }
}
