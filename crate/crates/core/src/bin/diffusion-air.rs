use std::fs;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use diffusion_air::cli::{error_line, run_command, Command};
use diffusion_air::config::{parse_config, RunConfig};
use diffusion_air::info::Scenario;
use diffusion_air::Result;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
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

#[derive(Debug, Parser)]
#[command(version, about = "Achievable rates of a diffusive molecular channel")]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// Key/value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long = "t-sym")]
    t_sym: Option<f64>,
    /// crr-isia, crr-isiu, ind-isia, ind-isiu (or all).
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long = "grid-step")]
    grid_step: Option<f64>,
}

fn command(c: Cmd) -> Command {
    match c {
        Cmd::Cir => Command::Cir,
        Cmd::Memory => Command::Memory,
        Cmd::Transitions => Command::Transitions,
        Cmd::Mi => Command::Mi,
        Cmd::Capacity => Command::Capacity,
        Cmd::Sweep => Command::Sweep,
        Cmd::Surface => Command::Surface,
        Cmd::Simulate => Command::Simulate,
        Cmd::Validate => Command::Validate,
    }
}

fn load(args: &Args) -> Result<RunConfig> {
    let mut cfg = match &args.config {
        Some(path) => parse_config(&fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &args.out {
        cfg.out = Some(out.clone());
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(w) = args.workers {
        cfg.workers = w;
    }
    if let Some(t) = args.t_sym {
        cfg.t_sym = t;
    }
    if let Some(s) = &args.scenario {
        cfg.scenario = if s == "all" { None } else { Some(s.parse::<Scenario>()?) };
    }
    if let Some(g) = args.grid_step {
        cfg.grid_step = g;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Returns the summary and whether the CSV went to a file.
fn run(args: &Args) -> Result<(String, bool)> {
    let cfg = load(args)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| diffusion_air::Error::Domain(format!("thread pool: {e}")))?;
    let summary = pool.install(|| {
        let mut stdout = io::BufWriter::new(io::stdout());
        run_command(command(args.command), &cfg, &mut stdout)
    })?;
    Ok((summary, cfg.out.is_some()))
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok((summary, to_file)) => {
            // keep stdout pure CSV when the data goes there
            if to_file {
                println!("{summary}");
            } else {
                eprintln!("{summary}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", error_line(&e));
            ExitCode::FAILURE
        }
    }
}
