//! Detector transition probabilities for every ISI history, printed as CSV.
//!
//! Histories are written oldest symbol first.

use std::io;

use diffusion_air::detection::{build_transition_table, conditional_moments, Detector, History};
use diffusion_air::physics::{compute_cir, SystemParams};

fn main() -> diffusion_air::Result<()> {
    let params = SystemParams::default();
    let cir = compute_cir(&params, 2.0)?;
    let det = Detector::new(400.0)?;

    let quiet = conditional_moments(&cir, &params, History::new(0, cir.history_width())?, 1)?;
    eprintln!(
        "M = {}, lone pulse: mean {:.1}, sd {:.1}",
        cir.memory(),
        quiet.mean,
        quiet.variance.sqrt()
    );

    let table = build_transition_table(&cir, &params, det)?;
    table.write_csv(io::stdout().lock())
}
