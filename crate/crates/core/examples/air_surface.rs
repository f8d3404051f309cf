//! AIR over the (p, q) plane at a fixed symbol interval, as plottable CSV.

use std::io::{self, Write};

use diffusion_air::info::Scenario;
use diffusion_air::optimize::{air_surface, InputGrid, SearchSettings};
use diffusion_air::physics::SystemParams;

fn main() -> diffusion_air::Result<()> {
    let params = SystemParams::default();
    let grid = InputGrid::uniform(0.05)?;
    let settings = SearchSettings { coarse_steps: 32, refine_rounds: 4 };
    let surface = air_surface(Scenario::CRR_ISIU, &params, 1.0, &grid, settings)?;

    let mut out = io::stdout().lock();
    writeln!(out, "p,q,tau,air")?;
    for pt in &surface.points {
        writeln!(
            out,
            "{:.2},{:.2},{:.3},{:.6}",
            pt.input.param1(),
            pt.input.param2().unwrap_or(f64::NAN),
            pt.tau,
            pt.air
        )?;
    }
    let c = surface.capacity();
    eprintln!("max AIR {:.4} bit/s at {:?}", c.air, c.argmax);
    Ok(())
}
