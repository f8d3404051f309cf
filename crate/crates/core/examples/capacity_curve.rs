//! Capacity against symbol interval for the two independent-source
//! scenarios, and a coarse-to-fine capacity for the Markov ones.
//!
//! Full fine-grid Markov sweeps are what the `diffusion-air sweep` command is
//! for; they take a while on a single core.

use diffusion_air::info::Scenario;
use diffusion_air::optimize::{
    capacity_refined, capacity_sweep, t_sym_grid, InputGrid, SearchSettings, SweepPoint,
};
use diffusion_air::physics::SystemParams;

fn main() -> diffusion_air::Result<()> {
    let params = SystemParams::default();
    let settings = SearchSettings { coarse_steps: 32, refine_rounds: 4 };
    let grid = InputGrid::uniform(0.01)?;
    let t_syms = t_sym_grid(0.3, 1.5, 0.15)?;

    for scenario in [Scenario::IND_ISIA, Scenario::IND_ISIU] {
        println!("{scenario}");
        for pt in capacity_sweep(scenario, &params, &t_syms, &grid, settings)? {
            match pt {
                SweepPoint::Done(c) => println!(
                    "  t_sym = {:.2}  M = {:>2}  C = {:.4} bit/s  lambda0 = {:.2}",
                    c.t_sym,
                    c.memory,
                    c.air,
                    c.argmax.param1()
                ),
                SweepPoint::Skipped { t_sym, required, .. } => {
                    println!("  t_sym = {t_sym:.2}  skipped, M = {required}")
                }
            }
        }
    }

    let coarse = InputGrid::uniform(0.1)?;
    for scenario in [Scenario::CRR_ISIA, Scenario::CRR_ISIU] {
        let c = capacity_refined(scenario, &params, 1.0, &coarse, &grid, settings)?;
        println!(
            "{scenario} at t_sym = 1.0: C = {:.4} bit/s at (p, q) = ({:.2}, {:.2})",
            c.air,
            c.argmax.param1(),
            c.argmax.param2().unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
