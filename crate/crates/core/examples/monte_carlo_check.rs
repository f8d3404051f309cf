//! Particle-level simulation against the analytic channel model.

use diffusion_air::info::Scenario;
use diffusion_air::montecarlo::{cross_check, SimConfig};
use diffusion_air::physics::SystemParams;
use diffusion_air::source::{MarkovSource, Source};

fn main() -> diffusion_air::Result<()> {
    let params = SystemParams::default();
    let src = Source::from(MarkovSource::new(0.5, 0.5)?);
    let cfg = SimConfig::new(200_000, 2024);
    let checks = cross_check(&params, 1.0, &src, Scenario::CRR_ISIA, None, &cfg)?;
    for c in &checks {
        println!(
            "{:<34} {:>12.5} vs {:>12.5} (tol {:.5})  {}",
            c.name,
            c.value,
            c.reference,
            c.tolerance,
            if c.pass { "pass" } else { "FAIL" }
        );
    }
    Ok(())
}
