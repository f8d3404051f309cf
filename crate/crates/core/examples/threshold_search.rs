//! Optimal detector threshold for one input distribution, in each scenario.

use diffusion_air::info::Scenario;
use diffusion_air::optimize::{optimize_threshold, SearchSettings, ThresholdSearch};
use diffusion_air::physics::{compute_cir, SystemParams};
use diffusion_air::source::{IndependentSource, MarkovSource, Source};

fn main() -> diffusion_air::Result<()> {
    let params = SystemParams::default();
    let cir = compute_cir(&params, 0.4)?;
    let search = ThresholdSearch::covering(&cir, &params, SearchSettings::default())?;
    println!("searching tau in [{:.1}, {:.1}]", search.lo, search.hi);

    let markov = Source::from(MarkovSource::new(0.6, 0.62)?);
    let ind = Source::from(IndependentSource::new(0.52)?);
    for scenario in Scenario::ALL {
        let src = match scenario {
            Scenario { source_kind: diffusion_air::info::SourceKind::Markov, .. } => &markov,
            _ => &ind,
        };
        let best = optimize_threshold(scenario, &cir, &params, src, &search)?;
        println!(
            "{scenario}: tau* = {:.2}, I = {:.5} bit/use, AIR = {:.4} bit/s",
            best.tau,
            best.mi.mi,
            best.mi.mi / cir.t_sym()
        );
    }
    Ok(())
}
