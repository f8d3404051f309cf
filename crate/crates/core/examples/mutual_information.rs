//! The four mutual-information variants at a fixed threshold.

use diffusion_air::detection::Detector;
use diffusion_air::info::{mi_isia_independent, mi_isia_markov, mi_isiu_independent, mi_isiu_markov};
use diffusion_air::optimize::air;
use diffusion_air::physics::{compute_cir, SystemParams};
use diffusion_air::source::{IndependentSource, MarkovSource};

fn main() -> diffusion_air::Result<()> {
    let params = SystemParams::default();
    let t_sym = 0.7;
    let cir = compute_cir(&params, t_sym)?;
    let det = Detector::new(440.0)?;
    let markov = MarkovSource::new(0.55, 0.55)?;
    let ind = IndependentSource::new(0.5)?;

    let rows = [
        ("Markov, ISI-aware", mi_isia_markov(&cir, &params, det, &markov)?),
        ("Markov, ISI-unaware", mi_isiu_markov(&cir, &params, det, &markov)?),
        ("independent, ISI-aware", mi_isia_independent(&cir, &params, det, &ind)?),
        ("independent, ISI-unaware", mi_isiu_independent(&cir, &params, det, &ind)?),
    ];
    println!("t_sym = {t_sym} s, M = {}, tau = {}", cir.memory(), det.threshold);
    for (name, mi) in rows {
        println!(
            "{name:<26} I = {:.5} bit/use  AIR = {:.4} bit/s{}",
            mi.mi,
            air(mi.mi, t_sym)?,
            if mi.clipped { "  (clipped)" } else { "" }
        );
    }
    Ok(())
}
