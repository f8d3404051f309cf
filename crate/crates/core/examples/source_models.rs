//! Markov and independent binary sources: stationary law, entropy rate and
//! sequence probabilities.

use diffusion_air::source::{IndependentSource, MarkovSource, Source};

fn main() -> diffusion_air::Result<()> {
    let markov = MarkovSource::new(0.6, 0.62)?;
    let pi = markov.stationary()?;
    let src = Source::from(markov);
    println!("Markov p = 0.60, q = 0.62");
    println!("  pi0 = {:.4}, pi1 = {:.4}", pi.pi0, pi.pi1);
    println!("  entropy rate = {:.6} bit/symbol", src.entropy_rate()?);
    println!("  P(0110) = {:.6}", src.sequence_probability(&[0, 1, 1, 0])?);

    let ind = IndependentSource::new(0.52)?;
    let as_markov = Source::from(ind.as_markov());
    let src = Source::from(ind);
    println!("Independent lambda0 = 0.52");
    println!("  entropy rate = {:.6} bit/symbol", src.entropy_rate()?);
    println!(
        "  P(0110) = {:.6} (same chain as Markov: {:.6})",
        src.sequence_probability(&[0, 1, 1, 0])?,
        as_markov.sequence_probability(&[0, 1, 1, 0])?
    );
    Ok(())
}
