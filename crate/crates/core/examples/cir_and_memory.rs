//! Channel impulse response and effective memory for a few symbol intervals.
//!
//! ```text
//! cargo run --example cir_and_memory
//! ```

use diffusion_air::physics::{compute_cir, effective_memory, validate_gaussian, SystemParams};

fn main() -> diffusion_air::Result<()> {
    let params = SystemParams::default();
    println!("P(absorbed eventually) = R/d = {}", params.hit_probability());

    for t_sym in [0.3, 0.5, 1.0, 2.0] {
        let mem = effective_memory(&params, t_sym)?;
        let cir = compute_cir(&params, t_sym)?;
        let check = validate_gaussian(&params, &cir);
        println!(
            "t_sym = {t_sym:>4} s  M = {:>2}  t_alpha = {:>7.3} s  gaussian ok = {}",
            mem.memory,
            mem.t_alpha,
            check.valid
        );
        let taps: Vec<String> = cir.taps().iter().map(|h| format!("{h:.5}")).collect();
        println!("    h = [{}]", taps.join(", "));
    }
    Ok(())
}
