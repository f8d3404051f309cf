//! Achievable information rate (AIR) and memoryless capacity of a diffusive
//! molecular channel.
//!
//! A point transmitter releases `N_T` particles for every `1` (binary
//! concentration shift keying). Particles diffuse freely and are absorbed by a
//! spherical receiver that counts arrivals per symbol interval and resets its
//! counter at every interval boundary. Late arrivals from earlier pulses
//! produce inter-symbol interference, which is truncated to an effective
//! memory of `M` intervals.
//!
//! The crate is organised bottom-up:
//!
//! * [`physics`]: cumulative absorption curve, channel impulse response,
//!   effective memory and the Gaussian-approximation check.
//! * [`detection`]: conditional Gaussian statistics of the received count and
//!   the transition table of the single-sample threshold detector.
//! * [`source`]: first-order Markov and independent binary sources.
//! * [`info`]: the four mutual-information expressions (Markov or
//!   independent source, ISI-aware or ISI-unaware receiver).
//! * [`optimize`]: brute-force threshold search, capacity, capacity sweeps
//!   and AIR surfaces.
//! * [`montecarlo`]: a particle-level simulator used as an independent check
//!   of the analytic model.
//! * [`config`] and [`cli`]: the key/value run configuration and the command
//!   surface used by the `diffusion-air` binary.
//!
//! ```
//! use diffusion_air::physics::{compute_cir, SystemParams};
//!
//! let params = SystemParams::default();
//! let cir = compute_cir(&params, 1.0).unwrap();
//! assert_eq!(cir.memory(), cir.taps().len());
//! assert!(cir.taps().iter().sum::<f64>() <= 0.1);
//! ```

pub mod cli;
pub mod config;
pub mod detection;
mod error;
pub mod info;
pub mod montecarlo;
pub mod optimize;
pub mod physics;
mod roots;
pub mod source;
mod summation;

pub use error::{Error, Result};
