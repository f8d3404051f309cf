//! Diffusion physics of the point-transmitter / absorbing-sphere link.
//!
//! The expected number of particles absorbed by time `t` after an impulsive
//! release is
//!
//! ```text
//! N(t) = N_T (R/d) erfc((d - R) / (2 sqrt(D t)))
//! ```
//!
//! With a receiver that resets its counter every `t_sym` seconds, the
//! probability that one particle lands in interval `i` is the increment of
//! this curve over `[(i-1) t_sym, i t_sym]`. The vector of these increments,
//! truncated to the effective memory `M`, is the channel impulse response.

use crate::roots::{golden_max, regula_falsi};
use crate::{Error, Result};

/// Default upper bound on the effective memory length.
pub const DEFAULT_MEMORY_CAP: usize = 22;

/// Residual tolerance on the memory equation, in probability units.
const MEMORY_ROOT_TOL: f64 = 1e-12;
const MEMORY_ROOT_MAX_ITER: usize = 200;

/// Physical constants of the channel plus the external noise moments.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// Particles released per `1` symbol.
    pub n_released: f64,
    /// Receiver radius in μm.
    pub receiver_radius: f64,
    /// Transmitter to receiver-centre distance in μm.
    pub distance: f64,
    /// Diffusion coefficient in μm²/s.
    pub diffusion_coeff: f64,
    /// Mean of the additive external noise, in counts.
    pub noise_mean: f64,
    /// Standard deviation of the external noise, in counts.
    pub noise_std: f64,
    /// Negligible per-interval hitting probability that defines the memory.
    pub alpha: f64,
    /// Largest memory length accepted before reporting an overflow.
    pub memory_cap: usize,
}

impl Default for SystemParams {
    /// Reference parameter set: 10⁴ particles, R = 1 μm, d = 10 μm,
    /// D = 79.4 μm²/s, noise mean and deviation 50, α = 0.001.
    fn default() -> Self {
        SystemParams {
            n_released: 1e4,
            receiver_radius: 1.0,
            distance: 10.0,
            diffusion_coeff: 79.4,
            noise_mean: 50.0,
            noise_std: 50.0,
            alpha: 1e-3,
            memory_cap: DEFAULT_MEMORY_CAP,
        }
    }
}

impl SystemParams {
    /// Checks every invariant and names the first one violated.
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("n_released", self.n_released),
            ("receiver_radius", self.receiver_radius),
            ("distance", self.distance),
            ("diffusion_coeff", self.diffusion_coeff),
            ("noise_mean", self.noise_mean),
            ("noise_std", self.noise_std),
            ("alpha", self.alpha),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        if self.n_released < 1.0 {
            return Err(Error::invalid("n_released", "must be >= 1"));
        }
        if self.receiver_radius <= 0.0 {
            return Err(Error::invalid("receiver_radius", "must be > 0"));
        }
        if self.distance <= self.receiver_radius {
            return Err(Error::invalid(
                "distance",
                "must exceed receiver_radius (d > R)",
            ));
        }
        if self.diffusion_coeff <= 0.0 {
            return Err(Error::invalid("diffusion_coeff", "must be > 0"));
        }
        if self.noise_std <= 0.0 {
            return Err(Error::invalid("noise_std", "must be > 0"));
        }
        if !(self.alpha > 0.0 && self.alpha < self.hit_probability()) {
            return Err(Error::invalid(
                "alpha",
                "must satisfy 0 < alpha < receiver_radius/distance",
            ));
        }
        if self.memory_cap == 0 || self.memory_cap > 30 {
            return Err(Error::invalid("memory_cap", "must lie in 1..=30"));
        }
        Ok(())
    }

    /// Probability that a particle is ever absorbed, `R/d`.
    pub fn hit_probability(&self) -> f64 {
        self.receiver_radius / self.distance
    }

    /// Probability that a particle released at time 0 is absorbed by `t`.
    pub(crate) fn absorbed_fraction(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let gap = self.distance - self.receiver_radius;
        self.hit_probability() * libm::erfc(gap / (2.0 * (self.diffusion_coeff * t).sqrt()))
    }

    /// Probability of absorption inside the window `[start, start + width]`.
    pub(crate) fn window_probability(&self, start: f64, width: f64) -> f64 {
        let gap = self.distance - self.receiver_radius;
        let arg = |t: f64| gap / (2.0 * (self.diffusion_coeff * t).sqrt());
        let late = libm::erfc(arg(start + width));
        let early = if start <= 0.0 { 0.0 } else { libm::erfc(arg(start)) };
        self.hit_probability() * (late - early)
    }
}

/// Expected cumulative number of absorbed particles at time `t`.
pub fn expected_cumulative_absorbed(params: &SystemParams, t: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::Domain(format!("time must be non-negative, got {t}")));
    }
    if t.is_infinite() {
        return Ok(params.n_released * params.hit_probability());
    }
    Ok(params.n_released * params.absorbed_fraction(t))
}

/// Probability that a particle released at time 0 is absorbed during the
/// `interval`-th symbol interval (1-based) of a resetting receiver.
pub fn hitting_probability(params: &SystemParams, t_sym: f64, interval: usize) -> Result<f64> {
    params.validate()?;
    check_t_sym(t_sym)?;
    if interval == 0 {
        return Err(Error::Domain("interval index starts at 1".into()));
    }
    let start = (interval - 1) as f64 * t_sym;
    Ok(params.window_probability(start, t_sym).max(0.0))
}

fn check_t_sym(t_sym: f64) -> Result<()> {
    if !(t_sym.is_finite() && t_sym > 0.0) {
        return Err(Error::invalid("t_sym", format!("must be finite and > 0, got {t_sym}")));
    }
    Ok(())
}

/// Solution of the memory equation for one symbol interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemoryEstimate {
    /// Window start at which the per-interval hitting probability falls to α.
    pub t_alpha: f64,
    /// `ceil(t_alpha / t_sym)`.
    pub memory: usize,
    /// Start time of the most probable window.
    pub t_peak: f64,
    /// Set when no window ever reaches α, in which case `memory` is 1.
    pub degenerate: bool,
}

/// Effective memory length for symbol interval `t_sym`.
///
/// Finds the start time `T_α` on the decaying side of the window-probability
/// curve where a window of width `t_sym` catches a particle with probability
/// exactly α, then rounds `T_α / t_sym` up.
pub fn effective_memory(params: &SystemParams, t_sym: f64) -> Result<MemoryEstimate> {
    params.validate()?;
    check_t_sym(t_sym)?;
    let window = |t: f64| params.window_probability(t, t_sym);

    // coarse geometric scan for the peak, then golden-section refinement
    let scan: Vec<f64> = (-40..=40).map(|k| t_sym * 2f64.powi(k)).collect();
    let (k_best, _) = scan
        .iter()
        .map(|&t| window(t))
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (k, v)| if v > acc.1 { (k, v) } else { acc });
    let lo = if k_best == 0 { 0.0 } else { scan[k_best - 1] };
    let hi = scan[(k_best + 1).min(scan.len() - 1)];
    let t_peak = golden_max(window, lo, hi, 200);
    let peak = window(t_peak);

    if peak < params.alpha {
        return Ok(MemoryEstimate { t_alpha: t_sym, memory: 1, t_peak, degenerate: true });
    }

    let mut t_hi = t_peak.max(t_sym);
    let mut doublings = 0;
    while window(t_hi) >= params.alpha {
        t_hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::Domain("could not bracket the memory equation".into()));
        }
    }
    let root = regula_falsi(
        |t| window(t) - params.alpha,
        t_peak,
        t_hi,
        MEMORY_ROOT_TOL,
        MEMORY_ROOT_MAX_ITER,
    );
    if !root.converged {
        return Err(Error::Domain(format!(
            "memory equation did not converge (residual {:e})",
            root.residual
        )));
    }
    let t_alpha = root.x;
    let memory = ((t_alpha / t_sym).ceil() as usize).max(1);
    if memory > params.memory_cap {
        return Err(Error::MemoryOverflow { required: memory, cap: params.memory_cap });
    }
    Ok(MemoryEstimate { t_alpha, memory, t_peak, degenerate: false })
}

/// Per-interval absorption probabilities `h_1..h_M` for one symbol interval.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelImpulseResponse {
    t_sym: f64,
    t_alpha: f64,
    taps: Vec<f64>,
}

impl ChannelImpulseResponse {
    /// Builds a response from explicit taps, for synthetic channels.
    ///
    /// `t_alpha` is set to `taps.len() * t_sym`.
    pub fn from_taps(t_sym: f64, taps: Vec<f64>) -> Result<Self> {
        check_t_sym(t_sym)?;
        if taps.is_empty() {
            return Err(Error::invalid("taps", "at least one tap is required"));
        }
        if taps.iter().any(|h| !(0.0..1.0).contains(h)) {
            return Err(Error::invalid("taps", "every tap must lie in [0, 1)"));
        }
        if taps.iter().sum::<f64>() > 1.0 {
            return Err(Error::invalid("taps", "taps must sum to at most 1"));
        }
        let t_alpha = taps.len() as f64 * t_sym;
        Ok(ChannelImpulseResponse { t_sym, t_alpha, taps })
    }

    pub fn t_sym(&self) -> f64 {
        self.t_sym
    }

    pub fn t_alpha(&self) -> f64 {
        self.t_alpha
    }

    /// Memory length `M`.
    pub fn memory(&self) -> usize {
        self.taps.len()
    }

    /// `h_1..h_M`; index 0 is the current interval.
    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    /// Number of past symbols a receiver has to track, `M - 1`.
    pub fn history_width(&self) -> usize {
        self.taps.len() - 1
    }
}

/// Channel impulse response truncated to the effective memory.
pub fn compute_cir(params: &SystemParams, t_sym: f64) -> Result<ChannelImpulseResponse> {
    let mem = effective_memory(params, t_sym)?;
    let taps = (1..=mem.memory)
        .map(|i| hitting_probability(params, t_sym, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(ChannelImpulseResponse { t_sym, t_alpha: mem.t_alpha, taps })
}

/// Per-tap outcome of the Gaussian-approximation check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TapValidity {
    pub tap: f64,
    /// `N_T h / (1 - h)`, the squared mean-to-deviation ratio of the tap count.
    pub metric: f64,
    pub valid: bool,
}

/// Result of checking that no tap count has appreciable negative Gaussian mass.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianValidity {
    pub taps: Vec<TapValidity>,
    pub valid: bool,
}

/// Threshold on `N_T h / (1 - h)`, i.e. mean > 3 standard deviations.
pub const GAUSSIAN_VALIDITY_BOUND: f64 = 9.0;

/// Evaluates `N_T h_i / (1 - h_i) > 9` for every tap.
pub fn validate_gaussian(params: &SystemParams, cir: &ChannelImpulseResponse) -> GaussianValidity {
    gaussian_validity_of_taps(params.n_released, cir.taps())
}

pub(crate) fn gaussian_validity_of_taps(n_released: f64, taps: &[f64]) -> GaussianValidity {
    let taps: Vec<TapValidity> = taps
        .iter()
        .map(|&tap| {
            let metric = n_released * tap / (1.0 - tap);
            TapValidity { tap, metric, valid: metric > GAUSSIAN_VALIDITY_BOUND }
        })
        .collect();
    let valid = taps.iter().all(|t| t.valid);
    GaussianValidity { taps, valid }
}
