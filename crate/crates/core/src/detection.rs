//! Received-count statistics and the single-sample threshold detector.
//!
//! Conditioned on the current symbol `s` and the `M - 1` preceding symbols,
//! the count in the current interval is modelled as Gaussian with
//!
//! ```text
//! mean     = μ_E  + N_T Σ_j s_{i-j+1} h_j
//! variance = σ_E² + N_T Σ_j s_{i-j+1} h_j (1 - h_j)
//! ```
//!
//! and the detector outputs `1` when the count reaches the threshold τ.

use std::fmt;
use std::io::Write;

use crate::physics::{ChannelImpulseResponse, SystemParams};
use crate::{Error, Result};

/// Upper tail probability of the standard normal, `½ erfc(z/√2)`.
pub fn q_function(z: f64) -> f64 {
    0.5 * libm::erfc(z * std::f64::consts::FRAC_1_SQRT_2)
}

/// The `M - 1` symbols preceding the current one.
///
/// Bit `k` holds `s_{i-M+1+k}`: the least significant bit is the oldest
/// symbol and bit `M - 2` is the most recent one, `s_{i-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct History {
    bits: u32,
    width: u8,
}

impl History {
    pub fn new(bits: u32, width: usize) -> Result<Self> {
        if width > 31 {
            return Err(Error::invalid("history", "width must be at most 31"));
        }
        if width < 32 && bits >> width != 0 {
            return Err(Error::invalid("history", format!("bits {bits:#b} exceed width {width}")));
        }
        Ok(History { bits, width: width as u8 })
    }

    /// Builds a history from symbols listed oldest first.
    pub fn from_symbols(symbols: &[u8]) -> Result<Self> {
        let mut bits = 0u32;
        for (k, &s) in symbols.iter().enumerate() {
            if s > 1 {
                return Err(Error::invalid("history", "symbols must be 0 or 1"));
            }
            bits |= (s as u32) << k;
        }
        History::new(bits, symbols.len())
    }

    pub fn empty() -> Self {
        History { bits: 0, width: 0 }
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn width(self) -> usize {
        self.width as usize
    }

    pub fn index(self) -> usize {
        self.bits as usize
    }

    /// Symbol `lag` steps in the past (`lag = 1` is `s_{i-1}`).
    pub fn lagged(self, lag: usize) -> Option<u8> {
        if lag == 0 || lag > self.width() {
            return None;
        }
        Some(((self.bits >> (self.width() - lag)) & 1) as u8)
    }

    /// Most recent past symbol, if any.
    pub fn previous(self) -> Option<u8> {
        self.lagged(1)
    }

    /// Symbols oldest first.
    pub fn symbols(self) -> Vec<u8> {
        (0..self.width()).map(|k| ((self.bits >> k) & 1) as u8).collect()
    }

    /// Iterates over all `2^width` histories in index order.
    pub fn all(width: usize) -> impl Iterator<Item = History> {
        (0..1u32 << width).map(move |bits| History { bits, width: width as u8 })
    }
}

impl fmt::Display for History {
    /// Oldest symbol first, e.g. `"011"` for `s_{i-3}=0, s_{i-2}=1, s_{i-1}=1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.symbols() {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Mean and variance of the received count given the transmitted symbols.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalGaussian {
    pub mean: f64,
    pub variance: f64,
}

impl ConditionalGaussian {
    /// `P(count >= tau)`.
    pub fn prob_at_least(&self, tau: f64) -> f64 {
        q_function((tau - self.mean) / self.variance.sqrt()).clamp(0.0, 1.0)
    }
}

/// Memoryless detector: `ŝ = 1` iff the received count is at least `threshold`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detector {
    pub threshold: f64,
}

impl Detector {
    pub fn new(threshold: f64) -> Result<Self> {
        if threshold.is_nan() {
            return Err(Error::invalid("threshold", "must not be NaN"));
        }
        Ok(Detector { threshold })
    }

    pub fn decide(&self, received: f64) -> u8 {
        u8::from(received >= self.threshold)
    }
}

fn check_symbol(name: &'static str, s: u8) -> Result<()> {
    if s > 1 {
        return Err(Error::invalid(name, "symbol must be 0 or 1"));
    }
    Ok(())
}

/// Count statistics for a specific past-symbol pattern and current symbol.
pub fn conditional_moments(
    cir: &ChannelImpulseResponse,
    params: &SystemParams,
    history: History,
    s: u8,
) -> Result<ConditionalGaussian> {
    check_symbol("s", s)?;
    if history.width() != cir.history_width() {
        return Err(Error::HistoryWidth { expected: cir.history_width(), got: history.width() });
    }
    let (isi_mean, isi_var) = isi_moments(cir.taps(), params.n_released, history.bits());
    let h1 = cir.taps()[0];
    let cur = if s == 1 { params.n_released * h1 } else { 0.0 };
    let cur_var = if s == 1 { params.n_released * h1 * (1.0 - h1) } else { 0.0 };
    Ok(ConditionalGaussian {
        mean: params.noise_mean + cur + isi_mean,
        variance: params.noise_std * params.noise_std + cur_var + isi_var,
    })
}

/// Interference mean and variance contributed by the past symbols in `bits`.
fn isi_moments(taps: &[f64], n_released: f64, bits: u32) -> (f64, f64) {
    let m = taps.len();
    let (mut mean, mut var) = (0.0, 0.0);
    // bit k carries s_{i-M+1+k}, which is weighted by tap h_{M-k}
    for k in 0..m - 1 {
        if (bits >> k) & 1 == 1 {
            let h = taps[m - 1 - k];
            mean += n_released * h;
            var += n_released * h * (1.0 - h);
        }
    }
    (mean, var)
}

/// `P(ŝ | history, s)` for the Gaussian count model.
pub fn transition_probability(
    cir: &ChannelImpulseResponse,
    params: &SystemParams,
    det: Detector,
    history: History,
    s: u8,
    s_hat: u8,
) -> Result<f64> {
    check_symbol("s_hat", s_hat)?;
    let p1 = conditional_moments(cir, params, history, s)?.prob_at_least(det.threshold);
    Ok(if s_hat == 1 { p1 } else { 1.0 - p1 })
}

/// Mean and standard deviation of the count for every `(history, s)` pair.
///
/// Precomputed once per channel so that many thresholds can be evaluated
/// without recomputing the interference sums.
#[derive(Debug, Clone)]
pub(crate) struct CountMoments {
    width: usize,
    /// `[mean | s=0, mean | s=1]` per history index.
    mean: Vec<[f64; 2]>,
    /// `[std | s=0, std | s=1]` per history index.
    std: Vec<[f64; 2]>,
}

impl CountMoments {
    pub(crate) fn new(cir: &ChannelImpulseResponse, params: &SystemParams) -> Result<Self> {
        let width = cir.history_width();
        if cir.memory() > params.memory_cap {
            return Err(Error::MemoryOverflow { required: cir.memory(), cap: params.memory_cap });
        }
        let h1 = cir.taps()[0];
        let cur_mean = params.n_released * h1;
        let cur_var = params.n_released * h1 * (1.0 - h1);
        let noise_var = params.noise_std * params.noise_std;
        let n = 1usize << width;
        let mut mean = Vec::with_capacity(n);
        let mut std = Vec::with_capacity(n);
        for bits in 0..n as u32 {
            let (m, v) = isi_moments(cir.taps(), params.n_released, bits);
            let m0 = params.noise_mean + m;
            let v0 = noise_var + v;
            mean.push([m0, m0 + cur_mean]);
            std.push([v0.sqrt(), (v0 + cur_var).sqrt()]);
        }
        Ok(CountMoments { width, mean, std })
    }

    pub(crate) fn width(&self) -> usize {
        self.width
    }

    pub(crate) fn len(&self) -> usize {
        self.mean.len()
    }

    /// `P(ŝ = 1 | history, s)` at threshold `tau`.
    #[inline]
    pub(crate) fn p_one(&self, history: usize, s: usize, tau: f64) -> f64 {
        q_function((tau - self.mean[history][s]) / self.std[history][s]).clamp(0.0, 1.0)
    }
}

/// `P(ŝ | history, s)` for every history, both symbols and both decisions.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionTable {
    memory: usize,
    threshold: f64,
    /// `P(ŝ = 1 | history, s)` indexed by history then `s`.
    p_one: Vec<[f64; 2]>,
}

impl TransitionTable {
    /// Builds a table from explicit `P(ŝ = 1 | history, s)` rows.
    pub fn from_rows(memory: usize, threshold: f64, p_one: Vec<[f64; 2]>) -> Result<Self> {
        if memory == 0 || p_one.len() != 1 << (memory - 1) {
            return Err(Error::invalid("table", "expected 2^(M-1) rows"));
        }
        if p_one.iter().flatten().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::invalid("table", "probabilities must lie in [0, 1]"));
        }
        Ok(TransitionTable { memory, threshold, p_one })
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn history_width(&self) -> usize {
        self.memory - 1
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn len(&self) -> usize {
        self.p_one.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_one.is_empty()
    }

    /// `P(ŝ | history, s)`.
    pub fn get(&self, history: History, s: u8, s_hat: u8) -> f64 {
        debug_assert_eq!(history.width(), self.history_width());
        let p1 = self.p_one[history.index()][s as usize];
        if s_hat == 1 {
            p1
        } else {
            1.0 - p1
        }
    }

    #[inline]
    pub(crate) fn p_one(&self, history: usize, s: usize) -> f64 {
        self.p_one[history][s]
    }

    /// Writes `history,s,p_hat0,p_hat1` rows, history oldest symbol first.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "history,s,p_hat0,p_hat1")?;
        for h in History::all(self.history_width()) {
            for s in 0..2u8 {
                writeln!(
                    out,
                    "{},{},{},{}",
                    h,
                    s,
                    crate::cli::fmt_sig(self.get(h, s, 0)),
                    crate::cli::fmt_sig(self.get(h, s, 1))
                )?;
            }
        }
        Ok(())
    }
}

/// Tabulates the detector transition probabilities for every history.
pub fn build_transition_table(
    cir: &ChannelImpulseResponse,
    params: &SystemParams,
    det: Detector,
) -> Result<TransitionTable> {
    let moments = CountMoments::new(cir, params)?;
    let p_one = (0..moments.len())
        .map(|h| [moments.p_one(h, 0, det.threshold), moments.p_one(h, 1, det.threshold)])
        .collect();
    Ok(TransitionTable { memory: cir.memory(), threshold: det.threshold, p_one })
}
