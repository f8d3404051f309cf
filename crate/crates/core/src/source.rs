//! Binary sources: first-order Markov and independent (Bernoulli).

use rand::Rng;

use crate::{Error, Result};

/// `H2(x) = -x log2 x - (1-x) log2(1-x)`, with `0 log 0 = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::invalid("x", format!("probability out of range: {x}")));
    }
    Ok(h2(x))
}

/// Unchecked binary entropy for internal callers.
#[inline]
pub(crate) fn h2(x: f64) -> f64 {
    -(xlog2x(x) + xlog2x(1.0 - x))
}

#[inline]
pub(crate) fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

fn check_probability(name: &'static str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::invalid(name, format!("must lie in [0, 1], got {v}")));
    }
    Ok(())
}

fn ln_or_neg_inf(x: f64) -> f64 {
    if x <= 0.0 {
        f64::NEG_INFINITY
    } else {
        x.ln()
    }
}

/// Two-state Markov chain with `p = P(1|0)` and `q = P(0|1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkovSource {
    p: f64,
    q: f64,
}

/// Stationary law of a [`MarkovSource`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryDist {
    pub pi0: f64,
    pub pi1: f64,
}

impl MarkovSource {
    /// Boundary values 0 and 1 are accepted so that limiting cases can be
    /// evaluated; `p = q = 0` is allowed here but has no stationary law.
    pub fn new(p: f64, q: f64) -> Result<Self> {
        check_probability("p", p)?;
        check_probability("q", q)?;
        Ok(MarkovSource { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `P(s | prev)`.
    pub fn transition(&self, prev: u8, s: u8) -> f64 {
        match (prev, s) {
            (0, 0) => 1.0 - self.p,
            (0, _) => self.p,
            (_, 0) => self.q,
            _ => 1.0 - self.q,
        }
    }

    pub fn stationary(&self) -> Result<StationaryDist> {
        stationary_distribution(self)
    }
}

/// `π0 = q/(p+q)`, `π1 = p/(p+q)`.
pub fn stationary_distribution(src: &MarkovSource) -> Result<StationaryDist> {
    let total = src.p + src.q;
    if total <= 0.0 {
        return Err(Error::UndefinedStationary);
    }
    Ok(StationaryDist { pi0: src.q / total, pi1: src.p / total })
}

/// `π0 H2(p) + π1 H2(q)` bits per symbol.
pub fn entropy_rate_markov(src: &MarkovSource) -> Result<f64> {
    let pi = stationary_distribution(src)?;
    Ok(pi.pi0 * h2(src.p) + pi.pi1 * h2(src.q))
}

/// Memoryless source emitting `0` with probability `lambda0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndependentSource {
    lambda0: f64,
}

impl IndependentSource {
    pub fn new(lambda0: f64) -> Result<Self> {
        check_probability("lambda0", lambda0)?;
        Ok(IndependentSource { lambda0 })
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn lambda1(&self) -> f64 {
        1.0 - self.lambda0
    }

    pub fn prob(&self, s: u8) -> f64 {
        if s == 0 {
            self.lambda0
        } else {
            self.lambda1()
        }
    }

    /// The Markov chain with identical sequence law, `p = λ1`, `q = λ0`.
    pub fn as_markov(&self) -> MarkovSource {
        MarkovSource { p: self.lambda1(), q: self.lambda0 }
    }
}

/// Either source model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Source {
    Markov(MarkovSource),
    Independent(IndependentSource),
}

impl From<MarkovSource> for Source {
    fn from(s: MarkovSource) -> Self {
        Source::Markov(s)
    }
}

impl From<IndependentSource> for Source {
    fn from(s: IndependentSource) -> Self {
        Source::Independent(s)
    }
}

impl Source {
    /// Entropy rate in bits per symbol.
    pub fn entropy_rate(&self) -> Result<f64> {
        match self {
            Source::Markov(m) => entropy_rate_markov(m),
            Source::Independent(i) => Ok(h2(i.lambda0)),
        }
    }

    /// Marginal law of a single symbol.
    pub fn marginal(&self, s: u8) -> Result<f64> {
        match self {
            Source::Markov(m) => {
                let pi = stationary_distribution(m)?;
                Ok(if s == 0 { pi.pi0 } else { pi.pi1 })
            }
            Source::Independent(i) => Ok(i.prob(s)),
        }
    }

    /// `P(s | previous symbol)`; without a previous symbol this is the
    /// marginal law.
    pub fn conditional(&self, prev: Option<u8>, s: u8) -> Result<f64> {
        match (self, prev) {
            (Source::Markov(m), Some(prev)) => Ok(m.transition(prev, s)),
            (Source::Independent(i), _) => Ok(i.prob(s)),
            (_, None) => self.marginal(s),
        }
    }

    /// Natural log of the probability of `seq` (oldest first).
    ///
    /// Markov sequences start from the stationary law.
    pub fn ln_sequence_probability(&self, seq: &[u8]) -> Result<f64> {
        let Some((&first, rest)) = seq.split_first() else {
            return Err(Error::invalid("seq", "sequence must be non-empty"));
        };
        if seq.iter().any(|&s| s > 1) {
            return Err(Error::invalid("seq", "symbols must be 0 or 1"));
        }
        match self {
            Source::Markov(m) => {
                let mut acc = ln_or_neg_inf(self.marginal(first)?);
                let mut prev = first;
                for &s in rest {
                    acc += ln_or_neg_inf(m.transition(prev, s));
                    prev = s;
                }
                Ok(acc)
            }
            Source::Independent(i) => {
                let ones = seq.iter().filter(|&&s| s == 1).count();
                let zeros = seq.len() - ones;
                Ok(power_ln(i.lambda0, zeros) + power_ln(i.lambda1(), ones))
            }
        }
    }

    /// Probability of `seq` (oldest first).
    pub fn sequence_probability(&self, seq: &[u8]) -> Result<f64> {
        Ok(self.ln_sequence_probability(seq)?.exp())
    }

    /// Draws `n` symbols; the first comes from the stationary (or Bernoulli) law.
    pub fn sample_sequence<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<u8>> {
        if n == 0 {
            return Err(Error::invalid("length", "must be >= 1"));
        }
        let mut out = Vec::with_capacity(n);
        let mut prev = None;
        for _ in 0..n {
            let p1 = self.conditional(prev, 1)?;
            let s = u8::from(rng.random::<f64>() < p1);
            out.push(s);
            prev = Some(s);
        }
        Ok(out)
    }

    /// Joint law `P(history, s)` for every history of `width` symbols.
    ///
    /// Row `h` follows the [`History`](crate::detection::History) bit layout.
    /// Products are formed in the log domain.
    pub(crate) fn history_joint(&self, width: usize) -> Result<Vec<[f64; 2]>> {
        let n = 1usize << width;
        let mut out = Vec::with_capacity(n);
        match self {
            Source::Markov(m) => {
                let pi = stationary_distribution(m)?;
                let ln_pi = [ln_or_neg_inf(pi.pi0), ln_or_neg_inf(pi.pi1)];
                let ln_t = [
                    [ln_or_neg_inf(m.transition(0, 0)), ln_or_neg_inf(m.transition(0, 1))],
                    [ln_or_neg_inf(m.transition(1, 0)), ln_or_neg_inf(m.transition(1, 1))],
                ];
                for bits in 0..n {
                    if width == 0 {
                        out.push([pi.pi0, pi.pi1]);
                        continue;
                    }
                    let mut prev = bits & 1;
                    let mut acc = ln_pi[prev];
                    for k in 1..width {
                        let s = (bits >> k) & 1;
                        acc += ln_t[prev][s];
                        prev = s;
                    }
                    out.push([(acc + ln_t[prev][0]).exp(), (acc + ln_t[prev][1]).exp()]);
                }
            }
            Source::Independent(i) => {
                let (l0, l1) = (i.lambda0, i.lambda1());
                for bits in 0..n {
                    let ones = (bits as u32).count_ones() as usize;
                    let ln_h = power_ln(l0, width - ones) + power_ln(l1, ones);
                    out.push([(ln_h + ln_or_neg_inf(l0)).exp(), (ln_h + ln_or_neg_inf(l1)).exp()]);
                }
            }
        }
        Ok(out)
    }
}

/// `k ln x`, with `0^0 = 1`.
fn power_ln(x: f64, k: usize) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * ln_or_neg_inf(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_edges() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(-0.1).is_err());
    }

    #[test]
    fn absorbing_chain_has_no_stationary_law() {
        let m = MarkovSource::new(0.0, 0.0).unwrap();
        assert!(matches!(stationary_distribution(&m), Err(Error::UndefinedStationary)));
        assert!(entropy_rate_markov(&m).is_err());
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(MarkovSource::new(1.2, 0.5).is_err());
        assert!(IndependentSource::new(-0.01).is_err());
    }

    #[test]
    fn single_symbol_markov_is_stationary() {
        let m = MarkovSource::new(0.6, 0.62).unwrap();
        let p = Source::from(m).sequence_probability(&[0]).unwrap();
        assert!((p - 0.62 / 1.22).abs() < 1e-15);
    }

    #[test]
    fn empty_sequence_rejected() {
        let s = Source::from(IndependentSource::new(0.5).unwrap());
        assert!(s.sequence_probability(&[]).is_err());
    }

    #[test]
    fn joint_matches_sequence_probability() {
        let src = Source::from(MarkovSource::new(0.3, 0.8).unwrap());
        let joint = src.history_joint(3).unwrap();
        for bits in 0..8usize {
            let mut seq: Vec<u8> = (0..3).map(|k| ((bits >> k) & 1) as u8).collect();
            for s in 0..2u8 {
                seq.push(s);
                let direct = src.sequence_probability(&seq).unwrap();
                assert!((joint[bits][s as usize] - direct).abs() < 1e-15);
                seq.pop();
            }
        }
    }
}
