//! Mutual information between the transmitted symbol and the detector output.
//!
//! All four variants share the same structure:
//!
//! ```text
//! I = H(S_i | S_{i-1}) - H(S_i | conditioning)
//! ```
//!
//! where the leading term is the source entropy rate and the conditioning is
//! either `(S_{i-M+1}..S_{i-1}, Ŝ_i)` for an ISI-aware receiver or `Ŝ_i`
//! alone for an ISI-unaware one. The joint law of the past symbols is the
//! source's sequence law started from its stationary distribution.
//! Negative values are clipped to zero and flagged.

use std::fmt;
use std::str::FromStr;

use crate::detection::{build_transition_table, CountMoments, Detector, History, TransitionTable};
use crate::physics::{ChannelImpulseResponse, SystemParams};
use crate::source::{h2, IndependentSource, MarkovSource, Source};
use crate::summation::{pairwise, Acc4};
use crate::{Error, Result};

/// Source statistics assumed by the rate computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SourceKind {
    /// First-order Markov ("correlated") source.
    Markov,
    Independent,
}

/// What the receiver knows about previously transmitted symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IsiKnowledge {
    /// Past `M - 1` symbols are known.
    Aware,
    Unaware,
}

/// One of the four source / receiver-knowledge combinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scenario {
    pub source_kind: SourceKind,
    pub isi: IsiKnowledge,
}

impl Scenario {
    pub const CRR_ISIA: Scenario =
        Scenario { source_kind: SourceKind::Markov, isi: IsiKnowledge::Aware };
    pub const CRR_ISIU: Scenario =
        Scenario { source_kind: SourceKind::Markov, isi: IsiKnowledge::Unaware };
    pub const IND_ISIA: Scenario =
        Scenario { source_kind: SourceKind::Independent, isi: IsiKnowledge::Aware };
    pub const IND_ISIU: Scenario =
        Scenario { source_kind: SourceKind::Independent, isi: IsiKnowledge::Unaware };

    pub const ALL: [Scenario; 4] =
        [Scenario::CRR_ISIA, Scenario::CRR_ISIU, Scenario::IND_ISIA, Scenario::IND_ISIU];

    pub fn name(self) -> &'static str {
        match (self.source_kind, self.isi) {
            (SourceKind::Markov, IsiKnowledge::Aware) => "crr-isia",
            (SourceKind::Markov, IsiKnowledge::Unaware) => "crr-isiu",
            (SourceKind::Independent, IsiKnowledge::Aware) => "ind-isia",
            (SourceKind::Independent, IsiKnowledge::Unaware) => "ind-isiu",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| Error::invalid("scenario", format!("unknown scenario `{s}`")))
    }
}

/// Mutual information in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiResult {
    /// `max(0, raw)`.
    pub mi: f64,
    /// Value before clipping.
    pub raw: f64,
    /// True when `raw` was negative.
    pub clipped: bool,
}

impl MiResult {
    fn from_raw(raw: f64) -> Self {
        MiResult { mi: raw.max(0.0), raw, clipped: raw < 0.0 }
    }
}

/// Conditional entropy `H(S_i | conditioning)` in bits.
///
/// `joint[h][s]` is `P(history = h, S_i = s)` and `p_one(h, s)` is
/// `P(Ŝ_i = 1 | h, s)`.
fn equivocation<F>(joint: &[[f64; 2]], p_one: F, isi: IsiKnowledge) -> f64
where
    F: Fn(usize, usize) -> f64,
{
    match isi {
        IsiKnowledge::Aware => {
            let term = |h: usize| {
                let [w0, w1] = joint[h];
                let (p0, p1) = (p_one(h, 0), p_one(h, 1));
                let mut acc = 0.0;
                for (a0, a1) in [(w0 * p0, w1 * p1), (w0 * (1.0 - p0), w1 * (1.0 - p1))] {
                    let z = a0 + a1;
                    if z > 0.0 {
                        acc += z * h2(a1 / z);
                    }
                }
                acc
            };
            pairwise(0, joint.len(), &term)
        }
        IsiKnowledge::Unaware => {
            // [P(0, ŝ=0), P(0, ŝ=1), P(1, ŝ=0), P(1, ŝ=1)]
            let term = |h: usize| {
                let [w0, w1] = joint[h];
                let (p0, p1) = (p_one(h, 0), p_one(h, 1));
                Acc4([w0 * (1.0 - p0), w0 * p0, w1 * (1.0 - p1), w1 * p1])
            };
            let Acc4(j) = pairwise(0, joint.len(), &term);
            let mut acc = 0.0;
            for (a0, a1) in [(j[0], j[2]), (j[1], j[3])] {
                let z = a0 + a1;
                if z > 0.0 {
                    acc += z * h2(a1 / z);
                }
            }
            acc
        }
    }
}

/// Mutual information for a tabulated channel and any source.
pub fn mutual_information(
    table: &TransitionTable,
    src: &Source,
    isi: IsiKnowledge,
) -> Result<MiResult> {
    let joint = src.history_joint(table.history_width())?;
    let rate = src.entropy_rate()?;
    let h = equivocation(&joint, |h, s| table.p_one(h, s), isi);
    Ok(MiResult::from_raw(rate - h))
}

/// `P(S_i = s | history, Ŝ_i = ŝ)` by Bayes inversion of the transition table.
///
/// The prior on `s` is `P(s | s_{i-1})` for a Markov source (its stationary
/// law when the history is empty) and `λ_s` for an independent source.
/// Returns `None` when the conditioning event has probability zero.
pub fn posterior_given_history(
    table: &TransitionTable,
    src: &Source,
    history: History,
    s_hat: u8,
    s: u8,
) -> Result<Option<f64>> {
    if history.width() != table.history_width() {
        return Err(Error::HistoryWidth { expected: table.history_width(), got: history.width() });
    }
    let prev = history.previous();
    let weighted =
        |x: u8| -> Result<f64> { Ok(table.get(history, x, s_hat) * src.conditional(prev, x)?) };
    let num = weighted(s)?;
    let den = weighted(0)? + weighted(1)?;
    if den <= 0.0 {
        return Ok(None);
    }
    Ok(Some(num / den))
}

/// Markov source, receiver knows the past `M - 1` symbols.
pub fn mi_isia_markov(
    cir: &ChannelImpulseResponse,
    params: &SystemParams,
    det: Detector,
    src: &MarkovSource,
) -> Result<MiResult> {
    let table = build_transition_table(cir, params, det)?;
    mutual_information(&table, &Source::Markov(*src), IsiKnowledge::Aware)
}

/// Markov source, receiver ignores the past symbols.
pub fn mi_isiu_markov(
    cir: &ChannelImpulseResponse,
    params: &SystemParams,
    det: Detector,
    src: &MarkovSource,
) -> Result<MiResult> {
    let table = build_transition_table(cir, params, det)?;
    mutual_information(&table, &Source::Markov(*src), IsiKnowledge::Unaware)
}

/// Independent source, receiver knows the past `M - 1` symbols.
pub fn mi_isia_independent(
    cir: &ChannelImpulseResponse,
    params: &SystemParams,
    det: Detector,
    src: &IndependentSource,
) -> Result<MiResult> {
    let table = build_transition_table(cir, params, det)?;
    mutual_information(&table, &Source::Independent(*src), IsiKnowledge::Aware)
}

/// Independent source, receiver ignores the past symbols.
pub fn mi_isiu_independent(
    cir: &ChannelImpulseResponse,
    params: &SystemParams,
    det: Detector,
    src: &IndependentSource,
) -> Result<MiResult> {
    let table = build_transition_table(cir, params, det)?;
    mutual_information(&table, &Source::Independent(*src), IsiKnowledge::Unaware)
}

/// Evaluates the MI of one source on one channel at many thresholds.
///
/// The history weights and count moments are computed once; each threshold
/// costs one pass over the `2^(M-1)` histories.
pub(crate) struct MiEvaluator<'a> {
    moments: &'a CountMoments,
    joint: Vec<[f64; 2]>,
    rate: f64,
    isi: IsiKnowledge,
}

impl<'a> MiEvaluator<'a> {
    pub(crate) fn new(moments: &'a CountMoments, src: &Source, isi: IsiKnowledge) -> Result<Self> {
        Ok(MiEvaluator {
            moments,
            joint: src.history_joint(moments.width())?,
            rate: src.entropy_rate()?,
            isi,
        })
    }

    pub(crate) fn eval(&self, tau: f64) -> MiResult {
        let h = equivocation(&self.joint, |h, s| self.moments.p_one(h, s, tau), self.isi);
        MiResult::from_raw(self.rate - h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_names_round_trip() {
        for sc in Scenario::ALL {
            assert_eq!(sc.name().parse::<Scenario>().unwrap(), sc);
        }
        assert!("crr".parse::<Scenario>().is_err());
    }

    #[test]
    fn clipping_flag() {
        let r = MiResult::from_raw(-0.2);
        assert_eq!(r.mi, 0.0);
        assert!(r.clipped);
        let r = MiResult::from_raw(0.3);
        assert_eq!(r.mi, 0.3);
        assert!(!r.clipped);
    }

    #[test]
    fn impossible_conditioning_has_no_posterior() {
        let table = TransitionTable::from_rows(1, 0.0, vec![[1.0, 1.0]]).unwrap();
        let src = Source::from(IndependentSource::new(0.5).unwrap());
        let post = posterior_given_history(&table, &src, History::empty(), 0, 0).unwrap();
        assert_eq!(post, None);
        let post = posterior_given_history(&table, &src, History::empty(), 1, 1).unwrap();
        assert_eq!(post, Some(0.5));
    }
}
