//! Brute-force maximisation: detector threshold per input distribution, then
//! the AIR over a grid of input distributions.

use rayon::prelude::*;

use crate::detection::CountMoments;
use crate::info::{IsiKnowledge, MiEvaluator, MiResult, Scenario, SourceKind};
use crate::physics::{compute_cir, ChannelImpulseResponse, SystemParams};
use crate::source::{IndependentSource, MarkovSource, Source};
use crate::{Error, Result};

/// Shrink factor of the threshold window between refinement rounds.
pub const REFINE_SHRINK: f64 = 0.2;

/// Achievable information rate in bits/s.
pub fn air(mi: f64, t_sym: f64) -> Result<f64> {
    if !(t_sym > 0.0) {
        return Err(Error::invalid("t_sym", "must be > 0"));
    }
    Ok(mi / t_sym)
}

/// Grid resolution of the threshold search, independent of the channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchSettings {
    pub coarse_steps: usize,
    pub refine_rounds: usize,
}

impl Default for SearchSettings {
    fn default() -> Self {
        SearchSettings { coarse_steps: 256, refine_rounds: 3 }
    }
}

/// Threshold search interval and resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSearch {
    pub lo: f64,
    pub hi: f64,
    pub coarse_steps: usize,
    pub refine_rounds: usize,
}

impl ThresholdSearch {
    pub fn new(lo: f64, hi: f64, coarse_steps: usize, refine_rounds: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::invalid("threshold_search", "need finite lo < hi"));
        }
        if coarse_steps < 16 {
            return Err(Error::invalid("coarse_steps", "must be >= 16"));
        }
        Ok(ThresholdSearch { lo, hi, coarse_steps, refine_rounds })
    }

    /// Interval covering every conditional count distribution of the channel:
    /// from `μ_E - 4σ_E` up to the all-ones mean plus four of its deviations.
    pub fn covering(
        cir: &ChannelImpulseResponse,
        params: &SystemParams,
        settings: SearchSettings,
    ) -> Result<Self> {
        let sum_h: f64 = cir.taps().iter().sum();
        let sum_var: f64 = cir.taps().iter().map(|h| h * (1.0 - h)).sum();
        let lo = params.noise_mean - 4.0 * params.noise_std;
        let hi = params.noise_mean
            + params.n_released * sum_h
            + 4.0 * (params.noise_std.powi(2) + params.n_released * sum_var).sqrt();
        ThresholdSearch::new(lo, hi, settings.coarse_steps, settings.refine_rounds)
    }
}

/// Best threshold found and the MI it achieves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdOptimum {
    pub tau: f64,
    pub mi: MiResult,
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(move |k| if k + 1 == n { hi } else { lo + k as f64 * step })
}

/// Coarse scan plus geometric refinement; ties go to the smaller threshold.
fn search_threshold<F>(mi_at: F, search: &ThresholdSearch) -> ThresholdOptimum
where
    F: Fn(f64) -> MiResult,
{
    let mut best = ThresholdOptimum { tau: search.lo, mi: mi_at(search.lo) };
    let consider = |tau: f64, best: &mut ThresholdOptimum| {
        let mi = mi_at(tau);
        if mi.raw > best.mi.raw || (mi.raw == best.mi.raw && tau < best.tau) {
            *best = ThresholdOptimum { tau, mi };
        }
    };
    for tau in linspace(search.lo, search.hi, search.coarse_steps).skip(1) {
        consider(tau, &mut best);
    }
    let mut half = 0.5 * (search.hi - search.lo);
    for _ in 0..search.refine_rounds {
        half *= REFINE_SHRINK;
        let lo = (best.tau - half).max(search.lo);
        let hi = (best.tau + half).min(search.hi);
        for tau in linspace(lo, hi, search.coarse_steps) {
            consider(tau, &mut best);
        }
    }
    best
}

fn check_source(scenario: Scenario, src: &Source) -> Result<()> {
    let ok = matches!(
        (scenario.source_kind, src),
        (SourceKind::Markov, Source::Markov(_)) | (SourceKind::Independent, Source::Independent(_))
    );
    if !ok {
        return Err(Error::invalid("source", format!("source does not match scenario {scenario}")));
    }
    Ok(())
}

/// Threshold maximising the scenario's MI for one source.
pub fn optimize_threshold(
    scenario: Scenario,
    cir: &ChannelImpulseResponse,
    params: &SystemParams,
    src: &Source,
    search: &ThresholdSearch,
) -> Result<ThresholdOptimum> {
    check_source(scenario, src)?;
    let moments = CountMoments::new(cir, params)?;
    let eval = MiEvaluator::new(&moments, src, scenario.isi)?;
    Ok(search_threshold(|tau| eval.eval(tau), search))
}

/// Input distribution parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InputParams {
    Markov { p: f64, q: f64 },
    Independent { lambda0: f64 },
}

impl InputParams {
    pub fn source(&self) -> Result<Source> {
        Ok(match *self {
            InputParams::Markov { p, q } => MarkovSource::new(p, q)?.into(),
            InputParams::Independent { lambda0 } => IndependentSource::new(lambda0)?.into(),
        })
    }

    /// `p` or `λ0`.
    pub fn param1(&self) -> f64 {
        match *self {
            InputParams::Markov { p, .. } => p,
            InputParams::Independent { lambda0 } => lambda0,
        }
    }

    /// `q`, absent for the independent source.
    pub fn param2(&self) -> Option<f64> {
        match *self {
            InputParams::Markov { q, .. } => Some(q),
            InputParams::Independent { .. } => None,
        }
    }
}

/// Candidate values for each input-distribution coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct InputGrid {
    values: Vec<f64>,
}

impl InputGrid {
    /// `step, 2 step, ..., 1 - step`; `step` must divide 1.
    pub fn uniform(step: f64) -> Result<Self> {
        if !(step > 0.0 && step < 1.0) {
            return Err(Error::invalid("grid_step", "must lie in (0, 1)"));
        }
        let n = (1.0 / step).round();
        if (n * step - 1.0).abs() > 1e-9 || n < 2.0 {
            return Err(Error::invalid("grid_step", "must divide the unit interval"));
        }
        let n = n as usize;
        Ok(InputGrid { values: (1..n).map(|k| k as f64 / n as f64).collect() })
    }

    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::invalid("grid", "values must be non-empty and lie in [0, 1]"));
        }
        values.sort_by(f64::total_cmp);
        values.dedup();
        Ok(InputGrid { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Grid points for a source kind, in lexicographic order.
    pub fn points(&self, kind: SourceKind) -> Vec<InputParams> {
        match kind {
            SourceKind::Markov => self
                .values
                .iter()
                .flat_map(|&p| self.values.iter().map(move |&q| InputParams::Markov { p, q }))
                .collect(),
            SourceKind::Independent => {
                self.values.iter().map(|&lambda0| InputParams::Independent { lambda0 }).collect()
            }
        }
    }
}

/// Threshold-optimised rate at one input distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub input: InputParams,
    pub tau: f64,
    pub mi: MiResult,
    /// Bits per second.
    pub air: f64,
}

/// AIR over an input grid at fixed symbol interval.
#[derive(Debug, Clone, PartialEq)]
pub struct AirSurface {
    pub scenario: Scenario,
    pub t_sym: f64,
    pub memory: usize,
    pub points: Vec<SurfacePoint>,
}

/// Maximum AIR over the input grid and where it is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityResult {
    pub scenario: Scenario,
    /// Bits per second.
    pub air: f64,
    /// Bits per channel use.
    pub mi: f64,
    pub t_sym: f64,
    pub tau: f64,
    pub argmax: InputParams,
    pub memory: usize,
}

impl AirSurface {
    /// Grid maximum; the earliest point in grid order wins ties.
    pub fn capacity(&self) -> CapacityResult {
        let best = self
            .points
            .iter()
            .fold(None::<&SurfacePoint>, |acc, pt| match acc {
                Some(b) if pt.air <= b.air => Some(b),
                _ => Some(pt),
            })
            .expect("surface has at least one point");
        CapacityResult {
            scenario: self.scenario,
            air: best.air,
            mi: best.mi.mi,
            t_sym: self.t_sym,
            tau: best.tau,
            argmax: best.input,
            memory: self.memory,
        }
    }
}

/// Threshold-optimised AIR for every grid point, evaluated in parallel.
pub fn air_surface(
    scenario: Scenario,
    params: &SystemParams,
    t_sym: f64,
    grid: &InputGrid,
    settings: SearchSettings,
) -> Result<AirSurface> {
    let cir = compute_cir(params, t_sym)?;
    air_surface_for(scenario, &cir, params, grid, settings)
}

/// As [`air_surface`] for an explicit channel response.
pub fn air_surface_for(
    scenario: Scenario,
    cir: &ChannelImpulseResponse,
    params: &SystemParams,
    grid: &InputGrid,
    settings: SearchSettings,
) -> Result<AirSurface> {
    let points = evaluate_points(scenario, cir, params, grid.points(scenario.source_kind), settings)?;
    let t_sym = cir.t_sym();
    Ok(AirSurface { scenario, t_sym, memory: cir.memory(), points })
}

fn evaluate_points(
    scenario: Scenario,
    cir: &ChannelImpulseResponse,
    params: &SystemParams,
    inputs: Vec<InputParams>,
    settings: SearchSettings,
) -> Result<Vec<SurfacePoint>> {
    let search = ThresholdSearch::covering(cir, params, settings)?;
    let moments = CountMoments::new(cir, params)?;
    let t_sym = cir.t_sym();
    inputs
        .into_par_iter()
        .map(|input| {
            let src = input.source()?;
            let eval = MiEvaluator::new(&moments, &src, scenario.isi)?;
            let opt = search_threshold(|tau| eval.eval(tau), &search);
            Ok(SurfacePoint { input, tau: opt.tau, mi: opt.mi, air: air(opt.mi.mi, t_sym)? })
        })
        .collect()
}

/// Two-stage capacity: the full `coarse` grid, then every `fine` point
/// within one coarse spacing of the coarse maximum in each coordinate.
///
/// Much cheaper than scanning the whole fine grid and equal to it whenever
/// the AIR surface has a single basin at the coarse resolution.
pub fn capacity_refined(
    scenario: Scenario,
    params: &SystemParams,
    t_sym: f64,
    coarse: &InputGrid,
    fine: &InputGrid,
    settings: SearchSettings,
) -> Result<CapacityResult> {
    let cir = compute_cir(params, t_sym)?;
    let first = air_surface_for(scenario, &cir, params, coarse, settings)?.capacity();
    let spacing = coarse.values().windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let radius = if spacing > 0.0 { spacing + 1e-9 } else { 1.0 };
    let near = |c: f64, v: f64| (v - c).abs() <= radius;
    let inputs: Vec<InputParams> = fine
        .points(scenario.source_kind)
        .into_iter()
        .filter(|pt| {
            near(first.argmax.param1(), pt.param1())
                && match (first.argmax.param2(), pt.param2()) {
                    (Some(c), Some(v)) => near(c, v),
                    _ => true,
                }
        })
        .collect();
    let mut inputs = inputs;
    if !inputs.contains(&first.argmax) {
        inputs.push(first.argmax);
    }
    let points = evaluate_points(scenario, &cir, params, inputs, settings)?;
    Ok(AirSurface { scenario, t_sym, memory: cir.memory(), points }.capacity())
}

/// Memoryless capacity at one symbol interval.
pub fn capacity(
    scenario: Scenario,
    params: &SystemParams,
    t_sym: f64,
    grid: &InputGrid,
    settings: SearchSettings,
) -> Result<CapacityResult> {
    Ok(air_surface(scenario, params, t_sym, grid, settings)?.capacity())
}

/// One point of a capacity curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepPoint {
    Done(CapacityResult),
    /// The effective memory exceeded the cap; the point was not evaluated.
    Skipped { t_sym: f64, required: usize, cap: usize },
}

impl SweepPoint {
    pub fn t_sym(&self) -> f64 {
        match self {
            SweepPoint::Done(c) => c.t_sym,
            SweepPoint::Skipped { t_sym, .. } => *t_sym,
        }
    }

    pub fn result(&self) -> Option<&CapacityResult> {
        match self {
            SweepPoint::Done(c) => Some(c),
            SweepPoint::Skipped { .. } => None,
        }
    }
}

/// `lo, lo + step, ...` up to and including `hi` (within rounding).
pub fn t_sym_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(lo > 0.0) || hi < lo {
        return Err(Error::invalid("t_sym_range", "need 0 < lo <= hi and step > 0"));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| ((lo + k as f64 * step) * 1e9).round() / 1e9).collect())
}

/// Capacity for each symbol interval; memory overflows skip the point.
pub fn capacity_sweep(
    scenario: Scenario,
    params: &SystemParams,
    t_syms: &[f64],
    grid: &InputGrid,
    settings: SearchSettings,
) -> Result<Vec<SweepPoint>> {
    t_syms
        .iter()
        .map(|&t_sym| match capacity(scenario, params, t_sym, grid, settings) {
            Ok(c) => Ok(SweepPoint::Done(c)),
            Err(Error::MemoryOverflow { required, cap }) => {
                Ok(SweepPoint::Skipped { t_sym, required, cap })
            }
            Err(e) => Err(e),
        })
        .collect()
}

/// Both knowledge levels evaluated at the same threshold, for dominance checks.
pub fn aware_and_unaware(
    cir: &ChannelImpulseResponse,
    params: &SystemParams,
    src: &Source,
    tau: f64,
) -> Result<(MiResult, MiResult)> {
    let moments = CountMoments::new(cir, params)?;
    let aware = MiEvaluator::new(&moments, src, IsiKnowledge::Aware)?.eval(tau);
    let unaware = MiEvaluator::new(&moments, src, IsiKnowledge::Unaware)?.eval(tau);
    Ok((aware, unaware))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn air_arithmetic() {
        assert_eq!(air(1.0, 0.5).unwrap(), 2.0);
        assert_eq!(air(0.0, 3.0).unwrap(), 0.0);
        assert!(air(1.0, 0.0).is_err());
        assert!(air(1.0, -1.0).is_err());
    }

    #[test]
    fn uniform_grid_excludes_boundaries() {
        let g = InputGrid::uniform(0.01).unwrap();
        assert_eq!(g.values().len(), 99);
        assert_eq!(g.values()[0], 0.01);
        assert_eq!(g.values()[98], 0.99);
        assert!(InputGrid::uniform(0.03).is_err());
        assert!(InputGrid::uniform(0.0).is_err());
    }

    #[test]
    fn search_rejects_small_grids() {
        assert!(ThresholdSearch::new(0.0, 1.0, 8, 3).is_err());
        assert!(ThresholdSearch::new(1.0, 0.0, 32, 3).is_err());
    }

    #[test]
    fn search_prefers_smallest_tie() {
        let s = ThresholdSearch::new(0.0, 10.0, 16, 2).unwrap();
        let flat = search_threshold(|_| MiResult { mi: 0.0, raw: 0.0, clipped: false }, &s);
        assert_eq!(flat.tau, 0.0);
    }

    #[test]
    fn search_finds_parabola_peak() {
        let s = ThresholdSearch::new(-10.0, 10.0, 32, 3).unwrap();
        let f = |t: f64| {
            let raw = 1.0 - (t - 3.3) * (t - 3.3);
            MiResult { mi: raw.max(0.0), raw, clipped: raw < 0.0 }
        };
        let best = search_threshold(f, &s);
        // final step is 2 * 20 * 0.2^3 / 2 / 31
        assert!((best.tau - 3.3).abs() < 0.006, "{}", best.tau);
    }

    #[test]
    fn t_sym_grid_includes_endpoint() {
        let g = t_sym_grid(0.2, 1.5, 0.05).unwrap();
        assert_eq!(g.len(), 27);
        assert_eq!(g[0], 0.2);
        assert_eq!(*g.last().unwrap(), 1.5);
        assert!(g.contains(&0.4));
    }
}
