mod common;

use common::{brute_force_mi, independent_window, markov_window};
use diffusion_air::detection::{build_transition_table, Detector, History};
use diffusion_air::info::{
    mi_isia_independent, mi_isia_markov, mi_isiu_independent, mi_isiu_markov,
    mutual_information, posterior_given_history, IsiKnowledge,
};
use diffusion_air::optimize::aware_and_unaware;
use diffusion_air::physics::{compute_cir, ChannelImpulseResponse, SystemParams};
use diffusion_air::source::{binary_entropy, IndependentSource, MarkovSource, Source};
use proptest::prelude::*;

fn synthetic(taps: &[f64]) -> ChannelImpulseResponse {
    ChannelImpulseResponse::from_taps(0.5, taps.to_vec()).unwrap()
}

const SYNTHETIC: [&[f64]; 4] = [&[0.06], &[0.05, 0.02], &[0.04, 0.015, 0.008], &[0.02, 0.03, 0.01]];

#[test]
fn markov_formulas_match_joint_enumeration() {
    let params = SystemParams::default();
    for taps in SYNTHETIC {
        let cir = synthetic(taps);
        for (p, q) in [(0.6, 0.62), (0.2, 0.9), (0.5, 0.5)] {
            let src = MarkovSource::new(p, q).unwrap();
            let rate = Source::from(src).entropy_rate().unwrap();
            for tau in [120.0, 300.0, 520.0] {
                let det = Detector::new(tau).unwrap();
                let (aware, unaware) =
                    brute_force_mi(&cir, &params, tau, rate, |w| markov_window(p, q, w));
                let a = mi_isia_markov(&cir, &params, det, &src).unwrap();
                let u = mi_isiu_markov(&cir, &params, det, &src).unwrap();
                assert!((a.raw - aware).abs() < 1e-9, "{taps:?} {p} {q} {tau}: {} vs {aware}", a.raw);
                assert!((u.raw - unaware).abs() < 1e-9, "{taps:?} {p} {q} {tau}: {} vs {unaware}", u.raw);
            }
        }
    }
}

#[test]
fn independent_formulas_match_joint_enumeration() {
    let params = SystemParams::default();
    for taps in SYNTHETIC {
        let cir = synthetic(taps);
        for l0 in [0.52, 0.28, 0.75] {
            let src = IndependentSource::new(l0).unwrap();
            let rate = binary_entropy(l0).unwrap();
            for tau in [120.0, 300.0, 520.0] {
                let det = Detector::new(tau).unwrap();
                let (aware, unaware) =
                    brute_force_mi(&cir, &params, tau, rate, |w| independent_window(l0, w));
                let a = mi_isia_independent(&cir, &params, det, &src).unwrap();
                let u = mi_isiu_independent(&cir, &params, det, &src).unwrap();
                assert!((a.raw - aware).abs() < 1e-9);
                assert!((u.raw - unaware).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn posterior_identity_matches_joint() {
    let params = SystemParams::default();
    let cir = synthetic(&[0.04, 0.015, 0.008]);
    let det = Detector::new(300.0).unwrap();
    let table = build_transition_table(&cir, &params, det).unwrap();
    let (p, q) = (0.3, 0.7);
    let src = Source::from(MarkovSource::new(p, q).unwrap());
    for h in History::all(2) {
        for s_hat in 0..2u8 {
            let mut joint = [0.0; 2];
            for s in 0..2u8 {
                let mut w = h.symbols();
                w.push(s);
                let p1 = common::p_detect(&cir, &params, &w, 300.0);
                joint[s as usize] = markov_window(p, q, &w) * if s_hat == 1 { p1 } else { 1.0 - p1 };
            }
            for s in 0..2u8 {
                let post = posterior_given_history(&table, &src, h, s_hat, s).unwrap().unwrap();
                let direct = joint[s as usize] / (joint[0] + joint[1]);
                assert!((post - direct).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn useless_detector_clips_unaware_markov_rate() {
    // with Ŝ constant, the aware rate is H(S_i|S_{i-1}) - H(S_i|S_{i-1}) = 0,
    // while the unaware one is H(S_i|S_{i-1}) - H(S_i) < 0 and gets clipped
    let params = SystemParams::default();
    let cir = compute_cir(&params, 1.0).unwrap();
    let src = MarkovSource::new(0.2, 0.3).unwrap();
    let det = Detector::new(1e6).unwrap();
    let a = mi_isia_markov(&cir, &params, det, &src).unwrap();
    assert!(a.raw.abs() < 1e-12);
    let u = mi_isiu_markov(&cir, &params, det, &src).unwrap();
    let rate = Source::from(src).entropy_rate().unwrap();
    let expected = rate - binary_entropy(0.2 / 0.5).unwrap();
    assert!((u.raw - expected).abs() < 1e-12);
    assert!(u.clipped);
    assert_eq!(u.mi, 0.0);
}

#[test]
fn memoryless_channel_aware_equals_unaware() {
    let params = SystemParams::default();
    let cir = synthetic(&[0.06]);
    let src = Source::from(MarkovSource::new(0.3, 0.6).unwrap());
    let table = build_transition_table(&cir, &params, Detector::new(330.0).unwrap()).unwrap();
    let a = mutual_information(&table, &src, IsiKnowledge::Aware).unwrap();
    let u = mutual_information(&table, &src, IsiKnowledge::Unaware).unwrap();
    assert_eq!(a, u);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn aware_dominates_unaware(
        p in 0.01f64..0.99, q in 0.01f64..0.99, tau in 0.0f64..900.0, t_sym in 0.3f64..1.5,
    ) {
        let params = SystemParams::default();
        let cir = compute_cir(&params, t_sym).unwrap();
        let src = Source::from(MarkovSource::new(p, q).unwrap());
        let (a, u) = aware_and_unaware(&cir, &params, &src, tau).unwrap();
        prop_assert!(a.raw >= u.raw - 1e-9, "{} < {}", a.raw, u.raw);
        let ind = Source::from(IndependentSource::new(p).unwrap());
        let (a, u) = aware_and_unaware(&cir, &params, &ind, tau).unwrap();
        prop_assert!(a.raw >= u.raw - 1e-9);
    }

    #[test]
    fn markov_embedding_reproduces_independent(l0 in 0.01f64..0.99, tau in 0.0f64..900.0, t_sym in 0.3f64..1.5) {
        let params = SystemParams::default();
        let cir = compute_cir(&params, t_sym).unwrap();
        let ind = Source::from(IndependentSource::new(l0).unwrap());
        let emb = Source::from(IndependentSource::new(l0).unwrap().as_markov());
        let (a1, u1) = aware_and_unaware(&cir, &params, &ind, tau).unwrap();
        let (a2, u2) = aware_and_unaware(&cir, &params, &emb, tau).unwrap();
        prop_assert!((a1.raw - a2.raw).abs() < 1e-9);
        prop_assert!((u1.raw - u2.raw).abs() < 1e-9);
    }

    #[test]
    fn mi_never_exceeds_source_rate(p in 0.01f64..0.99, q in 0.01f64..0.99, tau in 0.0f64..900.0) {
        let params = SystemParams::default();
        let cir = compute_cir(&params, 0.8).unwrap();
        let src = Source::from(MarkovSource::new(p, q).unwrap());
        let (a, _) = aware_and_unaware(&cir, &params, &src, tau).unwrap();
        prop_assert!(a.mi <= src.entropy_rate().unwrap() + 1e-12);
    }
}
