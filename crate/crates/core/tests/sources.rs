use diffusion_air::source::{
    binary_entropy, entropy_rate_markov, stationary_distribution, IndependentSource, MarkovSource,
    Source,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn binary_entropy_reference() {
    assert!((binary_entropy(0.11).unwrap() - 0.499915958164528).abs() < 1e-14);
}

#[test]
fn stationary_law_and_rate() {
    let m = MarkovSource::new(0.6, 0.62).unwrap();
    let pi = stationary_distribution(&m).unwrap();
    assert!((pi.pi0 - 0.62 / 1.22).abs() < 1e-15);
    assert!((pi.pi0 + pi.pi1 - 1.0).abs() < 1e-15);
    let rate = entropy_rate_markov(&m).unwrap();
    let direct = pi.pi0 * binary_entropy(0.6).unwrap() + pi.pi1 * binary_entropy(0.62).unwrap();
    assert_eq!(rate, direct);
    // deterministic alternation carries no information
    let alt = MarkovSource::new(1.0, 1.0).unwrap();
    assert_eq!(entropy_rate_markov(&alt).unwrap(), 0.0);
}

#[test]
fn sampled_stream_has_stationary_frequencies() {
    let src = Source::from(MarkovSource::new(0.2, 0.6).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let seq = src.sample_sequence(200_000, &mut rng).unwrap();
    let ones = seq.iter().filter(|&&s| s == 1).count() as f64 / seq.len() as f64;
    // pi1 = 0.25; generous bound for a correlated chain
    assert!((ones - 0.25).abs() < 0.01, "{ones}");
}

fn all_sequences(n: usize) -> impl Iterator<Item = Vec<u8>> {
    (0..1u32 << n).map(move |b| (0..n).map(|k| ((b >> k) & 1) as u8).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sequence_law_is_normalised(p in 0.01f64..0.99, q in 0.01f64..0.99, n in 1usize..9) {
        let src = Source::from(MarkovSource::new(p, q).unwrap());
        let total: f64 = all_sequences(n).map(|s| src.sequence_probability(&s).unwrap()).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn independent_equals_its_markov_embedding(l0 in 0.01f64..0.99, n in 1usize..9) {
        let ind = IndependentSource::new(l0).unwrap();
        let a = Source::from(ind);
        let b = Source::from(ind.as_markov());
        prop_assert!((a.entropy_rate().unwrap() - b.entropy_rate().unwrap()).abs() < 1e-12);
        for s in all_sequences(n) {
            let (x, y) = (a.sequence_probability(&s).unwrap(), b.sequence_probability(&s).unwrap());
            prop_assert!((x - y).abs() <= 1e-12 * x.max(1e-300));
        }
    }

    #[test]
    fn rate_is_at_most_one_bit(p in 0.0f64..=1.0, q in 0.001f64..=1.0) {
        let rate = entropy_rate_markov(&MarkovSource::new(p, q).unwrap()).unwrap();
        prop_assert!((0.0..=1.0 + 1e-15).contains(&rate));
    }
}
