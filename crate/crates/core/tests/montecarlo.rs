use diffusion_air::detection::{q_function, Detector, History};
use diffusion_air::info::Scenario;
use diffusion_air::montecarlo::{
    empirical_mi, empirical_transitions, pulse_replications, replication_rng,
    sample_hitting_time, simulate_pulse, simulate_stream, SimConfig, TailPolicy,
};
use diffusion_air::physics::{compute_cir, expected_cumulative_absorbed, SystemParams};
use diffusion_air::source::{MarkovSource, Source};

fn uniform_source() -> Source {
    Source::from(MarkovSource::new(0.5, 0.5).unwrap())
}

#[test]
fn fraction_absorbed_matches_hit_probability() {
    let p = SystemParams::default();
    let mut rng = replication_rng(5, 1);
    let n = 1_000_000;
    let hits = (0..n).filter(|_| sample_hitting_time(&p, &mut rng, 1e-4).is_some()).count();
    let frac = hits as f64 / n as f64;
    assert!((frac - 0.1).abs() <= 3.0 * (0.1f64 * 0.9 / n as f64).sqrt(), "{frac}");
}

#[test]
fn hitting_times_follow_the_absorption_curve() {
    let p = SystemParams::default();
    let beta = p.hit_probability();
    let mut rng = replication_rng(6, 1);
    let mut times: Vec<f64> = std::iter::repeat_with(|| sample_hitting_time(&p, &mut rng, 1e-6))
        .flatten()
        .take(20_000)
        .collect();
    times.sort_by(f64::total_cmp);
    let n = times.len() as f64;
    let cdf = |t: f64| expected_cumulative_absorbed(&p, t).unwrap() / p.n_released / beta;
    let ks = times
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let f = cdf(t);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max);
    // 1% critical value of the Kolmogorov distribution
    assert!(ks < 1.628 / n.sqrt(), "KS statistic {ks}");

    let earliest = (p.distance - p.receiver_radius).powi(2) / (4.0 * p.diffusion_coeff * 40.0);
    assert!(times[0] > earliest);
    // fraction absorbed by 2 s among absorbed particles
    let below = times.iter().filter(|&&t| t <= 2.0).count() as f64 / n;
    let f2 = cdf(2.0);
    assert!((below - f2).abs() < 3.0 * (f2 * (1.0 - f2) / n).sqrt());
}

#[test]
fn silent_stream_shows_only_noise() {
    let p = SystemParams::default();
    let cir = compute_cir(&p, 1.0).unwrap();
    let src = Source::from(MarkovSource::new(0.0, 1.0).unwrap());
    let n = 100_000;
    let stream =
        simulate_stream(&p, &cir, &src, Detector::new(150.0).unwrap(), &SimConfig::new(n, 3))
            .unwrap();
    assert!(stream.symbols.iter().all(|&s| s == 0));
    assert!(stream.counts.absorbed.iter().all(|&a| a == 0));
    let nf = n as f64;
    let mean = stream.counts.received.iter().map(|&r| r as f64).sum::<f64>() / nf;
    let var = stream.counts.received.iter().map(|&r| (r as f64 - mean).powi(2)).sum::<f64>() / nf;
    assert!((mean - 50.0).abs() < 3.0 * 50.0 / nf.sqrt(), "{mean}");
    // rounding adds 1/12 to the variance
    let var_ref = 2500.0 + 1.0 / 12.0;
    assert!((var - var_ref).abs() < 3.0 * var_ref * (2.0 / nf).sqrt(), "{var}");
    let ones = stream.counts.detected.iter().filter(|&&d| d == 1).count() as f64 / nf;
    // integer noise crosses 150 from 149.5 on: Q(1.99) rather than Q(2)
    let q = q_function(1.99);
    assert!((ones - q).abs() < 3.0 * (q * (1.0 - q) / nf).sqrt());
}

#[test]
fn isolated_pulse_statistics() {
    let p = SystemParams::default();
    let cir = compute_cir(&p, 1.0).unwrap();
    let m = cir.memory();
    let reps = 20_000;
    let pulses = pulse_replications(&p, 1.0, m, 17, reps).unwrap();
    let nf = reps as f64;
    let col = |i: usize| pulses.iter().map(move |pc| pc.per_interval[i] as f64);
    let mut means = Vec::new();
    let mut vars = Vec::new();
    for (i, &h) in cir.taps().iter().enumerate() {
        let mean = col(i).sum::<f64>() / nf;
        let var = col(i).map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0);
        let var_ref = p.n_released * h * (1.0 - h);
        assert!((mean - p.n_released * h).abs() < 3.0 * (var_ref / nf).sqrt(), "mean {i}");
        assert!((var - var_ref).abs() < 3.0 * var_ref * (2.0 / nf).sqrt() + 1.0, "var {i}");
        means.push(mean);
        vars.push(var);
    }
    // multinomial bins are negatively correlated, and only weakly
    for j in 1..3 {
        let cov = pulses
            .iter()
            .map(|pc| (pc.per_interval[0] as f64 - means[0]) * (pc.per_interval[j] as f64 - means[j]))
            .sum::<f64>()
            / (nf - 1.0);
        let cov_ref = -p.n_released * cir.taps()[0] * cir.taps()[j];
        let se = (vars[0] * vars[j] / nf).sqrt();
        assert!((cov - cov_ref).abs() < 3.0 * se, "cov {cov} vs {cov_ref}");
        assert!(cov < 0.0);
        assert!(cov.abs() / (vars[0] * vars[j]).sqrt() < 0.1);
    }
}

#[test]
fn particles_are_conserved() {
    let p = SystemParams::default();
    for pc in pulse_replications(&p, 0.5, 100, 9, 50).unwrap() {
        let absorbed: u64 = pc.per_interval.iter().map(|&c| c as u64).sum();
        assert_eq!(absorbed + pc.late as u64 + pc.never as u64, 10_000);
    }
    let mut rng = replication_rng(9, 0);
    let pc = simulate_pulse(&p, 0.5, 3, 1e-4, &mut rng).unwrap();
    assert_eq!(pc.per_interval.len(), 3);
    assert_eq!(pc.per_interval.iter().sum::<u32>() + pc.late + pc.never, 10_000);
}

#[test]
fn runs_are_reproducible_and_thread_independent() {
    let p = SystemParams::default();
    let cir = compute_cir(&p, 1.0).unwrap();
    let det = Detector::new(440.0).unwrap();
    let cfg = SimConfig::new(20_000, 77);
    let a = simulate_stream(&p, &cir, &uniform_source(), det, &cfg).unwrap();
    let b = simulate_stream(&p, &cir, &uniform_source(), det, &cfg).unwrap();
    assert_eq!(a, b);
    let c = simulate_stream(&p, &cir, &uniform_source(), det, &SimConfig::new(20_000, 78)).unwrap();
    assert_ne!(a.counts.received, c.counts.received);

    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| pulse_replications(&p, 1.0, 12, 3, 64).unwrap())
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn empirical_table_frequencies() {
    let p = SystemParams::default();
    let cir = compute_cir(&p, 1.0).unwrap();
    let det = Detector::new(300.0).unwrap();
    let cfg = SimConfig::new(200_000, 4).with_tail(TailPolicy::WithinMemory);
    let stream = simulate_stream(&p, &cir, &uniform_source(), det, &cfg).unwrap();
    let table = empirical_transitions(&stream, cir.memory()).unwrap();
    let mut total = 0;
    for h in History::all(cir.history_width()) {
        for s in 0..2 {
            let n = table.samples(h, s);
            total += n;
            assert_eq!(table.count(h, s, 0) + table.count(h, s, 1), n);
            if n > 0 {
                let f = table.frequency(h, s, 0).unwrap() + table.frequency(h, s, 1).unwrap();
                assert!((f - 1.0).abs() < 1e-15);
            }
        }
    }
    assert_eq!(total as usize, 200_000 - cir.history_width());
    assert!(table.empty_cells().is_empty());

    // noise-only cell
    let zero = History::new(0, cir.history_width()).unwrap();
    let n = table.samples(zero, 0) as f64;
    let f = table.frequency(zero, 0, 1).unwrap();
    let q = q_function((300.0 - 50.0) / 50.0);
    assert!((f - q).abs() <= 3.0 * (q * (1.0 - q) / n).sqrt() + 1.0 / n);
}

#[test]
fn short_streams_flag_empty_cells() {
    let p = SystemParams::default();
    let cir = compute_cir(&p, 1.0).unwrap();
    let det = Detector::new(300.0).unwrap();
    let stream = simulate_stream(&p, &cir, &uniform_source(), det, &SimConfig::new(100, 4)).unwrap();
    let table = empirical_transitions(&stream, cir.memory()).unwrap();
    assert!(!table.empty_cells().is_empty());
    assert!(empirical_mi(&stream, Scenario::CRR_ISIA, cir.memory()).is_err());
}

#[test]
fn plug_in_mi_matches_analytic_for_short_memory() {
    use diffusion_air::info::{mi_isia_markov, mi_isiu_markov};
    let p = SystemParams { alpha: 0.006, ..SystemParams::default() };
    let cir = compute_cir(&p, 1.0).unwrap();
    assert_eq!(cir.memory(), 3);
    let m = MarkovSource::new(0.45, 0.55).unwrap();
    let det = Detector::new(430.0).unwrap();
    let cfg = SimConfig::new(1_000_000, 8).with_tail(TailPolicy::WithinMemory);
    let stream = simulate_stream(&p, &cir, &Source::from(m), det, &cfg).unwrap();
    let aware = empirical_mi(&stream, Scenario::CRR_ISIA, 3).unwrap();
    let unaware = empirical_mi(&stream, Scenario::CRR_ISIU, 3).unwrap();
    assert!((aware - mi_isia_markov(&cir, &p, det, &m).unwrap().mi).abs() < 0.05);
    assert!((unaware - mi_isiu_markov(&cir, &p, det, &m).unwrap().mi).abs() < 0.05);
    assert!(aware >= unaware - 0.02);
}

#[test]
fn deterministic_alternation_carries_nothing_new() {
    let p = SystemParams::default();
    let cir = compute_cir(&p, 1.0).unwrap();
    let src = Source::from(MarkovSource::new(1.0, 1.0).unwrap());
    let stream =
        simulate_stream(&p, &cir, &src, Detector::new(400.0).unwrap(), &SimConfig::new(50_000, 2))
            .unwrap();
    let mi = empirical_mi(&stream, Scenario::CRR_ISIA, 2).unwrap();
    assert!(mi.abs() < 1e-3, "{mi}");
}

#[test]
fn truthful_tail_adds_background_beyond_memory() {
    // arrivals later than M intervals are counted under the truthful policy;
    // their long-run mean is λ1 N_T times the absorption mass past M
    let p = SystemParams::default();
    let cir = compute_cir(&p, 1.0).unwrap();
    let det = Detector::new(440.0).unwrap();
    let n = 40_000;
    let mean_silent = |tail| {
        let cfg = SimConfig::new(n, 12).with_tail(tail);
        let s = simulate_stream(&p, &cir, &uniform_source(), det, &cfg).unwrap();
        let second_half = n / 2..n;
        let vals: Vec<f64> = second_half
            .filter(|&i| s.symbols[i] == 0)
            .map(|i| s.counts.absorbed[i] as f64)
            .collect();
        vals.iter().sum::<f64>() / vals.len() as f64
    };
    let excess = mean_silent(TailPolicy::Truthful) - mean_silent(TailPolicy::WithinMemory);
    let f = |t: f64| expected_cumulative_absorbed(&p, t).unwrap();
    // tail captured by a symbol in the middle of the second half
    let expected = 0.5 * (f(0.75 * n as f64) - f(cir.memory() as f64));
    assert!((excess - expected).abs() < 0.15 * expected, "{excess} vs {expected}");
    assert!(excess > 50.0);
}
