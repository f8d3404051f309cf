//! Brute-force mutual information by enumerating the full joint law of
//! `(S_{i-M+1}, ..., S_i, Ŝ_i)`. Shares no code with the library's
//! evaluator beyond the source and channel types.

#![allow(dead_code)]

use diffusion_air::physics::{ChannelImpulseResponse, SystemParams};

fn q(z: f64) -> f64 {
    0.5 * libm::erfc(z / std::f64::consts::SQRT_2)
}

fn entropy(probs: impl IntoIterator<Item = f64>) -> f64 {
    probs.into_iter().filter(|&p| p > 0.0).map(|p| -p * p.log2()).sum()
}

/// `P(ŝ = 1 | window)`, with `window` oldest first and the current symbol last.
pub fn p_detect(cir: &ChannelImpulseResponse, params: &SystemParams, window: &[u8], tau: f64) -> f64 {
    let m = window.len();
    let (mut mean, mut var) = (params.noise_mean, params.noise_std.powi(2));
    for (pos, &s) in window.iter().enumerate() {
        if s == 1 {
            // the current symbol uses h_1, the oldest h_M
            let h = cir.taps()[m - 1 - pos];
            mean += params.n_released * h;
            var += params.n_released * h * (1.0 - h);
        }
    }
    q((tau - mean) / var.sqrt())
}

/// Markov law of a window started from the stationary distribution.
pub fn markov_window(p: f64, q: f64, window: &[u8]) -> f64 {
    let pi1 = p / (p + q);
    let mut prob = if window[0] == 1 { pi1 } else { 1.0 - pi1 };
    for w in window.windows(2) {
        prob *= match (w[0], w[1]) {
            (0, 0) => 1.0 - p,
            (0, _) => p,
            (_, 0) => q,
            _ => 1.0 - q,
        };
    }
    prob
}

pub fn independent_window(lambda0: f64, window: &[u8]) -> f64 {
    window.iter().map(|&s| if s == 0 { lambda0 } else { 1.0 - lambda0 }).product()
}

/// `(rate - H(S_i | history, Ŝ_i), rate - H(S_i | Ŝ_i))`, unclipped.
pub fn brute_force_mi(
    cir: &ChannelImpulseResponse,
    params: &SystemParams,
    tau: f64,
    rate: f64,
    law: impl Fn(&[u8]) -> f64,
) -> (f64, f64) {
    let m = cir.memory();
    // joint[window bits][ŝ], window bit k = k-th oldest symbol
    let mut joint = vec![[0.0f64; 2]; 1 << m];
    for bits in 0..1usize << m {
        let window: Vec<u8> = (0..m).map(|k| ((bits >> k) & 1) as u8).collect();
        let pw = law(&window);
        let p1 = p_detect(cir, params, &window, tau);
        joint[bits] = [pw * (1.0 - p1), pw * p1];
    }
    let cur = m - 1;
    let past_mask = (1usize << cur) - 1;

    // H(S_i | past, Ŝ) = H(past, S_i, Ŝ) - H(past, Ŝ)
    let h_all = entropy(joint.iter().flat_map(|j| *j));
    let mut past_shat = vec![[0.0f64; 2]; 1 << cur];
    for (bits, j) in joint.iter().enumerate() {
        for d in 0..2 {
            past_shat[bits & past_mask][d] += j[d];
        }
    }
    let aware = h_all - entropy(past_shat.iter().flat_map(|j| *j));

    // H(S_i | Ŝ) = H(S_i, Ŝ) - H(Ŝ)
    let mut s_shat = [[0.0f64; 2]; 2];
    for (bits, j) in joint.iter().enumerate() {
        for d in 0..2 {
            s_shat[(bits >> cur) & 1][d] += j[d];
        }
    }
    let shat = [s_shat[0][0] + s_shat[1][0], s_shat[0][1] + s_shat[1][1]];
    let unaware = entropy(s_shat.iter().flat_map(|j| *j)) - entropy(shat);
    (rate - aware, rate - unaware)
}
