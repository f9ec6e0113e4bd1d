#![allow(dead_code)]

use std::path::Path;
use std::process::Command;

use anonvox::core::fusion::{FusionConfig, FusionNet};
use anonvox::core::{AudioBuffer, FeatureSequence};
use anonvox::{formats, wav};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SR: u32 = 16_000;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random features with no all-zero frame.
pub fn features(t: usize, d: usize, hop: u32, seed: u64) -> FeatureSequence {
    let mut r = rng(seed);
    let data = (0..t * d).map(|_| r.random_range(0.05..1.0) * if r.random_bool(0.5) { 1.0 } else { -1.0 }).collect();
    FeatureSequence::new(data, d, hop).unwrap()
}

/// Fusion config small enough for quick debug-mode runs.
pub fn small_config(d_phon: usize, d_pro: usize) -> FusionConfig {
    FusionConfig {
        d_model: 32,
        kernel_size: 3,
        n_attn_layers: 1,
        n_heads: 4,
        groups: 4,
        d_phon_in: d_phon,
        d_pro_in: d_pro,
    }
}

pub fn write_small_weights(path: &Path, d_phon: usize, d_pro: usize, seed: u64) {
    let net = FusionNet::init_random(&small_config(d_phon, d_pro), seed).unwrap();
    formats::write_weights(path, &net.to_bundle()).unwrap();
}

/// Symmetric raised-cosine pulses of `half` samples each side, centred at `centres`.
pub fn pulse_train(centres: &[usize], amps: &[f64], len: usize, half: usize) -> Vec<f64> {
    let mut x = vec![0.0; len];
    for (&c, &a) in centres.iter().zip(amps) {
        for k in 0..=2 * half {
            let i = c + k - half;
            let w = 0.5 * (1.0 - (std::f64::consts::PI * k as f64 / half as f64).cos());
            x[i] += a * w;
        }
    }
    x
}

/// ppq5 written directly from its definition (in percent).
pub fn ppq5_oracle(t: &[f64]) -> f64 {
    let n = t.len();
    let mut num = 0.0;
    for i in 2..n - 2 {
        let mean5 = (t[i - 2] + t[i - 1] + t[i] + t[i + 1] + t[i + 2]) / 5.0;
        num += (t[i] - mean5).abs();
    }
    let mean = t.iter().sum::<f64>() / n as f64;
    100.0 * num / (n - 1) as f64 / mean
}

/// Local shimmer written directly from its definition.
pub fn shimmer_oracle(a: &[f64]) -> f64 {
    let n = a.len();
    let num: f64 = a.windows(2).map(|w| (w[0] - w[1]).abs()).sum::<f64>() / (n - 1) as f64;
    num / (a.iter().sum::<f64>() / n as f64)
}

pub fn write_audio(path: &Path, samples: Vec<f64>) {
    wav::write_wav(path, &AudioBuffer::new(samples, SR).unwrap()).unwrap();
}

pub fn sine(freq: f64, amp: f64, len: usize) -> Vec<f64> {
    (0..len).map(|i| amp * (std::f64::consts::TAU * freq * i as f64 / SR as f64).sin()).collect()
}

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn anonvox(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_anonvox")).args(args).output().expect("spawn anonvox");
    Output {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}
