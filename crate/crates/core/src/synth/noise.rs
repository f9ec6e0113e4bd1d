use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uniform noise in `[-1, 1]` from a ChaCha8 stream seeded with
/// `ChaCha8Rng::seed_from_u64(seed)`.
pub fn synth_noise(n_samples: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_samples).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(synth_noise(64, 7), synth_noise(64, 7));
        assert_ne!(synth_noise(64, 7), synth_noise(64, 8));
        assert!(synth_noise(0, 1).is_empty());
    }

    #[test]
    fn moments_match_uniform() {
        let x = synth_noise(100_000, 3);
        let n = x.len() as f64;
        let mean = x.iter().sum::<f64>() / n;
        let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var - 1.0 / 3.0).abs() < 0.1 / 3.0, "var {var}");
        assert!(x.iter().all(|v| (-1.0..=1.0).contains(v)));
    }
}
