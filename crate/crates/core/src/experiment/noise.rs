//! Shot noise for emulated coincidence counts.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

/// Draws Poisson counts with mean `2·Pc·mean_counts` (so the 0.5 baseline
/// averages `mean_counts`) and rescales them back to probabilities.
/// Identical inputs and seed give identical output.
pub fn poisson_noise(coincidence: &[f64], mean_counts: u64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 2.0 * mean_counts as f64;
    coincidence
        .iter()
        .map(|&p| {
            let lambda = p * scale;
            if lambda > 0.0 {
                let k: f64 = Poisson::new(lambda)
                    .expect("positive finite rate")
                    .sample(&mut rng);
                k / scale
            } else {
                0.0
            }
        })
        .collect()
}
