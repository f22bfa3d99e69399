//! Shared fixtures for the benchmarks in `benches/`.

use hdbf_core::sim::{rng_for, Model1Config, ModelConfig, Sampler};
use hdbf_core::GroupedData;

pub const SIZES: [usize; 3] = [20, 30, 50];

/// Null Model 1 sample of dimension `p` with the default group sizes.
pub fn null_sample(p: usize, seed: u64) -> GroupedData {
    model1_sampler(p).sample(&mut rng_for(seed, 0))
}

pub fn model1_sampler(p: usize) -> Sampler {
    ModelConfig::Model1(Model1Config::new(p, SIZES.to_vec(), 0.0))
        .sampler()
        .expect("valid fixture config")
}
