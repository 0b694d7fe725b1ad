//! Fixtures shared by the criterion benchmarks.

use mmbp_core::{generate, GenConfig, Instance};

/// A generated instance with weights in 1.000..=9.999.
pub fn instance(n: usize, m: usize, k: usize, seed: u64) -> Instance {
    generate(&GenConfig::new(n, m, k, seed)).expect("valid benchmark config")
}
