//! Seeded random instances in the G(n, m) model.
//!
//! Generation is a pure function of [`GenConfig`]. The random stream is
//! ChaCha8 seeded with the 64-bit `seed`, consumed in this order:
//!
//! 1. `m` draws of a partial Fisher–Yates shuffle over the `n(n-1)/2`
//!    unordered vertex pairs, picking the edge set;
//! 2. `k` weight draws per edge, edges taken in ascending `(u, v)` order,
//!    each uniform over the milli-unit grid `[weight_min, weight_max]`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Instance, Vertex};
use crate::weight::Weight;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("vertex count {0} must be positive and even")]
    OddVertexCount(usize),
    #[error("edge count {edges} exceeds the {max} pairs available on {n} vertices")]
    TooManyEdges { edges: usize, max: u64, n: usize },
    #[error("weight dimension must be at least 1")]
    ZeroDimension,
    #[error("weight range [{min}, {max}] must satisfy 0 < min <= max")]
    WeightRange { min: Weight, max: Weight },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub dim: usize,
    pub weight_min: Weight,
    pub weight_max: Weight,
    pub seed: u64,
}

/// Lower end of the experimental weight range, 1.000.
pub const DEFAULT_WEIGHT_MIN: Weight = Weight::from_milli(1_000);
/// Upper end of the experimental weight range, 9.999.
pub const DEFAULT_WEIGHT_MAX: Weight = Weight::from_milli(9_999);
/// Weight dimension of every generated experimental instance.
pub const DEFAULT_DIM: usize = 20;

/// `(n, m)` shapes of the 27 experimental graphs.
pub const SUITE_SHAPES: [(usize, usize); 27] = [
    (10, 15),
    (10, 25),
    (10, 40),
    (20, 30),
    (20, 70),
    (20, 150),
    (30, 50),
    (30, 150),
    (30, 400),
    (50, 80),
    (50, 300),
    (50, 1000),
    (100, 150),
    (100, 500),
    (100, 3000),
    (300, 500),
    (300, 2000),
    (300, 10000),
    (300, 30000),
    (500, 1000),
    (500, 3000),
    (500, 10000),
    (500, 60000),
    (1000, 1500),
    (1000, 10000),
    (1000, 100000),
    (1000, 350000),
];

impl GenConfig {
    /// A config with the experimental weight range 1.000..=9.999.
    pub fn new(vertex_count: usize, edge_count: usize, dim: usize, seed: u64) -> GenConfig {
        GenConfig {
            vertex_count,
            edge_count,
            dim,
            weight_min: DEFAULT_WEIGHT_MIN,
            weight_max: DEFAULT_WEIGHT_MAX,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        let n = self.vertex_count;
        if n == 0 || !n.is_multiple_of(2) {
            return Err(GenError::OddVertexCount(n));
        }
        let max = pair_count(n);
        if self.edge_count as u64 > max {
            return Err(GenError::TooManyEdges {
                edges: self.edge_count,
                max,
                n,
            });
        }
        if self.dim == 0 {
            return Err(GenError::ZeroDimension);
        }
        if self.weight_min.is_zero() || self.weight_min > self.weight_max {
            return Err(GenError::WeightRange {
                min: self.weight_min,
                max: self.weight_max,
            });
        }
        Ok(())
    }

    /// `XXX_YYY`: vertex and edge counts, each zero-padded to three digits.
    pub fn name(&self) -> String {
        format!("{:03}_{:03}", self.vertex_count, self.edge_count)
    }
}

fn pair_count(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

/// Maps a pair index in `0..n(n-1)/2` to `(u, v)` with `u < v`, 1-based.
///
/// Pairs are ranked by `v`, then `u`: (1,2), (1,3), (2,3), (1,4), ...
fn unrank_pair(index: u64) -> (Vertex, Vertex) {
    // largest b with b(b-1)/2 <= index
    let mut b = ((1.0 + (1.0 + 8.0 * index as f64).sqrt()) / 2.0) as u64;
    while b * (b - 1) / 2 > index {
        b -= 1;
    }
    while (b + 1) * b / 2 <= index {
        b += 1;
    }
    let a = index - b * (b - 1) / 2;
    (a as Vertex + 1, b as Vertex + 1)
}

/// Draws an instance. Identical configs give identical instances.
pub fn generate(config: &GenConfig) -> Result<Instance, GenError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    // Sparse partial Fisher-Yates: `displaced` records the swapped-out
    // slots so memory is O(m) rather than O(n^2).
    let total = pair_count(config.vertex_count);
    let mut displaced: HashMap<u64, u64> = HashMap::with_capacity(config.edge_count);
    let mut pairs = Vec::with_capacity(config.edge_count);
    for i in 0..config.edge_count as u64 {
        let j = rng.random_range(i..total);
        let picked = *displaced.get(&j).unwrap_or(&j);
        let at_i = *displaced.get(&i).unwrap_or(&i);
        displaced.insert(j, at_i);
        pairs.push(unrank_pair(picked));
    }
    pairs.sort_unstable();

    let (lo, hi) = (config.weight_min.milli(), config.weight_max.milli());
    let edges = pairs.into_iter().map(|(u, v)| {
        let weights = (0..config.dim)
            .map(|_| Weight::from_milli(rng.random_range(lo..=hi)))
            .collect();
        (u, v, weights)
    });
    Ok(Instance::new(config.vertex_count, config.dim, edges)
        .expect("generated edges satisfy instance invariants"))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// The 27 experimental configurations, named `XXX_YYY`.
///
/// Entry `i` is seeded with `splitmix64(base_seed + i)`.
pub fn standard_suite(base_seed: u64) -> Vec<(String, GenConfig)> {
    SUITE_SHAPES
        .iter()
        .enumerate()
        .map(|(i, &(n, m))| {
            let config = GenConfig::new(n, m, DEFAULT_DIM, splitmix64(base_seed.wrapping_add(i as u64)));
            (config.name(), config)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unrank_covers_all_pairs_once() {
        let n = 9u64;
        let mut seen: Vec<_> = (0..n * (n - 1) / 2).map(unrank_pair).collect();
        assert!(seen.iter().all(|&(u, v)| 1 <= u && u < v && v as u64 <= n));
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len() as u64, n * (n - 1) / 2);
        assert_eq!(unrank_pair(0), (1, 2));
        assert_eq!(unrank_pair(1), (1, 3));
        assert_eq!(unrank_pair(2), (2, 3));
    }

    #[test]
    fn unrank_large_indices() {
        let n = 1000u64;
        let last = n * (n - 1) / 2 - 1;
        assert_eq!(unrank_pair(last), (999, 1000));
        assert_eq!(unrank_pair(last - 998), (1, 1000));
    }

    #[test]
    fn complete_graph_when_m_is_maximal() {
        for seed in [0, 1, 42] {
            let inst = generate(&GenConfig::new(4, 6, 1, seed)).unwrap();
            assert_eq!(inst.edge_count(), 6);
        }
    }

    #[test]
    fn deterministic_text() {
        let cfg = GenConfig::new(10, 15, 20, 7);
        assert_eq!(
            generate(&cfg).unwrap().to_text(),
            generate(&cfg).unwrap().to_text()
        );
        let other = GenConfig { seed: 8, ..cfg };
        assert_ne!(
            generate(&GenConfig::new(10, 15, 20, 7)).unwrap(),
            generate(&other).unwrap()
        );
    }

    #[test]
    fn weights_within_range() {
        let cfg = GenConfig {
            weight_min: Weight::from_milli(5),
            weight_max: Weight::from_milli(7),
            ..GenConfig::new(12, 30, 4, 3)
        };
        let inst = generate(&cfg).unwrap();
        for e in 0..inst.edge_count() {
            assert!(inst
                .edge_weights(e)
                .iter()
                .all(|w| (5..=7).contains(&w.milli())));
        }
    }

    #[test]
    fn config_errors() {
        assert_eq!(
            generate(&GenConfig::new(10, 46, 1, 0)),
            Err(GenError::TooManyEdges {
                edges: 46,
                max: 45,
                n: 10
            })
        );
        assert_eq!(
            generate(&GenConfig::new(9, 3, 1, 0)),
            Err(GenError::OddVertexCount(9))
        );
        assert_eq!(
            generate(&GenConfig::new(4, 3, 0, 0)),
            Err(GenError::ZeroDimension)
        );
        let inverted = GenConfig {
            weight_min: Weight::from_milli(10),
            weight_max: Weight::from_milli(9),
            ..GenConfig::new(4, 3, 1, 0)
        };
        assert!(matches!(generate(&inverted), Err(GenError::WeightRange { .. })));
        let zero = GenConfig {
            weight_min: Weight::ZERO,
            ..GenConfig::new(4, 3, 1, 0)
        };
        assert!(matches!(generate(&zero), Err(GenError::WeightRange { .. })));
    }

    #[test]
    fn standard_suite_shapes() {
        let suite = standard_suite(1);
        assert_eq!(suite.len(), 27);
        assert!(suite.iter().all(|(_, c)| c.dim == 20));
        assert!(suite.iter().all(|(_, c)| c.validate().is_ok()));
        let (name, cfg) = suite
            .iter()
            .find(|(_, c)| c.vertex_count == 30 && c.edge_count == 400)
            .unwrap();
        assert_eq!(name, "030_400");
        assert_eq!(cfg.weight_min, "1.000".parse().unwrap());
        assert_eq!(cfg.weight_max, "9.999".parse().unwrap());
        assert!(suite.iter().any(|(n, _)| n == "1000_350000"));
        let mut seeds: Vec<_> = suite.iter().map(|(_, c)| c.seed).collect();
        seeds.sort();
        seeds.dedup();
        assert_eq!(seeds.len(), 27);
    }

    #[test]
    fn empirical_edge_inclusion_is_uniform() {
        // n = 6 has 15 pairs; with m = 5 each pair is present with p = 1/3.
        let (n, m, trials) = (6usize, 5usize, 6000u64);
        let mut counts: HashMap<(Vertex, Vertex), u64> = HashMap::new();
        for seed in 0..trials {
            let inst = generate(&GenConfig::new(n, m, 1, seed)).unwrap();
            assert_eq!(inst.edge_count(), m);
            for e in inst.edges() {
                *counts.entry((e.u, e.v)).or_default() += 1;
            }
        }
        assert_eq!(counts.len(), 15);
        let p = 1.0 / 3.0;
        let sd = (trials as f64 * p * (1.0 - p)).sqrt();
        for (&pair, &c) in &counts {
            let z = (c as f64 - trials as f64 * p) / sd;
            assert!(z.abs() < 5.0, "pair {pair:?} count {c} (z = {z:.2})");
        }
    }
}
