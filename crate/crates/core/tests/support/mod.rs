//! Brute-force oracles independent of the solver code paths.
//!
//! Everything here walks raw bitmasks and sums edge weights directly from
//! the instance data; nothing calls the library's cut evaluation.

#![allow(dead_code)]

use mmbp_core::Instance;

/// Per-coordinate cut sums, in milli-units, of the subset encoded by `mask`
/// (bit `i` set when vertex `i + 1` is in the subset).
pub fn cut_sums(instance: &Instance, mask: u64) -> Vec<u64> {
    let mut sums = vec![0u64; instance.dim()];
    for (i, e) in instance.edges().iter().enumerate() {
        let a = mask >> (e.u - 1) & 1;
        let b = mask >> (e.v - 1) & 1;
        if a != b {
            for (s, w) in sums.iter_mut().zip(instance.edge_weights(i)) {
                *s += w.milli();
            }
        }
    }
    sums
}

pub fn cut_value(instance: &Instance, mask: u64) -> u64 {
    cut_sums(instance, mask).into_iter().min().unwrap_or(0)
}

/// Sorted 1-based members of `mask`.
pub fn members(mask: u64, n: usize) -> Vec<u32> {
    (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i as u32 + 1).collect()
}

/// All subsets of size n/2 as bitmasks, both sides of each pair included.
pub fn balanced_masks(n: usize) -> impl Iterator<Item = u64> {
    (0u64..1 << n).filter(move |m| m.count_ones() as usize * 2 == n)
}

/// Optimum value and lexicographically smallest optimal side containing
/// vertex 1, by scanning all 2^n subsets.
pub fn brute_force_optimum(instance: &Instance) -> (u64, Vec<u32>) {
    let n = instance.vertex_count();
    assert!(n <= 24, "brute force is for small instances");
    let mut best: Option<(u64, Vec<u32>)> = None;
    for mask in balanced_masks(n).filter(|m| m & 1 == 1) {
        let value = cut_value(instance, mask);
        let set = members(mask, n);
        let better = match &best {
            None => true,
            Some((v, s)) => value > *v || (value == *v && set < *s),
        };
        if better {
            best = Some((value, set));
        }
    }
    best.expect("at least one bisection")
}
