//! Total enumeration of balanced bipartitions.
//!
//! Vertex 1 is anchored in `S`, so each complementary pair is visited once:
//! the scan covers the `C(n-1, n/2-1)` subsets of size `n/2` containing
//! vertex 1, in lexicographic order of the sorted member list. Because the
//! incumbent only changes on strict improvement, the reported optimum is
//! the lexicographically smallest one.
//!
//! Cut sums are maintained incrementally: moving to the next subset toggles
//! only the vertices that enter or leave `S`, touching their incident edges.

use std::thread;

use crate::graph::{Adjacency, Bisection, Instance, Vertex};
use crate::solve::{Clock, SolveOptions, SolveResult, Status};
use crate::weight::Weight;

/// `C(n, r)`, or `None` if it does not fit in a `u64`.
pub fn binomial(n: u64, r: u64) -> Option<u64> {
    if r > n {
        return Some(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Number of canonical bisections of `n` vertices, if it fits in a `u64`.
pub fn bisection_count(vertex_count: usize) -> Option<u64> {
    let n = vertex_count as u64;
    binomial(n.saturating_sub(1), (n / 2).saturating_sub(1))
}

/// Walks the canonical bisections in lexicographic order while keeping
/// the per-coordinate cut sums current.
#[derive(Debug, Clone)]
pub struct CutScanner<'a> {
    instance: &'a Instance,
    adjacency: Adjacency,
    in_s: Vec<bool>,
    // 0-based indices of the members other than vertex 1, ascending
    combo: Vec<usize>,
    sums: Vec<u64>,
}

impl<'a> CutScanner<'a> {
    /// Positioned on the first bisection `{1, 2, ..., n/2}`.
    pub fn new(instance: &'a Instance) -> CutScanner<'a> {
        let r = instance.vertex_count() / 2 - 1;
        Self::with_combo(instance, (1..=r).collect())
    }

    /// Positioned on the bisection of the given lexicographic rank.
    pub fn at_rank(instance: &'a Instance, rank: u64) -> Option<CutScanner<'a>> {
        let n = instance.vertex_count();
        let r = n / 2 - 1;
        let mut rank = rank;
        let mut combo = Vec::with_capacity(r);
        let mut next = 1;
        for i in 0..r {
            loop {
                if next > n - 1 {
                    return None;
                }
                // subsets with `next` at position i
                let with = binomial((n - 1 - next) as u64, (r - 1 - i) as u64)?;
                if rank < with {
                    break;
                }
                rank -= with;
                next += 1;
            }
            combo.push(next);
            next += 1;
        }
        if rank != 0 {
            return None;
        }
        Some(Self::with_combo(instance, combo))
    }

    fn with_combo(instance: &'a Instance, combo: Vec<usize>) -> CutScanner<'a> {
        let mut scanner = CutScanner {
            instance,
            adjacency: instance.adjacency(),
            in_s: vec![false; instance.vertex_count()],
            combo,
            sums: vec![0; instance.dim()],
        };
        scanner.toggle(0);
        for i in 0..scanner.combo.len() {
            scanner.toggle(scanner.combo[i]);
        }
        scanner
    }

    fn toggle(&mut self, vertex: usize) {
        let side = self.in_s[vertex];
        for &(nbr, edge) in self.adjacency.incident(vertex) {
            let weights = self.instance.edge_weights(edge as usize);
            if self.in_s[nbr as usize] == side {
                for (s, w) in self.sums.iter_mut().zip(weights) {
                    *s += w.milli();
                }
            } else {
                for (s, w) in self.sums.iter_mut().zip(weights) {
                    *s -= w.milli();
                }
            }
        }
        self.in_s[vertex] = !side;
    }

    /// Moves to the next bisection; returns `false` after the last one.
    pub fn advance(&mut self) -> bool {
        let n = self.in_s.len();
        let r = self.combo.len();
        let Some(i) = (0..r).rev().find(|&i| self.combo[i] < n - r + i) else {
            return false;
        };
        let first = self.combo[i] + 1;
        let last = first + (r - i); // exclusive
        for j in i..r {
            let v = self.combo[j];
            if !(first..last).contains(&v) {
                self.toggle(v);
            }
        }
        for (j, v) in (first..last).enumerate() {
            if !self.in_s[v] {
                self.toggle(v);
            }
            self.combo[i + j] = v;
        }
        true
    }

    /// Sorted members of the current `S`, 1-based.
    pub fn members(&self) -> Vec<Vertex> {
        std::iter::once(1)
            .chain(self.combo.iter().map(|&v| v as Vertex + 1))
            .collect()
    }

    pub fn bisection(&self) -> Bisection {
        Bisection::from_canonical(self.in_s.len(), self.members())
    }

    pub fn coordinate_sums(&self) -> Vec<Weight> {
        self.sums.iter().map(|&s| Weight::from_milli(s)).collect()
    }

    #[inline]
    pub fn cut_weight(&self) -> Weight {
        Weight::from_milli(self.sums.iter().copied().min().unwrap_or(0))
    }
}

struct Partial {
    best: Weight,
    members: Vec<Vertex>,
    explored: u64,
    time_to_best: f64,
    completed: bool,
}

fn scan(instance: &Instance, start: u64, count: Option<u64>, clock: &Clock) -> Partial {
    let mut scanner = if start == 0 {
        CutScanner::new(instance)
    } else {
        CutScanner::at_rank(instance, start).expect("start rank within range")
    };
    let mut partial = Partial {
        best: scanner.cut_weight(),
        members: scanner.members(),
        explored: 1,
        time_to_best: clock.elapsed(),
        completed: false,
    };
    loop {
        if count == Some(partial.explored) {
            partial.completed = true;
            break;
        }
        if partial.explored.is_multiple_of(Clock::CHECK_EVERY) && clock.expired() {
            break;
        }
        if !scanner.advance() {
            partial.completed = true;
            break;
        }
        partial.explored += 1;
        let value = scanner.cut_weight();
        if value > partial.best {
            partial.best = value;
            partial.members = scanner.members();
            partial.time_to_best = clock.elapsed();
        }
    }
    partial
}

/// Exact optimum by scanning every canonical bisection.
///
/// With `jobs > 1` the rank range is split into contiguous blocks scanned
/// in parallel; merging keeps the first block's optimum on ties, which
/// reproduces the sequential result.
pub fn solve_enumeration(instance: &Instance, options: &SolveOptions) -> SolveResult {
    let clock = Clock::start(options.time_limit);
    let total = bisection_count(instance.vertex_count());
    let jobs = options.jobs.max(1) as u64;

    let partials = match total {
        Some(total) if jobs > 1 && total >= 2 * jobs => {
            let block = total.div_ceil(jobs);
            thread::scope(|scope| {
                let handles: Vec<_> = (0..jobs)
                    .map(|j| j * block)
                    .take_while(|&start| start < total)
                    .map(|start| {
                        let count = block.min(total - start);
                        let clock = &clock;
                        scope.spawn(move || scan(instance, start, Some(count), clock))
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("enumeration worker panicked"))
                    .collect::<Vec<_>>()
            })
        }
        _ => vec![scan(instance, 0, None, &clock)],
    };

    let mut explored = 0;
    let mut completed = true;
    let mut best: Option<&Partial> = None;
    for p in &partials {
        explored += p.explored;
        completed &= p.completed;
        if best.is_none_or(|b| p.best > b.best) {
            best = Some(p);
        }
    }
    let best = best.expect("at least one block");
    SolveResult {
        status: if completed {
            Status::Optimal
        } else {
            Status::TimeLimit
        },
        best_value: best.best,
        best_bisection: Bisection::from_canonical(instance.vertex_count(), best.members.clone()),
        explored,
        time_to_best: best.time_to_best,
        time_total: clock.elapsed(),
        bnb: None,
    }
}
