//! Depth-first branch and bound with a combinatorial bound.
//!
//! A node fixes some vertices to `S` or its complement. Its bound is
//!
//! ```text
//! min over l of ( fixed_cut_sums[l] + open_sums[l] )
//! ```
//!
//! where `open_sums` covers every edge with at least one free endpoint,
//! i.e. every edge that could still end up in the cut. No completion can
//! exceed it.
//!
//! Vertex 1 is fixed to `S` at the root. The remaining vertices are
//! branched on in order of decreasing total incident weight, `S` first.
//! A node is pruned when its bound is below the incumbent, or equal to it
//! while no completion could be lexicographically smaller than the
//! incumbent bisection. This makes the reported optimum identical to the
//! enumeration solver's.

use crate::graph::{Adjacency, Bisection, Instance, Vertex};
use crate::solve::{BnbStats, Clock, SolveOptions, SolveResult, Status};
use crate::weight::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    InS,
    OutS,
    Free,
}

/// Vertex sides fixed so far plus the running cut sums they imply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialAssignment {
    side: Vec<Side>,
    count_in: usize,
    count_out: usize,
    // both in milli-units
    fixed_cut_sums: Vec<u64>,
    open_sums: Vec<u64>,
}

impl PartialAssignment {
    /// Every vertex free.
    pub fn new(instance: &Instance) -> PartialAssignment {
        PartialAssignment {
            side: vec![Side::Free; instance.vertex_count()],
            count_in: 0,
            count_out: 0,
            fixed_cut_sums: vec![0; instance.dim()],
            open_sums: instance.total_sums().iter().map(|w| w.milli()).collect(),
        }
    }

    pub fn side(&self, vertex: Vertex) -> Side {
        self.side[vertex as usize - 1]
    }

    pub fn count_in(&self) -> usize {
        self.count_in
    }

    pub fn count_out(&self) -> usize {
        self.count_out
    }

    /// Per-coordinate weight of edges already known to cross.
    pub fn fixed_cut_sums(&self) -> Vec<Weight> {
        self.fixed_cut_sums
            .iter()
            .map(|&s| Weight::from_milli(s))
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.count_in + self.count_out == self.side.len()
    }

    /// Fixes a free vertex to `side`.
    ///
    /// # Panics
    ///
    /// If the vertex is already assigned or `side` is [`Side::Free`].
    pub fn assign(&mut self, instance: &Instance, vertex: Vertex, side: Side) {
        let v = vertex as usize - 1;
        let incident = incident_edges(instance, vertex);
        self.assign_incident(instance, &incident, v, side);
    }

    /// Returns an assigned vertex to [`Side::Free`].
    pub fn unassign(&mut self, instance: &Instance, vertex: Vertex) {
        let v = vertex as usize - 1;
        let incident = incident_edges(instance, vertex);
        self.unassign_incident(instance, &incident, v);
    }

    fn assign_incident(&mut self, instance: &Instance, incident: &[(u32, u32)], v: usize, side: Side) {
        assert_eq!(self.side[v], Side::Free, "vertex {} already assigned", v + 1);
        assert_ne!(side, Side::Free, "cannot assign to Free");
        for &(nbr, edge) in incident {
            let other = self.side[nbr as usize];
            if other == Side::Free {
                continue;
            }
            let weights = instance.edge_weights(edge as usize);
            for (o, w) in self.open_sums.iter_mut().zip(weights) {
                *o -= w.milli();
            }
            if other != side {
                for (f, w) in self.fixed_cut_sums.iter_mut().zip(weights) {
                    *f += w.milli();
                }
            }
        }
        self.side[v] = side;
        match side {
            Side::InS => self.count_in += 1,
            Side::OutS => self.count_out += 1,
            Side::Free => unreachable!(),
        }
    }

    fn unassign_incident(&mut self, instance: &Instance, incident: &[(u32, u32)], v: usize) {
        let side = std::mem::replace(&mut self.side[v], Side::Free);
        match side {
            Side::InS => self.count_in -= 1,
            Side::OutS => self.count_out -= 1,
            Side::Free => panic!("vertex {} is not assigned", v + 1),
        }
        for &(nbr, edge) in incident {
            let other = self.side[nbr as usize];
            if other == Side::Free {
                continue;
            }
            let weights = instance.edge_weights(edge as usize);
            for (o, w) in self.open_sums.iter_mut().zip(weights) {
                *o += w.milli();
            }
            if other != side {
                for (f, w) in self.fixed_cut_sums.iter_mut().zip(weights) {
                    *f -= w.milli();
                }
            }
        }
    }

    fn bound_milli(&self) -> u64 {
        self.fixed_cut_sums
            .iter()
            .zip(&self.open_sums)
            .map(|(f, o)| f + o)
            .min()
            .unwrap_or(0)
    }
}

fn incident_edges(instance: &Instance, vertex: Vertex) -> Vec<(u32, u32)> {
    instance
        .edges()
        .iter()
        .enumerate()
        .filter_map(|(i, e)| {
            if e.u == vertex {
                Some((e.v - 1, i as u32))
            } else if e.v == vertex {
                Some((e.u - 1, i as u32))
            } else {
                None
            }
        })
        .collect()
}

/// Optimistic cut weight over all completions of `pa`.
pub fn upper_bound(instance: &Instance, pa: &PartialAssignment) -> Weight {
    debug_assert_eq!(pa.side.len(), instance.vertex_count());
    debug_assert_eq!(pa.fixed_cut_sums.len(), instance.dim());
    Weight::from_milli(pa.bound_milli())
}

/// Vertices other than vertex 1, heaviest total incident weight first.
/// Returned as 0-based indices.
pub fn branching_order(instance: &Instance) -> Vec<usize> {
    let mut load = vec![0u64; instance.vertex_count()];
    for (i, e) in instance.edges().iter().enumerate() {
        let total: u64 = instance.edge_weights(i).iter().map(|w| w.milli()).sum();
        load[e.u as usize - 1] += total;
        load[e.v as usize - 1] += total;
    }
    let mut order: Vec<usize> = (1..instance.vertex_count()).collect();
    order.sort_by(|&a, &b| load[b].cmp(&load[a]).then(a.cmp(&b)));
    order
}

struct Search<'a> {
    instance: &'a Instance,
    adjacency: Adjacency,
    pa: PartialAssignment,
    order: Vec<usize>,
    half: usize,
    clock: Clock,
    best: u64,
    best_members: Vec<Vertex>,
    time_to_best: f64,
    stats: BnbStats,
    stopped: bool,
}

impl Search<'_> {
    /// Whether some completion of the current node is lexicographically
    /// smaller than the incumbent. The smallest completion fills the free
    /// slots of `S` with the lowest-numbered free vertices.
    fn may_beat_incumbent_order(&self) -> bool {
        let mut slots = self.half - self.pa.count_in;
        let mut idx = 0;
        for (v, side) in self.pa.side.iter().enumerate() {
            let take = match side {
                Side::InS => true,
                Side::OutS => false,
                Side::Free if slots > 0 => {
                    slots -= 1;
                    true
                }
                Side::Free => false,
            };
            if take {
                let candidate = v as Vertex + 1;
                let incumbent = self.best_members[idx];
                if candidate != incumbent {
                    return candidate < incumbent;
                }
                idx += 1;
            }
        }
        false
    }

    fn dfs(&mut self, depth: usize) {
        self.stats.nodes += 1;
        if self.stats.nodes.is_multiple_of(Clock::CHECK_EVERY) && self.clock.expired() {
            self.stopped = true;
            return;
        }
        let bound = self.pa.bound_milli();
        if bound < self.best || (bound == self.best && !self.may_beat_incumbent_order()) {
            self.stats.pruned_by_bound += 1;
            return;
        }
        if depth == self.order.len() {
            // every edge decided, so the bound is the exact cut weight
            self.best = bound;
            self.best_members = (1..=self.pa.side.len() as Vertex)
                .filter(|&v| self.pa.side[v as usize - 1] == Side::InS)
                .collect();
            self.time_to_best = self.clock.elapsed();
            return;
        }
        let v = self.order[depth];
        for side in [Side::InS, Side::OutS] {
            let count = match side {
                Side::InS => self.pa.count_in,
                _ => self.pa.count_out,
            };
            if count == self.half {
                self.stats.pruned_by_balance += 1;
                continue;
            }
            self.pa
                .assign_incident(self.instance, self.adjacency.incident(v), v, side);
            self.dfs(depth + 1);
            self.pa
                .unassign_incident(self.instance, self.adjacency.incident(v), v);
            if self.stopped {
                return;
            }
        }
    }
}

/// Exact optimum by branch and bound. Sequential; `options.jobs` is ignored.
pub fn solve_bnb(instance: &Instance, options: &SolveOptions) -> SolveResult {
    let clock = Clock::start(options.time_limit);
    let n = instance.vertex_count();
    let half = n / 2;

    // incumbent: the lexicographically first bisection {1, ..., n/2}
    let first: Vec<bool> = (0..n).map(|i| i < half).collect();
    let best = instance.cut_report_of(&first).weight.milli();

    let adjacency = instance.adjacency();
    let mut pa = PartialAssignment::new(instance);
    pa.assign_incident(instance, adjacency.incident(0), 0, Side::InS);

    let mut search = Search {
        instance,
        adjacency,
        pa,
        order: branching_order(instance),
        half,
        clock,
        best,
        best_members: (1..=half as Vertex).collect(),
        time_to_best: clock.elapsed(),
        stats: BnbStats::default(),
        stopped: false,
    };
    search.dfs(0);

    SolveResult {
        status: if search.stopped {
            Status::TimeLimit
        } else {
            Status::Optimal
        },
        best_value: Weight::from_milli(search.best),
        best_bisection: Bisection::from_canonical(n, search.best_members),
        explored: search.stats.nodes,
        time_to_best: search.time_to_best,
        time_total: clock.elapsed(),
        bnb: Some(search.stats),
    }
}
