//! Types shared by the exact solvers.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::graph::Bisection;
use crate::weight::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Status {
    /// The whole search space was covered, explicitly or by pruning.
    Optimal,
    /// The time limit expired; the result holds the incumbent.
    TimeLimit,
    /// The solve did not finish normally (panic, allocation failure, solver crash).
    Aborted,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "Optimal",
            Status::TimeLimit => "TimeLimit",
            Status::Aborted => "Aborted",
        })
    }
}

impl FromStr for Status {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Optimal" => Ok(Status::Optimal),
            "TimeLimit" => Ok(Status::TimeLimit),
            "Aborted" => Ok(Status::Aborted),
            other => Err(format!("unknown status `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub time_limit: Option<Duration>,
    /// Worker threads; only the enumeration solver uses more than one.
    pub jobs: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            time_limit: None,
            jobs: 1,
        }
    }
}

impl SolveOptions {
    pub fn with_time_limit(time_limit: Duration) -> Self {
        SolveOptions {
            time_limit: Some(time_limit),
            ..Default::default()
        }
    }

    pub fn jobs(self, jobs: usize) -> Self {
        SolveOptions {
            jobs: jobs.max(1),
            ..self
        }
    }
}

/// Node statistics of a branch-and-bound run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BnbStats {
    pub nodes: u64,
    pub pruned_by_bound: u64,
    pub pruned_by_balance: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveResult {
    pub status: Status,
    pub best_value: Weight,
    pub best_bisection: Bisection,
    /// Bisections evaluated (enumeration) or search nodes visited (branch and bound).
    pub explored: u64,
    /// Seconds from start until the final incumbent was found.
    pub time_to_best: f64,
    pub time_total: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bnb: Option<BnbStats>,
}

impl SolveResult {
    /// The parts of a result that must not depend on timing or worker count.
    pub fn outcome(&self) -> (Status, Weight, &[u32], u64) {
        (
            self.status,
            self.best_value,
            self.best_bisection.members(),
            self.explored,
        )
    }
}

/// Wall-clock deadline checked at a fixed iteration granularity.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Clock {
    start: Instant,
    deadline: Option<Instant>,
}

impl Clock {
    pub(crate) const CHECK_EVERY: u64 = 1024;

    pub(crate) fn start(time_limit: Option<Duration>) -> Clock {
        let start = Instant::now();
        Clock {
            start,
            deadline: time_limit.map(|t| start + t),
        }
    }

    pub(crate) fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    pub(crate) fn elapsed(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }
}
