//! Exact solvers for the multidimensional maximum bisection problem.
//!
//! Each edge of an undirected graph carries a `k`-tuple of positive
//! weights. A bisection splits the vertices into two halves of equal size;
//! its cut weight is the smallest, over the `k` coordinates, of the summed
//! weights of the crossing edges. The task is to find a bisection of
//! maximum cut weight.
//!
//! The crate provides
//!
//! * [`graph`]: instances, bisections, cut evaluation and the text format;
//! * [`generate`]: seeded G(n, m) instance generation;
//! * [`enumeration`]: the exhaustive baseline solver;
//! * [`branch_bound`]: a branch-and-bound solver with the same output;
//! * [`milp`]: the mixed-integer model, LP text exchange and witness checks;
//! * [`protocol`]: the vary-dimension benchmark runner and CSV output.
//!
//! All weights are fixed-point ([`Weight`], three decimals), so every
//! comparison between solvers is exact.

pub mod branch_bound;
pub mod enumeration;
pub mod generate;
pub mod graph;
pub mod milp;
pub mod protocol;
pub mod solve;
pub mod weight;

pub use branch_bound::{solve_bnb, upper_bound, PartialAssignment, Side};
pub use enumeration::{solve_enumeration, CutScanner};
pub use generate::{generate, standard_suite, GenConfig, GenError};
pub use graph::{Bisection, BisectionError, CutReport, Edge, Instance, InstanceError, Vertex};
pub use milp::{build_model, check_solution, emit_lp, parse_lp, witness_from_bisection, MilpModel, Witness};
pub use protocol::{run_protocol, write_csv, BenchRow, Method, NamedInstance, ProtocolOptions};
pub use solve::{BnbStats, SolveOptions, SolveResult, Status};
pub use weight::Weight;
