//! Mixed-integer linear model of the bisection problem.
//!
//! ```text
//! maximize   U
//! subject to U <= sum_e w_el * y_e          for every coordinate l   (dim{l})
//!            x_u + x_v >= y_e               for every edge e = {u,v} (lb{u}_{v})
//!            x_u + x_v + y_e <= 2           for every edge            (ub{u}_{v})
//!            sum_i x_i = n / 2                                        (bal)
//!            x_i, y_e binary,  U >= 0
//! ```
//!
//! `x_i = 1` places vertex `i` in `S`; `y_e = 1` counts edge `e` in the cut.
//! Coefficients are kept in milli-units so the model reproduces the
//! instance weights exactly.

mod external;
mod lp;
mod witness;

pub use external::{run_external, ExternalError, ExternalOutcome};
pub use lp::{emit_lp, parse_lp, LpError};
pub use witness::{
    check_solution, parse_solution, witness_from_bisection, witness_from_subset,
    write_solution, CheckError, CheckReport, FamilyReport, SolutionError, Witness,
};

use std::fmt;

use crate::graph::{Instance, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// `x{i}`: vertex `i` is in `S`.
    X(Vertex),
    /// `y{u}_{v}`: edge `(u, v)` is counted in the cut.
    Y(Vertex, Vertex),
    U,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{i}"),
            Var::Y(u, v) => write!(f, "y{u}_{v}"),
            Var::U => f.write_str("U"),
        }
    }
}

impl Var {
    pub fn parse(name: &str) -> Option<Var> {
        fn id(s: &str) -> Option<Vertex> {
            if s.is_empty() || s.starts_with('0') || !s.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            s.parse().ok()
        }
        if name == "U" {
            return Some(Var::U);
        }
        if let Some(rest) = name.strip_prefix('x') {
            return id(rest).map(Var::X);
        }
        let (u, v) = name.strip_prefix('y')?.split_once('_')?;
        Some(Var::Y(id(u)?, id(v)?))
    }
}

/// Constraint family, identified by the row-name prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `U` below each coordinate's counted cut weight.
    Dim,
    /// A counted edge needs at least one endpoint in `S`.
    CutLower,
    /// A counted edge cannot have both endpoints in `S`.
    CutUpper,
    Balance,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Dim, Family::CutLower, Family::CutUpper, Family::Balance];

    pub fn of_row(name: &str) -> Option<Family> {
        let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit() || b == b'_');
        if name == "bal" {
            Some(Family::Balance)
        } else if name.strip_prefix("dim").is_some_and(digits) {
            Some(Family::Dim)
        } else if name.strip_prefix("lb").is_some_and(digits) {
            Some(Family::CutLower)
        } else if name.strip_prefix("ub").is_some_and(digits) {
            Some(Family::CutUpper)
        } else {
            None
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Family::Dim => "dim",
            Family::CutLower => "cut-lower",
            Family::CutUpper => "cut-upper",
            Family::Balance => "balance",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Term {
    /// Coefficient in milli-units.
    pub coef: i64,
    pub var: Var,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub family: Family,
    pub terms: Vec<Term>,
    pub sense: Sense,
    /// Integer right-hand side.
    pub rhs: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MilpModel {
    /// Maximized; always the single variable `U`.
    pub objective: Var,
    pub constraints: Vec<Constraint>,
    /// `x1..xn` followed by one `y` per edge, in edge order.
    pub binaries: Vec<Var>,
    pub continuous: Vec<Var>,
}

const UNIT: i64 = 1000;

impl MilpModel {
    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    pub fn family_count(&self, family: Family) -> usize {
        self.constraints.iter().filter(|c| c.family == family).count()
    }

    pub fn vertex_count(&self) -> usize {
        self.binaries.iter().filter(|v| matches!(v, Var::X(_))).count()
    }

    /// Edges in the order of their `y` variables.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        self.binaries
            .iter()
            .filter_map(|v| match v {
                Var::Y(a, b) => Some((*a, *b)),
                _ => None,
            })
            .collect()
    }
}

/// The model for `instance`, rows grouped by family and edges in instance order.
pub fn build_model(instance: &Instance) -> MilpModel {
    let n = instance.vertex_count();
    let edges = instance.edges();
    let y = |i: usize| Var::Y(edges[i].u, edges[i].v);
    let unit = |var| Term { coef: UNIT, var };
    let mut constraints = Vec::with_capacity(instance.dim() + 2 * edges.len() + 1);

    for l in 0..instance.dim() {
        let mut terms = Vec::with_capacity(edges.len() + 1);
        terms.push(unit(Var::U));
        terms.extend((0..edges.len()).map(|i| Term {
            coef: -(instance.edge_weights(i)[l].milli() as i64),
            var: y(i),
        }));
        constraints.push(Constraint {
            name: format!("dim{}", l + 1),
            family: Family::Dim,
            terms,
            sense: Sense::Le,
            rhs: 0,
        });
    }
    for (i, e) in edges.iter().enumerate() {
        constraints.push(Constraint {
            name: format!("lb{}_{}", e.u, e.v),
            family: Family::CutLower,
            terms: vec![
                unit(Var::X(e.u)),
                unit(Var::X(e.v)),
                Term {
                    coef: -UNIT,
                    var: y(i),
                },
            ],
            sense: Sense::Ge,
            rhs: 0,
        });
    }
    for (i, e) in edges.iter().enumerate() {
        constraints.push(Constraint {
            name: format!("ub{}_{}", e.u, e.v),
            family: Family::CutUpper,
            terms: vec![unit(Var::X(e.u)), unit(Var::X(e.v)), unit(y(i))],
            sense: Sense::Le,
            rhs: 2,
        });
    }
    constraints.push(Constraint {
        name: "bal".into(),
        family: Family::Balance,
        terms: (1..=n as Vertex).map(|i| unit(Var::X(i))).collect(),
        sense: Sense::Eq,
        rhs: (n / 2) as i64,
    });

    let binaries = (1..=n as Vertex)
        .map(Var::X)
        .chain((0..edges.len()).map(y))
        .collect();
    MilpModel {
        objective: Var::U,
        constraints,
        binaries,
        continuous: vec![Var::U],
    }
}
