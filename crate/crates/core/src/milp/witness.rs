//! Witness assignments and constraint checking.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::{Family, MilpModel, Sense, Var, UNIT};
use crate::graph::{Bisection, Instance};
use crate::weight::Weight;

/// An assignment to every model variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// `x[i]` is the value of `x{i+1}`.
    pub x: Vec<bool>,
    /// One entry per `y` variable, in model order.
    pub y: Vec<bool>,
    pub u_value: Weight,
}

impl Witness {
    /// The vertex set `{i | x_i = 1}`, if it is balanced.
    pub fn bisection(&self) -> Option<Bisection> {
        Bisection::from_membership(&self.x).ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("witness has {found} {what} values, model expects {expected}")]
    SizeMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyReport {
    pub family: Family,
    pub rows: usize,
    /// Names of the violated rows.
    pub violated: Vec<String>,
}

impl FamilyReport {
    pub fn satisfied(&self) -> bool {
        self.violated.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub families: Vec<FamilyReport>,
    /// Every row of every family holds.
    pub feasible: bool,
    /// Feasible, `y` is exactly the cut indicator of `{i | x_i = 1}`, and
    /// `U` equals that cut's weight.
    pub tight: bool,
}

impl CheckReport {
    pub fn family(&self, family: Family) -> &FamilyReport {
        self.families
            .iter()
            .find(|f| f.family == family)
            .expect("every family is reported")
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for fam in &self.families {
            write!(f, "{:<10} {:>7} rows  ", fam.family.label(), fam.rows)?;
            if fam.satisfied() {
                writeln!(f, "ok")?;
            } else {
                let shown: Vec<&str> = fam.violated.iter().take(5).map(String::as_str).collect();
                let more = fam.violated.len().saturating_sub(shown.len());
                write!(f, "{} violated: {}", fam.violated.len(), shown.join(", "))?;
                if more > 0 {
                    write!(f, ", ...")?;
                }
                writeln!(f)?;
            }
        }
        writeln!(f, "feasible   {}", self.feasible)?;
        write!(f, "tight      {}", self.tight)
    }
}

/// Positions of the `x` and `y` variables of a model.
struct VarIndex {
    x: HashMap<u32, usize>,
    y: HashMap<(u32, u32), usize>,
}

impl VarIndex {
    fn new(model: &MilpModel) -> VarIndex {
        let mut x = HashMap::new();
        let mut y = HashMap::new();
        for var in &model.binaries {
            match *var {
                Var::X(i) => {
                    let n = x.len();
                    x.insert(i, n);
                }
                Var::Y(u, v) => {
                    let n = y.len();
                    y.insert((u, v), n);
                }
                Var::U => {}
            }
        }
        VarIndex { x, y }
    }
}

/// Checks every constraint row in exact integer arithmetic.
pub fn check_solution(model: &MilpModel, witness: &Witness) -> Result<CheckReport, CheckError> {
    let index = VarIndex::new(model);
    if witness.x.len() != index.x.len() {
        return Err(CheckError::SizeMismatch {
            what: "x",
            expected: index.x.len(),
            found: witness.x.len(),
        });
    }
    if witness.y.len() != index.y.len() {
        return Err(CheckError::SizeMismatch {
            what: "y",
            expected: index.y.len(),
            found: witness.y.len(),
        });
    }
    // values scaled by 1000 so that coefficient * value is in micro-units
    let value = |var: Var| -> i128 {
        let on = |b: bool| if b { UNIT as i128 } else { 0 };
        match var {
            Var::X(i) => on(witness.x[index.x[&i]]),
            Var::Y(u, v) => on(witness.y[index.y[&(u, v)]]),
            Var::U => witness.u_value.milli() as i128,
        }
    };

    let mut families: Vec<FamilyReport> = Family::ALL
        .iter()
        .map(|&family| FamilyReport {
            family,
            rows: 0,
            violated: Vec::new(),
        })
        .collect();
    for c in &model.constraints {
        let lhs: i128 = c.terms.iter().map(|t| t.coef as i128 * value(t.var)).sum();
        let rhs = c.rhs as i128 * (UNIT as i128) * (UNIT as i128);
        let holds = match c.sense {
            Sense::Le => lhs <= rhs,
            Sense::Ge => lhs >= rhs,
            Sense::Eq => lhs == rhs,
        };
        let report = families
            .iter_mut()
            .find(|f| f.family == c.family)
            .expect("every family is listed");
        report.rows += 1;
        if !holds {
            report.violated.push(c.name.clone());
        }
    }
    let feasible = families.iter().all(FamilyReport::satisfied);

    let x_of = |i: u32| witness.x[index.x[&i]];
    let cut: HashMap<(u32, u32), bool> = index
        .y
        .keys()
        .map(|&(u, v)| ((u, v), x_of(u) != x_of(v)))
        .collect();
    let y_exact = index.y.iter().all(|(e, &i)| witness.y[i] == cut[e]);
    let cut_weight = model
        .constraints
        .iter()
        .filter(|c| c.family == Family::Dim)
        .map(|c| {
            c.terms
                .iter()
                .filter_map(|t| match t.var {
                    Var::Y(u, v) if cut[&(u, v)] => Some(-t.coef as i128),
                    _ => None,
                })
                .sum::<i128>()
        })
        .min()
        .unwrap_or(0);
    let tight = feasible && y_exact && witness.u_value.milli() as i128 == cut_weight;

    Ok(CheckReport {
        families,
        feasible,
        tight,
    })
}

/// The witness induced by an arbitrary vertex subset (`in_s[i]` for vertex `i + 1`).
pub fn witness_from_subset(instance: &Instance, in_s: &[bool]) -> Witness {
    let report = instance.cut_report_of(in_s);
    let mut y = vec![false; instance.edge_count()];
    for &e in &report.cut_edges {
        y[e] = true;
    }
    Witness {
        x: in_s.to_vec(),
        y,
        u_value: report.weight,
    }
}

/// `x` from membership in `S`, `y` from the cut, `U` from its weight.
pub fn witness_from_bisection(instance: &Instance, s: &Bisection) -> Witness {
    witness_from_subset(instance, &s.membership())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolutionError {
    #[error("line {line}: expected `<name> <value>`")]
    Malformed { line: usize },
    #[error("line {line}: `{name}` is not a model variable")]
    UnknownVariable { line: usize, name: String },
    #[error("line {line}: `{name}` assigned twice")]
    Duplicate { line: usize, name: String },
    #[error("line {line}: `{value}` is not a valid value for `{name}`")]
    BadValue {
        line: usize,
        name: String,
        value: String,
    },
}

const BINARY_TOLERANCE: f64 = 1e-6;

/// Reads `<name> <value>` lines. Variables that are not listed are zero.
///
/// Binary values may deviate from 0 or 1 by at most `1e-6`; `U` is
/// rounded to the nearest milli-unit. Blank lines and lines starting
/// with `#` are skipped.
pub fn parse_solution(model: &MilpModel, text: &str) -> Result<Witness, SolutionError> {
    let index = VarIndex::new(model);
    let mut witness = Witness {
        x: vec![false; index.x.len()],
        y: vec![false; index.y.len()],
        u_value: Weight::ZERO,
    };
    let mut seen = std::collections::HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let (Some(name), Some(value), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(SolutionError::Malformed { line });
        };
        let unknown = || SolutionError::UnknownVariable {
            line,
            name: name.to_owned(),
        };
        let var = Var::parse(name).ok_or_else(unknown)?;
        let bad = || SolutionError::BadValue {
            line,
            name: name.to_owned(),
            value: value.to_owned(),
        };
        let number: f64 = value.parse().map_err(|_| bad())?;
        let as_bool = || -> Result<bool, SolutionError> {
            if (number - 1.0).abs() <= BINARY_TOLERANCE {
                Ok(true)
            } else if number.abs() <= BINARY_TOLERANCE {
                Ok(false)
            } else {
                Err(bad())
            }
        };
        match var {
            Var::X(v) => {
                let slot = *index.x.get(&v).ok_or_else(unknown)?;
                witness.x[slot] = as_bool()?;
            }
            Var::Y(u, v) => {
                let slot = *index.y.get(&(u, v)).ok_or_else(unknown)?;
                witness.y[slot] = as_bool()?;
            }
            Var::U => {
                if !model.continuous.contains(&Var::U) {
                    return Err(unknown());
                }
                witness.u_value = Weight::from_f64_rounded(number).ok_or_else(bad)?;
            }
        }
        if !seen.insert(var) {
            return Err(SolutionError::Duplicate {
                line,
                name: name.to_owned(),
            });
        }
    }
    Ok(witness)
}

/// Renders a witness as `<name> <value>` lines in model variable order.
pub fn write_solution(model: &MilpModel, witness: &Witness) -> String {
    let index = VarIndex::new(model);
    let mut out = String::new();
    for var in model.binaries.iter().chain(&model.continuous) {
        let text = match *var {
            Var::X(i) => u8::from(witness.x[index.x[&i]]).to_string(),
            Var::Y(u, v) => u8::from(witness.y[index.y[&(u, v)]]).to_string(),
            Var::U => witness.u_value.to_string(),
        };
        out.push_str(&format!("{var} {text}\n"));
    }
    out
}
