//! LP text format.
//!
//! The dialect is the common CPLEX-style layout understood by most MILP
//! solvers:
//!
//! ```text
//! Maximize
//! obj: U
//! Subject To
//! dim1: U - 3.000 y1_2 <= 0
//! lb1_2: x1 + x2 - y1_2 >= 0
//! ub1_2: x1 + x2 + y1_2 <= 2
//! bal: x1 + x2 = 1
//! Bounds
//! U >= 0
//! Binary
//! x1 x2 y1_2
//! End
//! ```
//!
//! Weight coefficients in `dim` rows are always printed with three
//! fraction digits; unit coefficients elsewhere are implicit. Long rows
//! continue on following lines indented by one space. [`parse_lp`] reads
//! back exactly this dialect.

use std::collections::HashSet;
use std::fmt::Write;

use thiserror::Error;

use super::{Constraint, Family, MilpModel, Sense, Term, Var, UNIT};
use crate::weight::Weight;

const TERMS_PER_LINE: usize = 8;
const NAMES_PER_LINE: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("missing `{0}` section")]
    MissingSection(&'static str),
    #[error("line {line}: unexpected `{found}`")]
    Unexpected { line: usize, found: String },
    #[error("line {line}: coefficient `{token}` is not a 3-decimal number")]
    BadCoefficient { line: usize, token: String },
    #[error("line {line}: unknown variable `{name}`")]
    UnknownVariable { line: usize, name: String },
    #[error("line {line}: unknown constraint name `{name}`")]
    UnknownRow { line: usize, name: String },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

fn implicit_unit(family: Family, var: Var) -> bool {
    family != Family::Dim || var == Var::U
}

fn write_coef(out: &mut String, coef: u64) {
    let w = Weight::from_milli(coef);
    write!(out, "{w} ").unwrap();
}

/// Renders the model as LP text. Output is deterministic.
pub fn emit_lp(model: &MilpModel) -> String {
    let mut out = String::new();
    out.push_str("Maximize\n");
    writeln!(out, "obj: {}", model.objective).unwrap();
    out.push_str("Subject To\n");
    for c in &model.constraints {
        write!(out, "{}:", c.name).unwrap();
        for (i, term) in c.terms.iter().enumerate() {
            if i > 0 && i % TERMS_PER_LINE == 0 {
                out.push('\n');
            }
            let sign = if term.coef < 0 { "-" } else { "+" };
            if i == 0 && term.coef >= 0 {
                out.push(' ');
            } else {
                write!(out, " {sign} ").unwrap();
            }
            let magnitude = term.coef.unsigned_abs();
            if !(magnitude == UNIT as u64 && implicit_unit(c.family, term.var)) {
                write_coef(&mut out, magnitude);
            }
            write!(out, "{}", term.var).unwrap();
        }
        writeln!(out, " {} {}", c.sense, c.rhs).unwrap();
    }
    out.push_str("Bounds\n");
    for v in &model.continuous {
        writeln!(out, "{v} >= 0").unwrap();
    }
    out.push_str("Binary\n");
    for chunk in model.binaries.chunks(NAMES_PER_LINE) {
        let names: Vec<String> = chunk.iter().map(Var::to_string).collect();
        writeln!(out, "{}", names.join(" ")).unwrap();
    }
    out.push_str("End\n");
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Objective,
    Constraints,
    Bounds,
    Binary,
}

const SECTIONS: [(&str, Section); 4] = [
    ("Maximize", Section::Objective),
    ("Subject To", Section::Constraints),
    ("Bounds", Section::Bounds),
    ("Binary", Section::Binary),
];

struct Token<'a> {
    line: usize,
    text: &'a str,
}

fn parse_var(tok: &Token) -> Result<Var, LpError> {
    Var::parse(tok.text).ok_or_else(|| LpError::UnknownVariable {
        line: tok.line,
        name: tok.text.to_owned(),
    })
}

fn parse_sense(text: &str) -> Option<Sense> {
    match text {
        "<=" => Some(Sense::Le),
        ">=" => Some(Sense::Ge),
        "=" => Some(Sense::Eq),
        _ => None,
    }
}

fn parse_constraints(tokens: &[Token]) -> Result<Vec<Constraint>, LpError> {
    let mut constraints = Vec::new();
    let mut it = tokens.iter().peekable();
    while let Some(tok) = it.next() {
        let name = tok.text.strip_suffix(':').ok_or_else(|| LpError::Malformed {
            line: tok.line,
            message: format!("expected `name:`, found `{}`", tok.text),
        })?;
        let family = Family::of_row(name).ok_or_else(|| LpError::UnknownRow {
            line: tok.line,
            name: name.to_owned(),
        })?;
        let mut terms = Vec::new();
        let sense = loop {
            let tok = it.next().ok_or(LpError::Malformed {
                line: tok.line,
                message: format!("constraint `{name}` is missing its relation"),
            })?;
            if let Some(sense) = parse_sense(tok.text) {
                break sense;
            }
            let (negative, head) = match tok.text {
                "+" | "-" => {
                    let next = it.next().ok_or(LpError::Malformed {
                        line: tok.line,
                        message: "dangling sign".into(),
                    })?;
                    (tok.text == "-", next)
                }
                _ if terms.is_empty() => (false, tok),
                _ => {
                    return Err(LpError::Unexpected {
                        line: tok.line,
                        found: tok.text.to_owned(),
                    })
                }
            };
            let (magnitude, var) = if let Some(var) = Var::parse(head.text) {
                (UNIT, var)
            } else {
                let coef: Weight = head.text.parse().map_err(|_| {
                    if head.text.starts_with(|c: char| c.is_ascii_digit() || c == '.') {
                        LpError::BadCoefficient {
                            line: head.line,
                            token: head.text.to_owned(),
                        }
                    } else {
                        LpError::UnknownVariable {
                            line: head.line,
                            name: head.text.to_owned(),
                        }
                    }
                })?;
                let var_tok = it.next().ok_or(LpError::Malformed {
                    line: head.line,
                    message: "coefficient without variable".into(),
                })?;
                let magnitude = i64::try_from(coef.milli()).map_err(|_| LpError::BadCoefficient {
                    line: head.line,
                    token: head.text.to_owned(),
                })?;
                (magnitude, parse_var(var_tok)?)
            };
            terms.push(Term {
                coef: if negative { -magnitude } else { magnitude },
                var,
            });
        };
        let rhs_tok = it.next().ok_or(LpError::Malformed {
            line: tok.line,
            message: format!("constraint `{name}` is missing its right-hand side"),
        })?;
        let rhs = rhs_tok.text.parse().map_err(|_| LpError::Malformed {
            line: rhs_tok.line,
            message: format!("right-hand side `{}` is not an integer", rhs_tok.text),
        })?;
        constraints.push(Constraint {
            name: name.to_owned(),
            family,
            terms,
            sense,
            rhs,
        });
    }
    Ok(constraints)
}

/// Parses text in the dialect written by [`emit_lp`].
pub fn parse_lp(text: &str) -> Result<MilpModel, LpError> {
    let mut sections: Vec<(Section, Vec<Token>)> = Vec::new();
    let mut ended = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if ended {
            return Err(LpError::Unexpected {
                line,
                found: trimmed.to_owned(),
            });
        }
        if trimmed == "End" {
            ended = true;
            continue;
        }
        if let Some(&(_, section)) = SECTIONS.iter().find(|(kw, _)| *kw == trimmed) {
            let expected = SECTIONS[sections.len().min(SECTIONS.len() - 1)].1;
            if sections.len() >= SECTIONS.len() || section != expected {
                return Err(LpError::Unexpected {
                    line,
                    found: trimmed.to_owned(),
                });
            }
            sections.push((section, Vec::new()));
            continue;
        }
        let Some((_, tokens)) = sections.last_mut() else {
            return Err(LpError::Unexpected {
                line,
                found: trimmed.to_owned(),
            });
        };
        tokens.extend(trimmed.split_whitespace().map(|text| Token { line, text }));
    }
    if let Some(&(kw, _)) = SECTIONS.get(sections.len()) {
        return Err(LpError::MissingSection(kw));
    }
    if !ended {
        return Err(LpError::MissingSection("End"));
    }
    let mut sections = sections.into_iter().map(|(_, tokens)| tokens);
    let objective = sections.next().unwrap();
    let rows = sections.next().unwrap();
    let bounds = sections.next().unwrap();
    let binary = sections.next().unwrap();

    let objective = match objective.as_slice() {
        [label, var] if label.text == "obj:" => parse_var(var)?,
        other => {
            return Err(LpError::Malformed {
                line: other.first().map_or(0, |t| t.line),
                message: "objective must be `obj: <variable>`".into(),
            })
        }
    };
    let constraints = parse_constraints(&rows)?;

    let mut continuous = Vec::new();
    for triple in bounds.chunks(3) {
        match triple {
            [var, op, zero] if op.text == ">=" && zero.text == "0" => {
                continuous.push(parse_var(var)?);
            }
            other => {
                return Err(LpError::Malformed {
                    line: other[0].line,
                    message: "bounds must read `<variable> >= 0`".into(),
                })
            }
        }
    }
    let binaries = binary.iter().map(parse_var).collect::<Result<Vec<_>, _>>()?;

    let declared: HashSet<Var> = binaries.iter().chain(&continuous).copied().collect();
    if let Some(v) = binaries.iter().find(|v| **v == Var::U) {
        return Err(LpError::Malformed {
            line: binary[0].line,
            message: format!("`{v}` cannot be binary"),
        });
    }
    if !declared.contains(&objective) {
        return Err(LpError::UnknownVariable {
            line: 2,
            name: objective.to_string(),
        });
    }
    for (c, tok) in constraints.iter().zip(rows.iter().filter(|t| t.text.ends_with(':'))) {
        if let Some(term) = c.terms.iter().find(|t| !declared.contains(&t.var)) {
            return Err(LpError::UnknownVariable {
                line: tok.line,
                name: term.var.to_string(),
            });
        }
    }
    Ok(MilpModel {
        objective,
        constraints,
        binaries,
        continuous,
    })
}
