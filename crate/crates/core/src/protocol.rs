//! Vary-dimension benchmark protocol.
//!
//! Every instance is solved once per `(k, method)` on its `k`-coordinate
//! prefix, under a wall-clock limit. Rows are reported even on timeout,
//! carrying the incumbent.

use std::fmt;
use std::panic::{self, AssertUnwindSafe};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

use crate::branch_bound::solve_bnb;
use crate::enumeration::solve_enumeration;
use crate::graph::{Instance, Vertex};
use crate::milp::{build_model, run_external};
use crate::solve::{SolveOptions, SolveResult, Status};
use crate::weight::Weight;

/// Weight dimensions of the vary-dimension protocol.
pub const DEFAULT_K_VALUES: [usize; 8] = [1, 2, 3, 4, 5, 10, 15, 20];
/// Per-solve wall-clock limit of the original experiments.
pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(7200);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Enum,
    Bnb,
    /// External MILP solver through LP file exchange.
    Milp,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Enum => "enum",
            Method::Bnb => "bnb",
            Method::Milp => "milp",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "enum" => Ok(Method::Enum),
            "bnb" => Ok(Method::Bnb),
            "milp" => Ok(Method::Milp),
            other => Err(format!("unknown method `{other}` (expected enum, bnb or milp)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct NamedInstance {
    pub name: String,
    pub instance: Instance,
}

#[derive(Debug, Clone)]
pub struct ProtocolOptions {
    pub time_limit: Duration,
    /// Concurrent solves. Each solve itself stays single-threaded.
    pub jobs: usize,
    /// Command template for [`Method::Milp`]; see [`run_external`].
    pub solver_command: Option<String>,
}

impl Default for ProtocolOptions {
    fn default() -> Self {
        ProtocolOptions {
            time_limit: DEFAULT_TIME_LIMIT,
            jobs: 1,
            solver_command: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub instance_name: String,
    pub k: usize,
    pub method: Method,
    /// `None` when no incumbent is known (external solver stopped early).
    pub value: Option<Weight>,
    pub status: Status,
    /// Not observable for external solvers.
    pub time_to_best: Option<f64>,
    pub time_total: f64,
    /// Members of the reported side containing vertex 1.
    pub bisection: Option<Vec<Vertex>>,
}

impl BenchRow {
    fn key(&self) -> (&str, usize, Method) {
        (&self.instance_name, self.k, self.method)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtocolError {
    #[error("k = {k} exceeds the dimension {dim} of instance `{instance}`")]
    DimensionTooLarge {
        instance: String,
        k: usize,
        dim: usize,
    },
    #[error("k must be at least 1")]
    ZeroDimension,
    #[error("method `milp` needs a solver command")]
    MissingSolver,
    #[error("duplicate row for ({instance}, {k}, {method})")]
    DuplicateRow {
        instance: String,
        k: usize,
        method: Method,
    },
}

fn row_from_result(name: &str, k: usize, method: Method, r: SolveResult) -> BenchRow {
    BenchRow {
        instance_name: name.to_owned(),
        k,
        method,
        value: Some(r.best_value),
        status: r.status,
        time_to_best: Some(r.time_to_best.min(r.time_total)),
        time_total: r.time_total,
        bisection: Some(r.best_bisection.members().to_vec()),
    }
}

fn aborted(name: &str, k: usize, method: Method) -> BenchRow {
    BenchRow {
        instance_name: name.to_owned(),
        k,
        method,
        value: None,
        status: Status::Aborted,
        time_to_best: None,
        time_total: 0.0,
        bisection: None,
    }
}

fn run_one(named: &NamedInstance, k: usize, method: Method, options: &ProtocolOptions) -> BenchRow {
    let name = named.name.as_str();
    let instance = named.instance.prefix(k).expect("k validated up front");
    let solve_options = SolveOptions::with_time_limit(options.time_limit);
    let outcome = panic::catch_unwind(AssertUnwindSafe(|| match method {
        Method::Enum => row_from_result(name, k, method, solve_enumeration(&instance, &solve_options)),
        Method::Bnb => row_from_result(name, k, method, solve_bnb(&instance, &solve_options)),
        Method::Milp => {
            let command = options.solver_command.as_deref().expect("validated up front");
            let model = build_model(&instance);
            match run_external(&model, command, Some(options.time_limit)) {
                Ok(out) => {
                    let witness = out.witness;
                    BenchRow {
                        instance_name: name.to_owned(),
                        k,
                        method,
                        value: witness.as_ref().map(|w| w.u_value),
                        status: if out.timed_out {
                            Status::TimeLimit
                        } else {
                            Status::Optimal
                        },
                        time_to_best: None,
                        time_total: out.elapsed,
                        bisection: witness
                            .and_then(|w| w.bisection())
                            .map(|b| b.members().to_vec()),
                    }
                }
                Err(_) => aborted(name, k, method),
            }
        }
    }));
    outcome.unwrap_or_else(|_| aborted(name, k, method))
}

/// Solves every `(instance, k, method)` combination.
///
/// Rows come back sorted by `(instance name, k, method)`.
pub fn run_protocol(
    instances: &[NamedInstance],
    methods: &[Method],
    k_values: &[usize],
    options: &ProtocolOptions,
) -> Result<Vec<BenchRow>, ProtocolError> {
    for named in instances {
        for &k in k_values {
            if k == 0 {
                return Err(ProtocolError::ZeroDimension);
            }
            if k > named.instance.dim() {
                return Err(ProtocolError::DimensionTooLarge {
                    instance: named.name.clone(),
                    k,
                    dim: named.instance.dim(),
                });
            }
        }
    }
    if methods.contains(&Method::Milp) && options.solver_command.is_none() {
        return Err(ProtocolError::MissingSolver);
    }

    let combos: Vec<(&NamedInstance, usize, Method)> = instances
        .iter()
        .flat_map(|named| {
            k_values
                .iter()
                .flat_map(move |&k| methods.iter().map(move |&m| (named, k, m)))
        })
        .collect();
    let rows = Mutex::new(Vec::with_capacity(combos.len()));
    let next = AtomicUsize::new(0);
    let workers = options.jobs.clamp(1, combos.len().max(1));
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(named, k, method)) = combos.get(i) else {
                    break;
                };
                let row = run_one(named, k, method, options);
                rows.lock().unwrap().push(row);
            });
        }
    });
    let mut rows = rows.into_inner().unwrap();
    rows.sort_by(|a, b| a.key().cmp(&b.key()));
    Ok(rows)
}

/// CSV with header `instance,k,method,value,status,t,t_tot`.
///
/// Rows are written in `(instance, k, method)` order; values and times use
/// three decimals, unknown fields are left empty.
pub fn write_csv(rows: &[BenchRow]) -> Result<String, ProtocolError> {
    let mut sorted: Vec<&BenchRow> = rows.iter().collect();
    sorted.sort_by(|a, b| a.key().cmp(&b.key()));
    if let Some(pair) = sorted.windows(2).find(|p| p[0].key() == p[1].key()) {
        return Err(ProtocolError::DuplicateRow {
            instance: pair[0].instance_name.clone(),
            k: pair[0].k,
            method: pair[0].method,
        });
    }
    let mut out = String::from("instance,k,method,value,status,t,t_tot\n");
    for row in sorted {
        let value = row.value.map(|v| v.to_string()).unwrap_or_default();
        let t = row.time_to_best.map(|t| format!("{t:.3}")).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{:.3}\n",
            row.instance_name, row.k, row.method, value, row.status, t, row.time_total
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GenConfig};

    fn suite() -> Vec<NamedInstance> {
        let cfg = GenConfig::new(10, 15, 20, 99);
        vec![NamedInstance {
            name: cfg.name(),
            instance: generate(&cfg).unwrap(),
        }]
    }

    fn quick() -> ProtocolOptions {
        ProtocolOptions {
            time_limit: Duration::from_secs(30),
            ..Default::default()
        }
    }

    #[test]
    fn one_row_per_combination() {
        let rows = run_protocol(&suite(), &[Method::Enum, Method::Bnb], &DEFAULT_K_VALUES, &quick()).unwrap();
        assert_eq!(rows.len(), 16);
        for pair in rows.chunks(2) {
            assert_eq!(pair[0].k, pair[1].k);
            assert_eq!(pair[0].method, Method::Enum);
            assert_eq!(pair[1].method, Method::Bnb);
            assert_eq!(pair[0].status, Status::Optimal);
            assert_eq!(pair[1].status, Status::Optimal);
            assert_eq!(pair[0].value, pair[1].value);
            assert_eq!(pair[0].bisection, pair[1].bisection);
        }
        let values: Vec<Weight> = rows.iter().step_by(2).map(|r| r.value.unwrap()).collect();
        assert!(values.windows(2).all(|p| p[0] >= p[1]), "{values:?}");
        for r in &rows {
            assert!(r.time_to_best.unwrap() <= r.time_total);
        }
    }

    #[test]
    fn parallel_rows_match_sequential() {
        let seq = run_protocol(&suite(), &[Method::Enum, Method::Bnb], &[1, 5, 20], &quick()).unwrap();
        let par = run_protocol(
            &suite(),
            &[Method::Enum, Method::Bnb],
            &[1, 5, 20],
            &ProtocolOptions { jobs: 4, ..quick() },
        )
        .unwrap();
        let strip = |rows: &[BenchRow]| -> Vec<_> {
            rows.iter()
                .map(|r| (r.instance_name.clone(), r.k, r.method, r.value, r.bisection.clone()))
                .collect()
        };
        assert_eq!(strip(&seq), strip(&par));
    }

    #[test]
    fn rejects_bad_requests() {
        assert!(matches!(
            run_protocol(&suite(), &[Method::Enum], &[21], &quick()),
            Err(ProtocolError::DimensionTooLarge { k: 21, dim: 20, .. })
        ));
        assert_eq!(
            run_protocol(&suite(), &[Method::Enum], &[0], &quick()),
            Err(ProtocolError::ZeroDimension)
        );
        assert_eq!(
            run_protocol(&suite(), &[Method::Milp], &[1], &quick()),
            Err(ProtocolError::MissingSolver)
        );
    }

    #[test]
    fn failing_solver_gives_aborted_rows() {
        let options = ProtocolOptions {
            solver_command: Some("false".into()),
            ..quick()
        };
        let rows = run_protocol(&suite(), &[Method::Milp], &[1], &options).unwrap();
        assert_eq!(rows[0].status, Status::Aborted);
        assert_eq!(rows[0].value, None);
    }

    #[test]
    fn csv_layout() {
        assert_eq!(write_csv(&[]).unwrap(), "instance,k,method,value,status,t,t_tot\n");
        let row = BenchRow {
            instance_name: "010_015".into(),
            k: 2,
            method: Method::Bnb,
            value: Some(Weight::from_milli(59971)),
            status: Status::Optimal,
            time_to_best: Some(0.0004),
            time_total: 0.0012,
            bisection: None,
        };
        let csv = write_csv(std::slice::from_ref(&row)).unwrap();
        assert_eq!(
            csv,
            "instance,k,method,value,status,t,t_tot\n010_015,2,bnb,59.971,Optimal,0.000,0.001\n"
        );
        let external = BenchRow {
            method: Method::Milp,
            value: None,
            status: Status::TimeLimit,
            time_to_best: None,
            ..row.clone()
        };
        let csv = write_csv(&[external.clone(), row.clone()]).unwrap();
        assert_eq!(csv.lines().nth(2).unwrap(), "010_015,2,milp,,TimeLimit,,0.001");
        assert!(matches!(
            write_csv(&[row.clone(), row]),
            Err(ProtocolError::DuplicateRow { k: 2, .. })
        ));
    }

    #[test]
    fn method_names() {
        for m in [Method::Enum, Method::Bnb, Method::Milp] {
            assert_eq!(m.to_string().parse::<Method>(), Ok(m));
        }
        assert!("cplex".parse::<Method>().is_err());
    }
}
