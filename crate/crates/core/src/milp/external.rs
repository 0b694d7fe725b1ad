//! File-exchange integration with an external MILP solver.
//!
//! The solver is described by a command template, split on whitespace,
//! in which `{lp}` is replaced by the path of the emitted LP file, `{sol}`
//! by the path the solver must write `<name> <value>` lines to, and
//! `{time}` by the time limit in seconds (`0` when unlimited).

use std::io;
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use thiserror::Error;

use super::{emit_lp, parse_solution, MilpModel, SolutionError, Witness};

#[derive(Debug, Error)]
pub enum ExternalError {
    #[error("empty solver command")]
    EmptyCommand,
    #[error("solver i/o: {0}")]
    Io(#[from] io::Error),
    #[error("solver exited with {status}: {stderr}")]
    Failed { status: String, stderr: String },
    #[error("solver did not write a solution file")]
    NoSolution,
    #[error("solver solution: {0}")]
    Solution(#[from] SolutionError),
}

#[derive(Debug, Clone)]
pub struct ExternalOutcome {
    /// `None` when the solver was stopped at the time limit.
    pub witness: Option<Witness>,
    pub elapsed: f64,
    pub timed_out: bool,
}

const POLL: Duration = Duration::from_millis(5);

/// Emits `model`, runs the solver and reads back its solution.
pub fn run_external(
    model: &MilpModel,
    command: &str,
    time_limit: Option<Duration>,
) -> Result<ExternalOutcome, ExternalError> {
    let dir = tempfile::tempdir()?;
    let lp_path = dir.path().join("model.lp");
    let sol_path = dir.path().join("model.sol");
    std::fs::write(&lp_path, emit_lp(model))?;

    let limit = time_limit.map_or_else(|| "0".to_owned(), |t| format!("{}", t.as_secs_f64()));
    let mut args = command.split_whitespace().map(|a| {
        a.replace("{lp}", &lp_path.to_string_lossy())
            .replace("{sol}", &sol_path.to_string_lossy())
            .replace("{time}", &limit)
    });
    let program = args.next().ok_or(ExternalError::EmptyCommand)?;

    let start = Instant::now();
    let mut child = Command::new(program)
        .args(args)
        .stdin(Stdio::null())
        .stdout(Stdio::null())
        .stderr(Stdio::piped())
        .spawn()?;
    let status = loop {
        if let Some(status) = child.try_wait()? {
            break status;
        }
        if time_limit.is_some_and(|t| start.elapsed() >= t) {
            child.kill()?;
            child.wait()?;
            return Ok(ExternalOutcome {
                witness: None,
                elapsed: start.elapsed().as_secs_f64(),
                timed_out: true,
            });
        }
        thread::sleep(POLL);
    };
    let elapsed = start.elapsed().as_secs_f64();
    if !status.success() {
        let mut stderr = String::new();
        if let Some(mut pipe) = child.stderr.take() {
            io::Read::read_to_string(&mut pipe, &mut stderr)?;
        }
        return Err(ExternalError::Failed {
            status: status.to_string(),
            stderr: stderr.trim().to_owned(),
        });
    }
    let text = std::fs::read_to_string(&sol_path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => ExternalError::NoSolution,
        _ => ExternalError::Io(e),
    })?;
    Ok(ExternalOutcome {
        witness: Some(parse_solution(model, &text)?),
        elapsed,
        timed_out: false,
    })
}
