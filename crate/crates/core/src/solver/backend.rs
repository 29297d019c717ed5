//! Relaxation backends for the cutting-plane loop.
//!
//! A backend takes the current model (with any cuts added so far) and
//! returns an optimal point of it. Backends may relax integrality; the loop
//! only needs a valid upper bound and, when `integral` is set, a point whose
//! rounded selection is optimal for the model.

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::process::Command;

use thiserror::Error;

use crate::formulation::{export_lp, MipModel};
use crate::oracle::{self, OracleError};

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("backend command failed: {0}")]
    Command(String),
    #[error("values line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("no value for variable {0}")]
    MissingValue(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("model has no feasible point")]
    Infeasible,
    #[error("backend returned an invalid point: {0}")]
    InvalidPoint(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelaxationPoint {
    /// One value per model variable, in model order.
    pub values: Vec<f64>,
    pub objective: f64,
    /// True when the point is an optimum of the integer model itself.
    pub integral: bool,
}

pub trait RelaxationBackend {
    fn solve(&mut self, model: &MipModel) -> Result<RelaxationPoint, BackendError>;
}

/// Exact integer optimum by exhaustive search; small models only.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExhaustiveBackend;

impl RelaxationBackend for ExhaustiveBackend {
    fn solve(&mut self, model: &MipModel) -> Result<RelaxationPoint, BackendError> {
        let best = oracle::maximize(model)?.ok_or(BackendError::Infeasible)?;
        let values = best.assignment.dense(model).map_err(|e| BackendError::InvalidPoint(e.to_string()))?;
        Ok(RelaxationPoint {
            values,
            objective: best.objective,
            integral: true,
        })
    }
}

/// Runs an external program on an LP file.
///
/// Arguments equal to `{lp}` and `{values}` are replaced by the LP path and
/// the path the program must write its answer to. The answer holds one
/// `name value` pair per line; blank lines and lines starting with `#` are
/// ignored.
#[derive(Clone, Debug)]
pub struct CommandBackend {
    pub program: String,
    pub args: Vec<String>,
    /// Whether the program enforces integrality.
    pub integral: bool,
    pub workdir: PathBuf,
    calls: usize,
}

impl CommandBackend {
    pub fn new(program: impl Into<String>, args: Vec<String>, integral: bool, workdir: impl Into<PathBuf>) -> Self {
        CommandBackend {
            program: program.into(),
            args,
            integral,
            workdir: workdir.into(),
            calls: 0,
        }
    }
}

impl RelaxationBackend for CommandBackend {
    fn solve(&mut self, model: &MipModel) -> Result<RelaxationPoint, BackendError> {
        self.calls += 1;
        let lp = self.workdir.join(format!("model{}.lp", self.calls));
        let out = self.workdir.join(format!("model{}.values", self.calls));
        fs::write(&lp, export_lp(model))?;
        let args: Vec<String> = self
            .args
            .iter()
            .map(|a| match a.as_str() {
                "{lp}" => lp.display().to_string(),
                "{values}" => out.display().to_string(),
                _ => a.clone(),
            })
            .collect();
        let status = Command::new(&self.program).args(&args).status()?;
        if !status.success() {
            return Err(BackendError::Command(format!("{} exited with {status}", self.program)));
        }
        let values = parse_values(model, &fs::read_to_string(&out)?)?;
        Ok(RelaxationPoint {
            objective: model.objective_value(&values),
            values,
            integral: self.integral,
        })
    }
}

/// Reads `name value` lines into a dense vector in model order.
pub fn parse_values(model: &MipModel, text: &str) -> Result<Vec<f64>, BackendError> {
    let index: HashMap<String, usize> = model
        .variables()
        .iter()
        .enumerate()
        .map(|(i, v)| (v.name(), i))
        .collect();
    let mut values = vec![None; index.len()];
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse = |message: String| BackendError::Parse { line: i + 1, message };
        let mut parts = line.split_whitespace();
        let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(parse("expected `name value`".into()));
        };
        let &slot = index.get(name).ok_or_else(|| parse(format!("unknown variable {name}")))?;
        let value: f64 = value.parse().map_err(|_| parse(format!("bad number {value}")))?;
        if !value.is_finite() {
            return Err(parse(format!("non-finite value for {name}")));
        }
        values[slot] = Some(value);
    }
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| BackendError::MissingValue(model.variables()[i].name())))
        .collect()
}
