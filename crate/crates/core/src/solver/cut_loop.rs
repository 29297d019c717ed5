//! Cutting-plane loop over a relaxation backend (rooted instances).
//!
//! Each round solves the current model, separates violated root cuts at the
//! returned point and adds them. The backend objective is an upper bound in
//! every round. When the final point is integral its selection is the
//! answer; otherwise the native search supplies the primal solution.

use std::time::Instant;

use crate::formulation::{build_model, check_assignment, encode_subgraph};
use crate::graph::Instance;
use crate::separation::{find_violated_cuts, selection_values, DEFAULT_TOLERANCE};

use super::backend::{BackendError, RelaxationBackend};
use super::{bnb, SolveConfig, SolveError, SolveResult, Status};

/// Hard cap on rounds; each round adds at least one cut, and there are
/// finitely many distinct ones, so this only guards against broken backends.
const MAX_ROUNDS: usize = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct CutLoopReport {
    pub result: SolveResult,
    pub rounds: usize,
    pub cuts_added: usize,
    /// Backend objective after each round.
    pub bounds: Vec<f64>,
}

pub(crate) fn run(
    instance: &Instance,
    backend: &mut dyn RelaxationBackend,
    config: &SolveConfig,
    deadline: Option<Instant>,
) -> Result<CutLoopReport, SolveError> {
    let Some(root) = instance.root else {
        return Err(SolveError::InvalidConfig("the cut loop needs a rooted instance".into()));
    };
    if !instance.graph.contains_vertex(root) {
        return Err(SolveError::UnknownRoot(root));
    }
    let mut model = build_model(instance, config.model_options())?;
    let mut bounds = Vec::new();
    let mut cuts_added = 0;
    let mut timed_out = false;
    let point = loop {
        let point = backend.solve(&model)?;
        if point.values.len() != model.variables().len() {
            return Err(BackendError::InvalidPoint(format!(
                "expected {} values, got {}",
                model.variables().len(),
                point.values.len()
            ))
            .into());
        }
        bounds.push(point.objective);
        let (y, w) = selection_values(&model, &point.values);
        let cuts = find_violated_cuts(&instance.graph, root, &w, &y, DEFAULT_TOLERANCE);
        if cuts.is_empty() {
            break point;
        }
        let round = bounds.len();
        for cut in &cuts {
            model.add_constraint(cut.to_linear(&model, format!("cut{round}_v{}", cut.target)))?;
        }
        cuts_added += cuts.len();
        if bounds.len() >= MAX_ROUNDS || deadline.is_some_and(|d| Instant::now() >= d) {
            timed_out = true;
            break point;
        }
    };
    let bound = bounds.iter().copied().fold(f64::INFINITY, f64::min);
    let rounds = bounds.len();

    let result = if point.integral && !timed_out {
        let solution = model.decode_subgraph(&point.values);
        let assignment = encode_subgraph(&model, &solution)
            .map_err(|e| BackendError::InvalidPoint(e.to_string()))?;
        let violated = check_assignment(&model, &assignment)?;
        if !violated.is_empty() || !instance.graph.is_connected_subgraph(&solution) {
            return Err(BackendError::InvalidPoint(format!("selection violates {violated:?}")).into());
        }
        let weight = instance.graph.total_weight(&solution);
        SolveResult {
            solution,
            weight,
            upper_bound: weight,
            status: Status::Optimal,
        }
    } else {
        let (mut r, _) = bnb::search(instance, config, deadline, false);
        if r.status == Status::Timeout {
            r.upper_bound = r.upper_bound.min(bound).max(r.weight);
        }
        r
    };
    Ok(CutLoopReport {
        result,
        rounds,
        cuts_added,
        bounds,
    })
}

/// Runs the loop directly on a rooted instance.
pub fn backend_cut_loop(
    instance: &Instance,
    backend: &mut dyn RelaxationBackend,
    config: &SolveConfig,
) -> Result<CutLoopReport, SolveError> {
    let deadline = config.time_limit.map(|t| Instant::now() + t);
    run(instance, backend, config, deadline)
}
