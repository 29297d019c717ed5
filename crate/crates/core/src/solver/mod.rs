//! Solve entry points.
//!
//! [`solve`] runs the whole pipeline: the instance is split into connected
//! components (rooted instances keep only the root's component), each
//! component is reduced, unrooted components are decomposed around their
//! largest biconnected component, and every irreducible piece goes to the
//! configured engine. Solutions are lifted back and recombined.

mod backend;
mod bnb;
mod cut_loop;

pub use backend::{parse_values, CommandBackend, ExhaustiveBackend, RelaxationBackend, RelaxationPoint};
pub use bnb::{branch_and_bound, SearchStats};
pub use cut_loop::{backend_cut_loop, CutLoopReport};

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::decomposition::{self, DecompositionError, SubproblemSolver};
use crate::formulation::{precedes, FormulationError, ModelOptions};
use crate::graph::{Instance, Subgraph, VertexId};
use crate::reductions::{self, ReductionError, ReductionTrace};

pub use backend::BackendError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    /// Native exact search (default).
    BranchAndBound,
    /// Cutting-plane loop over an external relaxation backend.
    BackendCutLoop,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveConfig {
    pub time_limit: Option<Duration>,
    pub workers: usize,
    pub engine: Engine,
    pub preprocess: bool,
    pub decompose: bool,
    pub symmetry_breaking: bool,
    pub bfs_restriction: bool,
    /// Let the empty subgraph (weight 0) compete in unrooted instances.
    pub allow_empty: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            time_limit: None,
            workers: 1,
            engine: Engine::BranchAndBound,
            preprocess: true,
            decompose: true,
            symmetry_breaking: true,
            bfs_restriction: true,
            allow_empty: true,
        }
    }
}

impl SolveConfig {
    pub fn model_options(&self) -> ModelOptions {
        ModelOptions {
            symmetry_breaking: self.symmetry_breaking,
            bfs_restriction: self.bfs_restriction,
            allow_empty: self.allow_empty,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Timeout,
    InfeasibleRooted,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::Timeout => "timeout",
            Status::InfeasibleRooted => "infeasible_rooted",
        }
    }

    fn merge(self, other: Status) -> Status {
        match (self, other) {
            (Status::Timeout, _) | (_, Status::Timeout) => Status::Timeout,
            (Status::InfeasibleRooted, s) | (s, Status::InfeasibleRooted) => s,
            _ => Status::Optimal,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub solution: Subgraph,
    pub weight: f64,
    pub upper_bound: f64,
    pub status: Status,
}

impl SolveResult {
    pub fn empty() -> Self {
        SolveResult {
            solution: Subgraph::new(),
            weight: 0.0,
            upper_bound: 0.0,
            status: Status::Optimal,
        }
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("root {0} is not a vertex of the graph")]
    UnknownRoot(VertexId),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("the cut-loop engine needs a relaxation backend")]
    BackendUnavailable,
    #[error("relaxation backend failed: {0}")]
    Backend(#[from] BackendError),
    #[error(transparent)]
    Formulation(#[from] FormulationError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

/// Best of several independent results (disjoint components or alternative
/// subproblems). The empty subgraph competes when `allow_empty`.
pub(crate) fn best_of(results: impl IntoIterator<Item = SolveResult>, allow_empty: bool) -> SolveResult {
    let mut best: Option<SolveResult> = allow_empty.then(SolveResult::empty);
    let mut bound = if allow_empty { 0.0 } else { f64::NEG_INFINITY };
    let mut status = Status::Optimal;
    let mut any = allow_empty;
    for r in results {
        if r.status == Status::InfeasibleRooted {
            continue;
        }
        any = true;
        bound = bound.max(r.upper_bound);
        status = status.merge(r.status);
        if best.as_ref().map_or(true, |b| r.weight > b.weight) {
            best = Some(r);
        }
    }
    match best {
        Some(mut b) if any => {
            b.upper_bound = bound.max(b.weight);
            b.status = status;
            b
        }
        _ => SolveResult {
            status: Status::InfeasibleRooted,
            weight: f64::NEG_INFINITY,
            upper_bound: f64::NEG_INFINITY,
            solution: Subgraph::new(),
        },
    }
}

pub(crate) struct Session<'a> {
    pub(crate) config: SolveConfig,
    pub(crate) deadline: Option<Instant>,
    backend: Option<&'a mut dyn RelaxationBackend>,
}

impl<'a> Session<'a> {
    fn new(config: &SolveConfig, backend: Option<&'a mut dyn RelaxationBackend>) -> Result<Self, SolveError> {
        if config.workers == 0 {
            return Err(SolveError::InvalidConfig("worker_count must be at least 1".into()));
        }
        if config.engine == Engine::BackendCutLoop && backend.is_none() {
            return Err(SolveError::BackendUnavailable);
        }
        Ok(Session {
            config: config.clone(),
            deadline: config.time_limit.map(|t| Instant::now() + t),
            backend,
        })
    }

    /// Whole pipeline on an arbitrary instance.
    fn solve_instance(&mut self, instance: &Instance, allow_empty: bool) -> Result<SolveResult, SolveError> {
        let g = &instance.graph;
        if let Some(root) = instance.root {
            if !g.contains_vertex(root) {
                return Err(SolveError::UnknownRoot(root));
            }
            let comp = g
                .component_vertex_sets()
                .into_iter()
                .find(|c| c.contains(&root))
                .expect("root lies in some component");
            let sub = Instance {
                graph: g.induced(&comp),
                root: Some(root),
            };
            return self.solve_connected(&sub, false);
        }
        let mut results = Vec::new();
        for comp in g.component_vertex_sets() {
            let sub = Instance::unrooted(g.induced(&comp));
            results.push(self.solve_connected(&sub, false)?);
        }
        if results.is_empty() {
            return Ok(SolveResult::empty());
        }
        Ok(best_of(results, allow_empty))
    }

    fn solve_connected(&mut self, instance: &Instance, allow_empty: bool) -> Result<SolveResult, SolveError> {
        let (reduced, trace) = if self.config.preprocess {
            reductions::preprocess(instance)
        } else {
            let mut reduced = instance.clone();
            let mut trace = ReductionTrace::new();
            reductions::normalize_parallel_edges(&mut reduced.graph, &mut trace);
            (reduced, trace)
        };
        let result = if self.config.decompose && reduced.root.is_none() {
            decomposition::solve_decomposed(&reduced, allow_empty, self)?
        } else {
            self.solve_base(&reduced, allow_empty)?
        };
        let solution = trace.lift(&reduced.graph, &result.solution)?;
        let weight = instance.graph.total_weight(&solution);
        let upper_bound = if result.status == Status::Optimal {
            weight
        } else {
            result.upper_bound.max(weight)
        };
        Ok(SolveResult {
            solution,
            weight,
            upper_bound,
            status: result.status,
        })
    }

    /// Engine call on a connected simple instance.
    fn engine(&mut self, instance: &Instance, allow_empty: bool) -> Result<SolveResult, SolveError> {
        match self.config.engine {
            Engine::BranchAndBound => Ok(bnb::search(instance, &self.config, self.deadline, allow_empty).0),
            Engine::BackendCutLoop => {
                if instance.root.is_some() {
                    let backend = self.backend.as_deref_mut().ok_or(SolveError::BackendUnavailable)?;
                    return Ok(cut_loop::run(instance, backend, &self.config, self.deadline)?.result);
                }
                self.per_root(instance, allow_empty)
            }
        }
    }

    /// Unrooted instance as a family of rooted ones: the `i`-th heaviest
    /// vertex is the root and every heavier vertex is removed.
    fn per_root(&mut self, instance: &Instance, allow_empty: bool) -> Result<SolveResult, SolveError> {
        let g = &instance.graph;
        let mut order: Vec<VertexId> = g.vertices().collect();
        order.sort_by(|&a, &b| {
            if precedes(g, a, b) {
                std::cmp::Ordering::Greater
            } else if a == b {
                std::cmp::Ordering::Equal
            } else {
                std::cmp::Ordering::Less
            }
        });
        let mut remaining: BTreeSet<VertexId> = g.vertices().collect();
        let mut results = Vec::new();
        for root in order {
            let reduced = g.induced(&remaining);
            let comp = reduced
                .component_vertex_sets()
                .into_iter()
                .find(|c| c.contains(&root))
                .unwrap();
            let sub = Instance {
                graph: reduced.induced(&comp),
                root: Some(root),
            };
            results.push(self.engine(&sub, false)?);
            remaining.remove(&root);
        }
        Ok(best_of(results, allow_empty))
    }
}

impl SubproblemSolver for Session<'_> {
    type Error = SolveError;

    fn solve_base(&mut self, instance: &Instance, allow_empty: bool) -> Result<SolveResult, SolveError> {
        if instance.graph.is_empty() {
            return Ok(best_of([], allow_empty || instance.root.is_none()));
        }
        self.engine(instance, allow_empty)
    }

    fn solve_full(&mut self, instance: &Instance, allow_empty: bool) -> Result<SolveResult, SolveError> {
        self.solve_instance(instance, allow_empty)
    }
}

/// Solves an instance with the configured engine. The cut-loop engine needs
/// a backend; use [`solve_with_backend`] for it.
pub fn solve(instance: &Instance, config: &SolveConfig) -> Result<SolveResult, SolveError> {
    let mut session = Session::new(config, None)?;
    session.solve_instance(instance, config.allow_empty)
}

pub fn solve_with_backend(
    instance: &Instance,
    config: &SolveConfig,
    backend: &mut dyn RelaxationBackend,
) -> Result<SolveResult, SolveError> {
    let mut session = Session::new(config, Some(backend))?;
    session.solve_instance(instance, config.allow_empty)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;

    #[test]
    fn all_negative_gives_empty() {
        let mut g = WeightedGraph::new();
        let a = g.add_vertex(-1.0).unwrap();
        let b = g.add_vertex(-2.0).unwrap();
        g.add_edge(a, b, -1.0).unwrap();
        let r = solve(&Instance::unrooted(g), &SolveConfig::default()).unwrap();
        assert!(r.solution.is_empty());
        assert_eq!(r.weight, 0.0);
        assert_eq!(r.status, Status::Optimal);
    }

    #[test]
    fn positive_star_centre() {
        let mut g = WeightedGraph::new();
        let c = g.add_vertex(5.0).unwrap();
        for _ in 0..4 {
            let l = g.add_vertex(-1.0).unwrap();
            g.add_edge(c, l, -1.0).unwrap();
        }
        let r = solve(&Instance::unrooted(g), &SolveConfig::default()).unwrap();
        assert_eq!(r.solution, Subgraph::single(c));
        assert_eq!(r.weight, 5.0);
    }

    #[test]
    fn unknown_root_is_an_error() {
        let mut g = WeightedGraph::new();
        g.add_vertex(1.0).unwrap();
        let inst = Instance {
            graph: g,
            root: Some(VertexId(5)),
        };
        assert!(matches!(
            solve(&inst, &SolveConfig::default()),
            Err(SolveError::UnknownRoot(VertexId(5)))
        ));
    }

    #[test]
    fn cut_loop_needs_backend() {
        let config = SolveConfig {
            engine: Engine::BackendCutLoop,
            ..SolveConfig::default()
        };
        assert!(matches!(
            solve(&Instance::default(), &config),
            Err(SolveError::BackendUnavailable)
        ));
    }

    #[test]
    fn zero_workers_rejected() {
        let config = SolveConfig {
            workers: 0,
            ..SolveConfig::default()
        };
        assert!(matches!(
            solve(&Instance::default(), &config),
            Err(SolveError::InvalidConfig(_))
        ));
    }

    #[test]
    fn rooted_uses_root_component_only() {
        let mut g = WeightedGraph::new();
        let r = g.add_vertex(-1.0).unwrap();
        let x = g.add_vertex(-1.0).unwrap();
        g.add_edge(r, x, -1.0).unwrap();
        g.add_vertex(100.0).unwrap();
        let r_ = solve(&Instance::rooted(g, r).unwrap(), &SolveConfig::default()).unwrap();
        assert_eq!(r_.solution, Subgraph::single(r));
        assert_eq!(r_.weight, -1.0);
    }
}
