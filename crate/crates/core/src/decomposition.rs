//! Splitting an unrooted instance at the cut vertices of its largest
//! biconnected component.
//!
//! Let `B` be the largest block, `C` its cut vertices and, for `c` in `C`,
//! `B_c` the part of the graph hanging off `c` (everything reachable from `c`
//! without using `B`'s edges). An optimal connected subgraph either
//!
//! * meets `B`: then inside each `B_c` it is a connected piece containing
//!   `c`, and those pieces do not interact. All of them are found at once by
//!   one rooted solve on the branches with every `c` merged into one root.
//!   The core is then solved with each `c` carrying its branch value.
//! * avoids `B`: then it lies in one branch without touching `C`; the
//!   residual instance (all branches, cut vertices removed) is solved through
//!   the full pipeline.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::graph::{EdgeId, GraphError, Instance, Subgraph, VertexId, WeightedGraph};
use crate::solver::{SolveResult, Status};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecompositionError {
    #[error("decomposition needs a connected graph")]
    Disconnected,
    #[error("decomposition applies to unrooted instances only")]
    Rooted,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Branch {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionPlan {
    pub core: BTreeSet<VertexId>,
    pub core_edges: BTreeSet<EdgeId>,
    pub cut_vertices: BTreeSet<VertexId>,
    /// Branch hanging off each cut vertex; contains the cut vertex itself.
    pub branches: BTreeMap<VertexId, Branch>,
    /// All branches with the cut vertices identified into `merged_root`.
    pub merged_branch_instance: Instance,
    pub merged_root: VertexId,
    /// All branches without the cut vertices.
    pub residual_instance: Instance,
}

/// Chooses the largest block (ties: smallest minimum vertex id) and builds
/// the subinstances. `None` when there is nothing to split.
pub fn plan(instance: &Instance) -> Result<Option<DecompositionPlan>, DecompositionError> {
    if instance.root.is_some() {
        return Err(DecompositionError::Rooted);
    }
    let g = &instance.graph;
    if !g.is_connected() {
        return Err(DecompositionError::Disconnected);
    }
    let bic = g.biconnected_decomposition()?;
    if bic.blocks.len() < 2 {
        return Ok(None);
    }
    let block = bic
        .blocks
        .iter()
        .max_by(|a, b| {
            a.vertices
                .len()
                .cmp(&b.vertices.len())
                .then_with(|| b.vertices.first().cmp(&a.vertices.first()))
        })
        .unwrap();
    let cut_vertices: BTreeSet<VertexId> = block.vertices.intersection(&bic.cut_vertices).copied().collect();
    if cut_vertices.is_empty() {
        return Ok(None);
    }

    let mut branches = BTreeMap::new();
    for &c in &cut_vertices {
        let mut branch = Branch {
            vertices: BTreeSet::from([c]),
            edges: BTreeSet::new(),
        };
        let mut queue = VecDeque::from([c]);
        while let Some(v) = queue.pop_front() {
            for e in g.incident(v) {
                if block.edges.contains(&e) {
                    continue;
                }
                branch.edges.insert(e);
                let u = g.edge(e).unwrap().other(v);
                if branch.vertices.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        branches.insert(c, branch);
    }

    let merged_root = g.next_vertex_id();
    let mut merged = WeightedGraph::new();
    merged.add_vertex_with_id(merged_root, 0.0)?;
    let mut residual = WeightedGraph::new();
    for branch in branches.values() {
        for &v in &branch.vertices {
            if cut_vertices.contains(&v) {
                continue;
            }
            let w = g.vertex_weight(v).unwrap();
            merged.add_vertex_with_id(v, w)?;
            residual.add_vertex_with_id(v, w)?;
            if let Some(label) = g.label(v) {
                merged.set_vertex_label(v, label)?;
                residual.set_vertex_label(v, label)?;
            }
        }
    }
    let map = |v: VertexId| if cut_vertices.contains(&v) { merged_root } else { v };
    for branch in branches.values() {
        for &e in &branch.edges {
            let edge = g.edge(e).unwrap();
            let (a, b) = edge.ends;
            merged.add_edge_with_id(e, map(a), map(b), edge.weight)?;
            if !cut_vertices.contains(&a) && !cut_vertices.contains(&b) {
                residual.add_edge_with_id(e, a, b, edge.weight)?;
            }
        }
    }
    merged.reserve_ids(VertexId(merged_root.0 + 1), g.next_edge_id());
    residual.reserve_ids(VertexId(merged_root.0 + 1), g.next_edge_id());

    Ok(Some(DecompositionPlan {
        core: block.vertices.clone(),
        core_edges: block.edges.clone(),
        cut_vertices,
        branches,
        merged_branch_instance: Instance {
            graph: merged,
            root: Some(merged_root),
        },
        merged_root,
        residual_instance: Instance::unrooted(residual),
    }))
}

/// What the decomposition needs from a solver.
pub trait SubproblemSolver {
    type Error: From<DecompositionError>;

    /// Solves a connected instance without further splitting.
    fn solve_base(&mut self, instance: &Instance, allow_empty: bool) -> Result<SolveResult, Self::Error>;

    /// Solves any instance, possibly disconnected, through the whole pipeline.
    fn solve_full(&mut self, instance: &Instance, allow_empty: bool) -> Result<SolveResult, Self::Error>;
}

/// Solves a connected unrooted instance through its decomposition, falling
/// back to `solve_base` when there is nothing to split.
pub fn solve_decomposed<S: SubproblemSolver + ?Sized>(
    instance: &Instance,
    allow_empty: bool,
    solver: &mut S,
) -> Result<SolveResult, S::Error> {
    let Some(plan) = plan(instance)? else {
        return solver.solve_base(instance, allow_empty);
    };
    let g = &instance.graph;

    // Step 1: best piece of every branch, all at once.
    let merged = solver.solve_base(&plan.merged_branch_instance, false)?;
    let mut pieces = BTreeMap::new();
    for (&c, branch) in &plan.branches {
        let piece = Subgraph {
            vertices: merged
                .solution
                .vertices
                .iter()
                .copied()
                .filter(|v| branch.vertices.contains(v) && *v != plan.merged_root)
                .chain([c])
                .collect(),
            edges: merged.solution.edges.intersection(&branch.edges).copied().collect(),
        };
        pieces.insert(c, piece);
    }

    // Step 2: the core with branch values folded into the cut vertices.
    let mut core = g.induced(&plan.core);
    for e in core.edges().map(|(id, _)| id).collect::<Vec<_>>() {
        if !plan.core_edges.contains(&e) {
            core.remove_edge(e);
        }
    }
    for (&c, piece) in &pieces {
        core.set_vertex_weight(c, g.total_weight(piece)).map_err(DecompositionError::from)?;
    }
    let core_result = solver.solve_base(&Instance::unrooted(core), allow_empty)?;
    let mut through_core = core_result.solution.clone();
    for c in core_result.solution.vertices.intersection(&plan.cut_vertices) {
        through_core.extend(&pieces[c]);
    }
    let core_weight = g.total_weight(&through_core);
    let slack = (merged.upper_bound - merged.weight).max(0.0);
    let core_bound = core_result.upper_bound + slack;

    // Step 3: solutions avoiding the core.
    let residual = solver.solve_full(&plan.residual_instance, allow_empty)?;

    let status = if [merged.status, core_result.status, residual.status].contains(&Status::Timeout) {
        Status::Timeout
    } else {
        Status::Optimal
    };
    let use_residual = residual.status != Status::InfeasibleRooted && residual.weight > core_weight;
    let (solution, weight) = if use_residual {
        (residual.solution, residual.weight)
    } else {
        (through_core, core_weight)
    };
    let upper_bound = if status == Status::Optimal {
        weight
    } else {
        core_bound.max(residual.upper_bound).max(weight)
    };
    Ok(SolveResult {
        solution,
        weight,
        upper_bound,
        status,
    })
}

/// [`solve_decomposed`] driven by a single closure. Residual instances are
/// split into components and decomposed again before reaching `base_solve`.
pub fn solve_decomposed_with<E, F>(instance: &Instance, allow_empty: bool, base_solve: F) -> Result<SolveResult, E>
where
    E: From<DecompositionError>,
    F: FnMut(&Instance, bool) -> Result<SolveResult, E>,
{
    struct Adapter<F>(F);

    impl<E, F> SubproblemSolver for Adapter<F>
    where
        E: From<DecompositionError>,
        F: FnMut(&Instance, bool) -> Result<SolveResult, E>,
    {
        type Error = E;

        fn solve_base(&mut self, instance: &Instance, allow_empty: bool) -> Result<SolveResult, E> {
            (self.0)(instance, allow_empty)
        }

        fn solve_full(&mut self, instance: &Instance, allow_empty: bool) -> Result<SolveResult, E> {
            let g = &instance.graph;
            let mut results = Vec::new();
            for comp in g.component_vertex_sets() {
                let sub = Instance::unrooted(g.induced(&comp));
                results.push(solve_decomposed(&sub, false, self)?);
            }
            Ok(crate::solver::best_of(results, allow_empty))
        }
    }

    solve_decomposed(instance, allow_empty, &mut Adapter(base_solve))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn two_triangles() -> (WeightedGraph, Vec<VertexId>) {
        // Triangles {0,1,2} and {2,3,4} sharing vertex 2, plus a pendant 5 on 0.
        let mut g = WeightedGraph::new();
        let v: Vec<_> = [1.0, -2.0, 0.5, 3.0, -1.0, 4.0]
            .iter()
            .map(|&w| g.add_vertex(w).unwrap())
            .collect();
        for (a, b, w) in [(0, 1, -1.0), (1, 2, -1.0), (2, 0, -0.5), (2, 3, -2.0), (3, 4, 1.0), (4, 2, -1.0), (0, 5, -3.0)] {
            g.add_edge(v[a], v[b], w).unwrap();
        }
        (g, v)
    }

    #[test]
    fn biconnected_graph_is_not_split() {
        let mut g = WeightedGraph::new();
        let v: Vec<_> = (0..4).map(|_| g.add_vertex(1.0).unwrap()).collect();
        for i in 0..4 {
            g.add_edge(v[i], v[(i + 1) % 4], -1.0).unwrap();
        }
        assert_eq!(plan(&Instance::unrooted(g)).unwrap(), None);
    }

    #[test]
    fn plan_shape() {
        let (g, v) = two_triangles();
        let p = plan(&Instance::unrooted(g.clone())).unwrap().unwrap();
        // Both triangles have three vertices; the one holding vertex 0 wins.
        assert_eq!(p.core, BTreeSet::from([v[0], v[1], v[2]]));
        assert_eq!(p.cut_vertices, BTreeSet::from([v[0], v[2]]));
        assert_eq!(p.branches[&v[0]].vertices, BTreeSet::from([v[0], v[5]]));
        assert_eq!(p.branches[&v[2]].vertices, BTreeSet::from([v[2], v[3], v[4]]));
        assert_eq!(p.merged_branch_instance.graph.vertex_count(), 4);
        assert_eq!(p.residual_instance.graph.vertex_count(), 3);
        assert!(!p.merged_branch_instance.graph.contains_vertex(v[2]));
    }

    #[test]
    fn rooted_and_disconnected_rejected() {
        let (g, v) = two_triangles();
        assert_eq!(plan(&Instance::rooted(g, v[0]).unwrap()), Err(DecompositionError::Rooted));
        let mut g = WeightedGraph::new();
        g.add_vertex(1.0).unwrap();
        g.add_vertex(1.0).unwrap();
        assert_eq!(plan(&Instance::unrooted(g)), Err(DecompositionError::Disconnected));
    }

    #[test]
    fn decomposed_matches_oracle() {
        let (g, _) = two_triangles();
        let inst = Instance::unrooted(g);
        let oracle_solve = |i: &Instance, allow_empty: bool| -> Result<SolveResult, DecompositionError> {
            Ok(oracle::brute_force_with(i, allow_empty).unwrap_or_else(|_| crate::solver::best_of([], allow_empty)))
        };
        let r = solve_decomposed_with(&inst, true, oracle_solve).unwrap();
        let o = oracle::brute_force(&inst).unwrap();
        assert!((r.weight - o.weight).abs() < 1e-9);
        assert!(inst.graph.is_connected_subgraph(&r.solution));
        assert!((inst.graph.total_weight(&r.solution) - r.weight).abs() < 1e-9);
    }
}
