//! Brute-force ground truth for small instances.
//!
//! [`brute_force`] enumerates vertex subsets and completes each with the
//! best connecting edge set from [`best_edges_for_vertex_set`]. That
//! completion is optimal: every positive induced edge can be added to any
//! connected edge set without breaking connectivity, and once the positive
//! edges are contracted, the cheapest way to connect the remaining pieces
//! with non-positive edges is a maximum-weight spanning tree of the
//! condensed multigraph (any extra non-positive edge only lowers the weight).
//!
//! [`enumerate`] walks the integer points of a [`MipModel`](crate::formulation::MipModel),
//! with depth variables restricted to integers. This is enough for the model:
//! at integral arc and root values the depth constraints pin every selected
//! depth to an integer, and unselected depths are free in `[1, n]`.

pub mod enumerate;

pub use enumerate::{enumerate_feasible, feasible_projections, for_each_feasible, maximize, FeasiblePoint};

use std::collections::BTreeSet;

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::graph::{EdgeId, Instance, Subgraph, VertexId, WeightedGraph};
use crate::solver::{SolveResult, Status};

/// Largest instance `brute_force` accepts.
pub const MAX_BRUTE_FORCE_VERTICES: usize = 15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("instance has {actual} vertices, the oracle accepts at most {limit}")]
    TooLarge { actual: usize, limit: usize },
    #[error("root {0} is not a vertex of the graph")]
    UnknownRoot(VertexId),
    #[error("no feasible solution")]
    Infeasible,
}

/// Maximum-weight edge set connecting exactly the vertices of `set`, or
/// `None` when the induced subgraph is disconnected.
pub fn best_edges_for_vertex_set(graph: &WeightedGraph, set: &BTreeSet<VertexId>) -> Option<BTreeSet<EdgeId>> {
    let index: Vec<VertexId> = set.iter().copied().collect();
    let pos = |v: VertexId| index.binary_search(&v).ok();
    let mut uf = UnionFind::<usize>::new(index.len());
    let mut chosen = BTreeSet::new();
    let mut rest: Vec<(f64, EdgeId, usize, usize)> = Vec::new();
    for (id, e) in graph.edges() {
        let (Some(a), Some(b)) = (pos(e.ends.0), pos(e.ends.1)) else {
            continue;
        };
        if e.weight > 0.0 {
            chosen.insert(id);
            uf.union(a, b);
        } else {
            rest.push((e.weight, id, a, b));
        }
    }
    rest.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
    for (_, id, a, b) in rest {
        if uf.union(a, b) {
            chosen.insert(id);
        }
    }
    let mut labels = uf.into_labeling();
    labels.sort_unstable();
    labels.dedup();
    (labels.len() <= 1).then_some(chosen)
}

/// Exhaustive optimum; the empty subgraph competes for unrooted instances.
pub fn brute_force(instance: &Instance) -> Result<SolveResult, OracleError> {
    brute_force_with(instance, true)
}

/// Exhaustive optimum with explicit control over the empty subgraph.
pub fn brute_force_with(instance: &Instance, allow_empty: bool) -> Result<SolveResult, OracleError> {
    let g = &instance.graph;
    let n = g.vertex_count();
    if n > MAX_BRUTE_FORCE_VERTICES {
        return Err(OracleError::TooLarge {
            actual: n,
            limit: MAX_BRUTE_FORCE_VERTICES,
        });
    }
    let vertices: Vec<VertexId> = g.vertices().collect();
    let root_bit = match instance.root {
        Some(r) => Some(vertices.iter().position(|&v| v == r).ok_or(OracleError::UnknownRoot(r))?),
        None => None,
    };

    let mut best: Option<(f64, Subgraph)> = None;
    if root_bit.is_none() && allow_empty {
        best = Some((0.0, Subgraph::new()));
    }
    for mask in 1u32..(1u32 << n) {
        if let Some(bit) = root_bit {
            if mask & (1 << bit) == 0 {
                continue;
            }
        }
        let set: BTreeSet<VertexId> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| vertices[i]).collect();
        let Some(edges) = best_edges_for_vertex_set(g, &set) else {
            continue;
        };
        let sub = Subgraph { vertices: set, edges };
        let weight = g.total_weight(&sub);
        if best.as_ref().map_or(true, |(w, _)| weight > *w) {
            best = Some((weight, sub));
        }
    }
    let (weight, solution) = best.ok_or(OracleError::Infeasible)?;
    Ok(SolveResult {
        solution,
        weight,
        upper_bound: weight,
        status: Status::Optimal,
    })
}
