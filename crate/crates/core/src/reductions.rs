//! Optimum-preserving graph reductions.
//!
//! Two rewrite rules are applied to a fixpoint:
//!
//! * **edge contraction**: an edge `e = (u, v)` with `w(e) >= 0`,
//!   `w(e) + w(u) >= 0` and `w(e) + w(v) >= 0` is contracted into a fresh
//!   vertex of weight `w(e) + w(u) + w(v)`. Parallel edges created by the
//!   contraction are normalized: non-negative parallels are merged into one
//!   edge carrying their sum, then only the heaviest parallel is kept.
//! * **negative chain replacement**: a degree-2 vertex `v` with neighbours
//!   `u != w` where `v` and both incident edges are negative is replaced by a
//!   single edge `(u, w)` carrying the sum of the three weights.
//!
//! Every rewrite is logged in a [`ReductionTrace`] which can replay the
//! reduction on the original graph and lift a solution of the reduced graph
//! back to the original one with its weight unchanged.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{EdgeId, GraphError, Instance, Subgraph, VertexId, WeightedGraph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReductionError {
    #[error("solution does not belong to the reduced graph: {0}")]
    InvalidSolution(#[from] GraphError),
}

/// One logged rewrite.
#[derive(Clone, Debug, PartialEq)]
pub enum Rewrite {
    /// `edge = (ends.0, ends.1)` contracted into the new vertex `merged`.
    /// `absorbed` are non-negative parallels of `edge` folded into the vertex
    /// weight, `dropped` the negative ones. `rewired` edges keep their id and
    /// now end at `merged`.
    Contraction {
        merged: VertexId,
        ends: (VertexId, VertexId),
        edge: EdgeId,
        absorbed: Vec<EdgeId>,
        dropped: Vec<EdgeId>,
        rewired: Vec<EdgeId>,
    },
    /// Non-negative parallel edges `parts` replaced by the new edge `merged`.
    ParallelMerge {
        merged: EdgeId,
        ends: (VertexId, VertexId),
        parts: Vec<EdgeId>,
    },
    /// Parallel edges removed in favour of the heavier `kept`.
    ParallelDrop { kept: EdgeId, dropped: Vec<EdgeId> },
    /// `vertex` and its two incident edges replaced by the new `edge`.
    ChainReplace {
        edge: EdgeId,
        ends: (VertexId, VertexId),
        vertex: VertexId,
        parts: (EdgeId, EdgeId),
    },
    /// The root was contracted; `to` is the new root.
    RootMoved { from: VertexId, to: VertexId },
}

/// Ordered rewrite log.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReductionTrace {
    records: Vec<Rewrite>,
}

fn contraction_weight(g: &WeightedGraph, ends: (VertexId, VertexId), edge: EdgeId, absorbed: &[EdgeId]) -> f64 {
    let mut w = g.edge_weight(edge).unwrap()
        + g.vertex_weight(ends.0).unwrap()
        + g.vertex_weight(ends.1).unwrap();
    for &a in absorbed {
        w += g.edge_weight(a).unwrap();
    }
    w
}

/// Applies one record to `g`. Shared by the reduction rules and by replay so
/// both produce bit-identical weights.
fn apply_record(g: &mut WeightedGraph, record: &Rewrite) -> Result<(), GraphError> {
    match record {
        Rewrite::Contraction {
            merged,
            ends,
            edge,
            absorbed,
            dropped,
            rewired,
        } => {
            let weight = contraction_weight(g, *ends, *edge, absorbed);
            g.add_vertex_with_id(*merged, weight)?;
            for e in std::iter::once(edge).chain(absorbed).chain(dropped) {
                g.remove_edge(*e).ok_or(GraphError::UnknownEdge(*e))?;
            }
            for &e in rewired {
                let from = if g.edge(e).ok_or(GraphError::UnknownEdge(e))?.touches(ends.0) {
                    ends.0
                } else {
                    ends.1
                };
                g.rewire_edge(e, from, *merged)?;
            }
            for v in [ends.0, ends.1] {
                if g.degree(v) != 0 {
                    return Err(GraphError::UnknownVertex(v));
                }
                g.remove_vertex(v);
            }
        }
        Rewrite::ParallelMerge { merged, ends, parts } => {
            let mut weight = 0.0;
            for &p in parts {
                weight += g.edge_weight(p).ok_or(GraphError::UnknownEdge(p))?;
            }
            for &p in parts {
                g.remove_edge(p);
            }
            g.add_edge_with_id(*merged, ends.0, ends.1, weight)?;
        }
        Rewrite::ParallelDrop { dropped, .. } => {
            for &d in dropped {
                g.remove_edge(d).ok_or(GraphError::UnknownEdge(d))?;
            }
        }
        Rewrite::ChainReplace {
            edge,
            ends,
            vertex,
            parts,
        } => {
            let weight = g.vertex_weight(*vertex).ok_or(GraphError::UnknownVertex(*vertex))?
                + g.edge_weight(parts.0).ok_or(GraphError::UnknownEdge(parts.0))?
                + g.edge_weight(parts.1).ok_or(GraphError::UnknownEdge(parts.1))?;
            g.remove_vertex(*vertex);
            g.add_edge_with_id(*edge, ends.0, ends.1, weight)?;
        }
        Rewrite::RootMoved { .. } => {}
    }
    Ok(())
}

impl ReductionTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn records(&self) -> &[Rewrite] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    fn push_and_apply(&mut self, g: &mut WeightedGraph, record: Rewrite) {
        apply_record(g, &record).expect("reduction produced an inconsistent rewrite");
        self.records.push(record);
    }

    /// Re-applies the logged rewrites to a copy of `original`.
    pub fn replay(&self, original: &WeightedGraph) -> Result<WeightedGraph, GraphError> {
        let mut g = original.clone();
        for record in &self.records {
            apply_record(&mut g, record)?;
        }
        Ok(g)
    }

    /// Maps a solution of the reduced graph back to the original graph.
    pub fn lift(&self, reduced: &WeightedGraph, solution: &Subgraph) -> Result<Subgraph, ReductionError> {
        reduced.validate(solution)?;
        let mut sol = solution.clone();
        for record in self.records.iter().rev() {
            match record {
                Rewrite::Contraction {
                    merged,
                    ends,
                    edge,
                    absorbed,
                    ..
                } => {
                    if sol.vertices.remove(merged) {
                        sol.vertices.insert(ends.0);
                        sol.vertices.insert(ends.1);
                        sol.edges.insert(*edge);
                        sol.edges.extend(absorbed.iter().copied());
                    }
                }
                Rewrite::ParallelMerge { merged, parts, .. } => {
                    if sol.edges.remove(merged) {
                        sol.edges.extend(parts.iter().copied());
                    }
                }
                Rewrite::ChainReplace {
                    edge, vertex, parts, ..
                } => {
                    if sol.edges.remove(edge) {
                        sol.vertices.insert(*vertex);
                        sol.edges.insert(parts.0);
                        sol.edges.insert(parts.1);
                    }
                }
                Rewrite::ParallelDrop { .. } | Rewrite::RootMoved { .. } => {}
            }
        }
        Ok(sol)
    }
}

fn rule1_applies(g: &WeightedGraph, edge: EdgeId) -> bool {
    let e = g.edge(edge).unwrap();
    let wu = g.vertex_weight(e.ends.0).unwrap();
    let wv = g.vertex_weight(e.ends.1).unwrap();
    e.weight >= 0.0 && e.weight + wu >= 0.0 && e.weight + wv >= 0.0
}

fn rule2_chain(instance: &Instance, v: VertexId) -> Option<(EdgeId, EdgeId, VertexId, VertexId)> {
    let g = &instance.graph;
    if instance.root == Some(v) || g.degree(v) != 2 || g.vertex_weight(v)? >= 0.0 {
        return None;
    }
    let mut inc = g.incident(v);
    let (e1, e2) = (inc.next()?, inc.next()?);
    let (u, w) = (g.edge(e1)?.other(v), g.edge(e2)?.other(v));
    if u == w || g.edge_weight(e1)? >= 0.0 || g.edge_weight(e2)? >= 0.0 {
        return None;
    }
    Some((e1, e2, u, w))
}

/// Normalizes the parallel edges between `a` and `b`: non-negative parallels
/// are merged, then only the heaviest edge survives.
fn normalize_pair(g: &mut WeightedGraph, a: VertexId, b: VertexId, trace: &mut ReductionTrace) {
    let group = g.edges_between(a, b);
    if group.len() < 2 {
        return;
    }
    let non_negative: Vec<EdgeId> = group
        .iter()
        .copied()
        .filter(|&e| g.edge_weight(e).unwrap() >= 0.0)
        .collect();
    if non_negative.len() >= 2 {
        let merged = g.next_edge_id();
        trace.push_and_apply(
            g,
            Rewrite::ParallelMerge {
                merged,
                ends: (a, b),
                parts: non_negative,
            },
        );
    }
    let group = g.edges_between(a, b);
    if group.len() < 2 {
        return;
    }
    let kept = *group
        .iter()
        .max_by(|x, y| {
            let (wx, wy) = (g.edge_weight(**x).unwrap(), g.edge_weight(**y).unwrap());
            wx.total_cmp(&wy).then(y.cmp(x))
        })
        .unwrap();
    let dropped = group.into_iter().filter(|&e| e != kept).collect();
    trace.push_and_apply(g, Rewrite::ParallelDrop { kept, dropped });
}

/// Normalizes every parallel group of the graph.
pub fn normalize_parallel_edges(graph: &mut WeightedGraph, trace: &mut ReductionTrace) -> bool {
    let before = trace.len();
    let pairs: BTreeSet<(VertexId, VertexId)> = graph
        .edges()
        .map(|(_, e)| (e.ends.0.min(e.ends.1), e.ends.0.max(e.ends.1)))
        .collect();
    for (a, b) in pairs {
        normalize_pair(graph, a, b, trace);
    }
    trace.len() != before
}

/// Contracts the lowest-id edge satisfying the contraction guard, then
/// normalizes the parallel edges around the new vertex. Returns whether a
/// contraction happened; callers loop until it returns `false`.
pub fn apply_rule1(instance: &mut Instance, trace: &mut ReductionTrace) -> bool {
    let g = &mut instance.graph;
    let Some(edge) = g.edges().map(|(id, _)| id).find(|&id| rule1_applies(g, id)) else {
        return false;
    };
    let ends = g.edge(edge).unwrap().ends;
    let (mut absorbed, mut dropped) = (Vec::new(), Vec::new());
    for p in g.edges_between(ends.0, ends.1) {
        if p == edge {
            continue;
        }
        if g.edge_weight(p).unwrap() >= 0.0 {
            absorbed.push(p);
        } else {
            dropped.push(p);
        }
    }
    let rewired: Vec<EdgeId> = g
        .incident(ends.0)
        .chain(g.incident(ends.1))
        .filter(|e| *e != edge && !absorbed.contains(e) && !dropped.contains(e))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let merged = g.next_vertex_id();
    trace.push_and_apply(
        g,
        Rewrite::Contraction {
            merged,
            ends,
            edge,
            absorbed,
            dropped,
            rewired,
        },
    );
    if let Some(root) = instance.root {
        if root == ends.0 || root == ends.1 {
            trace.records.push(Rewrite::RootMoved { from: root, to: merged });
            instance.root = Some(merged);
        }
    }
    let neighbours: BTreeSet<VertexId> = instance.graph.neighbors(merged).collect();
    for t in neighbours {
        normalize_pair(&mut instance.graph, merged, t, trace);
    }
    true
}

/// One pass of negative chain replacement over all vertices. Returns whether
/// any chain was replaced.
pub fn apply_rule2(instance: &mut Instance, trace: &mut ReductionTrace) -> bool {
    let mut changed = false;
    let candidates: Vec<VertexId> = instance.graph.vertices().collect();
    for v in candidates {
        if !instance.graph.contains_vertex(v) {
            continue;
        }
        let Some((e1, e2, u, w)) = rule2_chain(instance, v) else {
            continue;
        };
        let edge = instance.graph.next_edge_id();
        trace.push_and_apply(
            &mut instance.graph,
            Rewrite::ChainReplace {
                edge,
                ends: (u, w),
                vertex: v,
                parts: (e1, e2),
            },
        );
        normalize_pair(&mut instance.graph, u, w, trace);
        changed = true;
    }
    changed
}

/// Runs both rules to a fixpoint. The returned graph has no parallel edges,
/// no edge satisfying the contraction guard and no replaceable chain.
pub fn preprocess(instance: &Instance) -> (Instance, ReductionTrace) {
    let mut reduced = instance.clone();
    let mut trace = ReductionTrace::new();
    normalize_parallel_edges(&mut reduced.graph, &mut trace);
    loop {
        while apply_rule1(&mut reduced, &mut trace) {}
        if !apply_rule2(&mut reduced, &mut trace) {
            break;
        }
    }
    (reduced, trace)
}

/// Whether `instance` is a fixpoint of both rules.
pub fn is_irreducible(instance: &Instance) -> bool {
    let g = &instance.graph;
    !g.has_parallel_edges()
        && !g.edges().any(|(id, _)| rule1_applies(g, id))
        && !g.vertices().any(|v| rule2_chain(instance, v).is_some())
}

/// Per-record element accounting, useful for reporting.
pub fn summary(trace: &ReductionTrace) -> BTreeMap<&'static str, usize> {
    let mut out = BTreeMap::new();
    for r in trace.records() {
        let key = match r {
            Rewrite::Contraction { .. } => "contraction",
            Rewrite::ParallelMerge { .. } => "parallel_merge",
            Rewrite::ParallelDrop { .. } => "parallel_drop",
            Rewrite::ChainReplace { .. } => "chain_replace",
            Rewrite::RootMoved { .. } => "root_moved",
        };
        *out.entry(key).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(weights: &[f64], edge_weights: &[f64]) -> (Instance, Vec<VertexId>, Vec<EdgeId>) {
        let mut g = WeightedGraph::new();
        let vs: Vec<_> = weights.iter().map(|&w| g.add_vertex(w).unwrap()).collect();
        let es = edge_weights
            .iter()
            .enumerate()
            .map(|(i, &w)| g.add_edge(vs[i], vs[i + 1], w).unwrap())
            .collect();
        (Instance::unrooted(g), vs, es)
    }

    #[test]
    fn rule1_contracts_tight_edge() {
        let (mut inst, vs, es) = path(&[1.0, -1.0], &[1.0]);
        let mut trace = ReductionTrace::new();
        assert!(apply_rule1(&mut inst, &mut trace));
        assert_eq!(inst.graph.vertex_count(), 1);
        let w = inst.graph.vertices().next().unwrap();
        assert_eq!(inst.graph.vertex_weight(w), Some(1.0));

        let lifted = trace.lift(&inst.graph, &Subgraph::single(w)).unwrap();
        assert_eq!(lifted, Subgraph::from_parts(vs, es));
    }

    #[test]
    fn rule1_triangle_normalizes_parallels() {
        let mut g = WeightedGraph::new();
        let a = g.add_vertex(1.0).unwrap();
        let b = g.add_vertex(1.0).unwrap();
        let c = g.add_vertex(0.0).unwrap();
        g.add_edge(a, b, 5.0).unwrap();
        g.add_edge(b, c, 2.0).unwrap();
        g.add_edge(a, c, -1.0).unwrap();
        let mut inst = Instance::unrooted(g);
        let mut trace = ReductionTrace::new();
        assert!(apply_rule1(&mut inst, &mut trace));
        let g = &inst.graph;
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        let w = g.vertices().find(|&v| v != c).unwrap();
        assert_eq!(g.vertex_weight(w), Some(7.0));
        assert_eq!(g.edges().next().unwrap().1.weight, 2.0);
    }

    #[test]
    fn rule1_leaves_negative_path() {
        let (mut inst, _, _) = path(&[-5.0, -5.0], &[-1.0]);
        let before = inst.clone();
        assert!(!apply_rule1(&mut inst, &mut ReductionTrace::new()));
        assert_eq!(inst, before);
    }

    #[test]
    fn rule2_replaces_negative_chain() {
        let (mut inst, vs, es) = path(&[0.0, -2.0, 0.0], &[-1.0, -3.0]);
        let mut trace = ReductionTrace::new();
        assert!(apply_rule2(&mut inst, &mut trace));
        assert_eq!(inst.graph.vertex_count(), 2);
        let (eid, edge) = inst.graph.edges().next().unwrap();
        assert_eq!(edge.weight, -6.0);

        let sol = Subgraph::from_parts([vs[0], vs[2]], [eid]);
        let lifted = trace.lift(&inst.graph, &sol).unwrap();
        assert_eq!(lifted, Subgraph::from_parts(vs, es));
    }

    #[test]
    fn rule2_requires_negative_middle() {
        let (mut inst, _, _) = path(&[0.0, 2.0, 0.0], &[-1.0, -3.0]);
        assert!(!apply_rule2(&mut inst, &mut ReductionTrace::new()));
    }

    #[test]
    fn rule2_skips_double_edge_to_same_neighbour() {
        let mut g = WeightedGraph::new();
        let u = g.add_vertex(0.0).unwrap();
        let v = g.add_vertex(-1.0).unwrap();
        g.add_edge(u, v, -1.0).unwrap();
        g.add_edge(u, v, -2.0).unwrap();
        let mut inst = Instance::unrooted(g);
        assert!(!apply_rule2(&mut inst, &mut ReductionTrace::new()));
    }

    #[test]
    fn rule2_never_consumes_root() {
        let (inst, vs, _) = path(&[0.0, -2.0, 0.0], &[-1.0, -3.0]);
        let mut rooted = Instance::rooted(inst.graph, vs[1]).unwrap();
        assert!(!apply_rule2(&mut rooted, &mut ReductionTrace::new()));
    }

    #[test]
    fn chain_of_three_collapses_to_one_edge() {
        let (inst, _, _) = path(&[-10.0, -1.0, -2.0, -3.0, -10.0], &[-1.0, -1.0, -1.0, -1.0]);
        let (reduced, trace) = preprocess(&inst);
        assert_eq!(reduced.graph.vertex_count(), 2);
        assert_eq!(reduced.graph.edge_count(), 1);
        assert_eq!(reduced.graph.edges().next().unwrap().1.weight, -10.0);
        assert_eq!(trace.replay(&inst.graph).unwrap(), reduced.graph);
    }

    #[test]
    fn all_positive_collapses_to_single_vertex() {
        let mut g = WeightedGraph::new();
        let vs: Vec<_> = (0..4).map(|i| g.add_vertex(i as f64 + 1.0).unwrap()).collect();
        for i in 0..4 {
            g.add_edge(vs[i], vs[(i + 1) % 4], 0.5).unwrap();
        }
        g.add_edge(vs[0], vs[2], 0.25).unwrap();
        let inst = Instance::unrooted(g.clone());
        let (reduced, trace) = preprocess(&inst);
        assert_eq!(reduced.graph.vertex_count(), 1);
        assert_eq!(reduced.graph.edge_count(), 0);
        let w = reduced.graph.vertices().next().unwrap();
        assert_eq!(reduced.graph.vertex_weight(w), Some(g.total_weight(&g.full_subgraph())));
        let lifted = trace.lift(&reduced.graph, &Subgraph::single(w)).unwrap();
        assert_eq!(lifted, g.full_subgraph());
    }

    #[test]
    fn negative_star_is_irreducible() {
        let mut g = WeightedGraph::new();
        let c = g.add_vertex(-10.0).unwrap();
        for _ in 0..3 {
            let l = g.add_vertex(1.0).unwrap();
            g.add_edge(c, l, -1.0).unwrap();
        }
        let inst = Instance::unrooted(g);
        let (reduced, trace) = preprocess(&inst);
        assert!(trace.is_empty());
        assert_eq!(reduced, inst);
        assert!(is_irreducible(&reduced));
    }

    #[test]
    fn contraction_relabels_root() {
        let (inst, vs, _) = path(&[1.0, 1.0, -4.0], &[1.0, -3.0]);
        let rooted = Instance::rooted(inst.graph, vs[0]).unwrap();
        let (reduced, trace) = preprocess(&rooted);
        let root = reduced.root.unwrap();
        assert!(reduced.graph.contains_vertex(root));
        assert!(trace
            .records()
            .iter()
            .any(|r| matches!(r, Rewrite::RootMoved { from, .. } if *from == vs[0])));
    }

    #[test]
    fn lift_empty_and_invalid() {
        let (inst, _, _) = path(&[1.0, -1.0], &[1.0]);
        let (reduced, trace) = preprocess(&inst);
        assert_eq!(trace.lift(&reduced.graph, &Subgraph::new()).unwrap(), Subgraph::new());
        assert!(trace
            .lift(&reduced.graph, &Subgraph::single(VertexId(77)))
            .is_err());
    }

    #[test]
    fn parallel_input_is_normalized() {
        let mut g = WeightedGraph::new();
        let a = g.add_vertex(-3.0).unwrap();
        let b = g.add_vertex(-3.0).unwrap();
        let p1 = g.add_edge(a, b, 1.0).unwrap();
        let p2 = g.add_edge(a, b, 0.5).unwrap();
        g.add_edge(a, b, -2.0).unwrap();
        let inst = Instance::unrooted(g);
        let (reduced, trace) = preprocess(&inst);
        assert!(!reduced.graph.has_parallel_edges());
        let (eid, e) = reduced.graph.edges().next().unwrap();
        assert_eq!(e.weight, 1.5);
        let sol = Subgraph::from_parts([a, b], [eid]);
        let lifted = trace.lift(&reduced.graph, &sol).unwrap();
        assert_eq!(lifted, Subgraph::from_parts([a, b], [p1, p2]));
    }
}
