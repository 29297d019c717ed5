//! Root–vertex cut separation for rooted models.
//!
//! For a selected vertex `v`, every edge set separating the root from `v`
//! must carry at least `y_v` worth of selected edges:
//! `y_v <= sum_{e in C} w_e`. Given a fractional point, the minimum root–`v`
//! cut under capacities `w_e` is the most violated such inequality; it is
//! found with [`FlowNetwork::max_flow`].

mod flow;

pub use flow::{Arc, FlowNetwork, MaxFlow};

use std::collections::{BTreeMap, BTreeSet};

use crate::formulation::{Family, LinearConstraint, MipModel, Sense, VarKind};
use crate::graph::{EdgeId, VertexId, WeightedGraph};

/// Violation threshold used by default.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// `y_target <= sum_{e in edges} w_e`.
#[derive(Clone, Debug, PartialEq)]
pub struct CutConstraint {
    pub target: VertexId,
    pub edges: BTreeSet<EdgeId>,
    /// Cut capacity at the point that produced it.
    pub capacity: f64,
}

impl CutConstraint {
    /// Row form over `model`'s variables.
    pub fn to_linear(&self, model: &MipModel, name: String) -> LinearConstraint {
        let mut terms = vec![(model.variable(VarKind::Vertex(self.target)).unwrap(), 1.0)];
        terms.extend(
            self.edges
                .iter()
                .map(|&e| (model.variable(VarKind::Edge(e)).unwrap(), -1.0)),
        );
        LinearConstraint {
            name,
            family: Family::Cut,
            terms,
            sense: Sense::Le,
            rhs: 0.0,
        }
    }

    /// Left-hand side minus right-hand side at the given values.
    pub fn violation(&self, y: &BTreeMap<VertexId, f64>, w: &BTreeMap<EdgeId, f64>) -> f64 {
        y.get(&self.target).copied().unwrap_or(0.0) - self.edges.iter().map(|e| w.get(e).copied().unwrap_or(0.0)).sum::<f64>()
    }
}

/// Minimum root–`v` cuts violated by more than `tolerance`, at most one per
/// target vertex. Values must lie in `[0, 1]`; missing entries count as 0.
pub fn find_violated_cuts(
    graph: &WeightedGraph,
    root: VertexId,
    w_values: &BTreeMap<EdgeId, f64>,
    y_values: &BTreeMap<VertexId, f64>,
    tolerance: f64,
) -> Vec<CutConstraint> {
    let vertices: Vec<VertexId> = graph.vertices().collect();
    let pos = |v: VertexId| vertices.binary_search(&v).unwrap();
    let Ok(root_pos) = vertices.binary_search(&root) else {
        return Vec::new();
    };
    let edges: Vec<(EdgeId, usize, usize, f64)> = graph
        .edges()
        .map(|(id, e)| {
            let cap = w_values.get(&id).copied().unwrap_or(0.0).clamp(0.0, 1.0);
            (id, pos(e.ends.0), pos(e.ends.1), cap)
        })
        .collect();

    let mut cuts = Vec::new();
    for (t, &v) in vertices.iter().enumerate() {
        let y = y_values.get(&v).copied().unwrap_or(0.0);
        if t == root_pos || y <= tolerance {
            continue;
        }
        let mut net = FlowNetwork::new(vertices.len(), root_pos, t);
        for &(_, a, b, cap) in &edges {
            net.add_arc(a, b, cap);
            net.add_arc(b, a, cap);
        }
        let flow = net.max_flow();
        if flow.value < y - tolerance {
            let side = &flow.source_side;
            cuts.push(CutConstraint {
                target: v,
                edges: edges
                    .iter()
                    .filter(|(_, a, b, _)| side[*a] != side[*b])
                    .map(|(id, ..)| *id)
                    .collect(),
                capacity: flow.value,
            });
        }
    }
    cuts
}

/// Splits dense model values into the per-vertex `y` and per-edge `w` maps.
pub fn selection_values(model: &MipModel, values: &[f64]) -> (BTreeMap<VertexId, f64>, BTreeMap<EdgeId, f64>) {
    let (mut y, mut w) = (BTreeMap::new(), BTreeMap::new());
    for (var, &value) in model.variables().iter().zip(values) {
        match var.kind {
            VarKind::Vertex(v) => {
                y.insert(v, value);
            }
            VarKind::Edge(e) => {
                w.insert(e, value);
            }
            _ => {}
        }
    }
    (y, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_weighted_path_is_cut() {
        let mut g = WeightedGraph::new();
        let r = g.add_vertex(0.0).unwrap();
        let a = g.add_vertex(0.0).unwrap();
        let b = g.add_vertex(5.0).unwrap();
        let e1 = g.add_edge(r, a, -1.0).unwrap();
        let e2 = g.add_edge(a, b, -1.0).unwrap();
        let w = BTreeMap::from([(e1, 0.5), (e2, 0.5)]);
        let y = BTreeMap::from([(r, 1.0), (a, 0.5), (b, 1.0)]);
        let cuts = find_violated_cuts(&g, r, &w, &y, DEFAULT_TOLERANCE);
        assert_eq!(cuts.len(), 1);
        assert_eq!(cuts[0].target, b);
        assert_eq!(cuts[0].capacity, 0.5);
        assert!(cuts[0].violation(&y, &w) > DEFAULT_TOLERANCE);
    }

    #[test]
    fn integral_connected_point_has_no_cut() {
        let mut g = WeightedGraph::new();
        let r = g.add_vertex(0.0).unwrap();
        let a = g.add_vertex(0.0).unwrap();
        let b = g.add_vertex(0.0).unwrap();
        let e1 = g.add_edge(r, a, 0.0).unwrap();
        let e2 = g.add_edge(a, b, 0.0).unwrap();
        let w = BTreeMap::from([(e1, 1.0), (e2, 1.0)]);
        let y = BTreeMap::from([(r, 1.0), (a, 1.0), (b, 1.0)]);
        assert!(find_violated_cuts(&g, r, &w, &y, DEFAULT_TOLERANCE).is_empty());
    }
}
