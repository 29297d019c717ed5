//! Weighted undirected multigraphs and the structural algorithms the solver
//! pipeline is built on.
//!
//! Vertices and edges are addressed by stable ids that are never reused, so a
//! graph can be rewritten in place (contractions, chain replacement) while
//! solutions found on the rewritten graph can still be mapped back.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Stable vertex identifier. The numeric order is the fixed total order used
/// for every tie-break in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

/// Stable edge identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("self-loop on vertex {0} is not allowed")]
    SelfLoop(VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("vertex {0} already exists")]
    DuplicateVertex(VertexId),
    #[error("edge {0} already exists")]
    DuplicateEdge(EdgeId),
    #[error("weight {0} is not finite")]
    NonFiniteWeight(f64),
    #[error("graph is not connected")]
    Disconnected,
    #[error("edge {edge} has an endpoint outside the subgraph vertex set")]
    DanglingEdge { edge: EdgeId },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub ends: (VertexId, VertexId),
    pub weight: f64,
}

impl Edge {
    /// The endpoint opposite to `v`. `v` must be an endpoint.
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.ends.0 == v {
            self.ends.1
        } else {
            self.ends.0
        }
    }

    pub fn touches(&self, v: VertexId) -> bool {
        self.ends.0 == v || self.ends.1 == v
    }
}

#[derive(Clone, Debug, PartialEq)]
struct VertexData {
    weight: f64,
    label: Option<String>,
    incident: BTreeSet<EdgeId>,
}

/// Undirected multigraph with real weights on vertices and edges.
///
/// Self-loops are rejected. Parallel edges are accepted.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WeightedGraph {
    vertices: BTreeMap<VertexId, VertexData>,
    edges: BTreeMap<EdgeId, Edge>,
    next_vertex: u32,
    next_edge: u32,
}

fn check_finite(w: f64) -> Result<(), GraphError> {
    if w.is_finite() {
        Ok(())
    } else {
        Err(GraphError::NonFiniteWeight(w))
    }
}

impl WeightedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, weight: f64) -> Result<VertexId, GraphError> {
        let id = VertexId(self.next_vertex);
        self.insert_vertex(id, weight, None)?;
        Ok(id)
    }

    pub fn add_labeled_vertex(
        &mut self,
        label: impl Into<String>,
        weight: f64,
    ) -> Result<VertexId, GraphError> {
        let id = VertexId(self.next_vertex);
        self.insert_vertex(id, weight, Some(label.into()))?;
        Ok(id)
    }

    /// Inserts a vertex under a caller-chosen id. Used when carving
    /// sub-instances that must keep the ids of their parent graph.
    pub fn add_vertex_with_id(&mut self, id: VertexId, weight: f64) -> Result<(), GraphError> {
        self.insert_vertex(id, weight, None)
    }

    fn insert_vertex(
        &mut self,
        id: VertexId,
        weight: f64,
        label: Option<String>,
    ) -> Result<(), GraphError> {
        check_finite(weight)?;
        if self.vertices.contains_key(&id) {
            return Err(GraphError::DuplicateVertex(id));
        }
        self.vertices.insert(
            id,
            VertexData {
                weight,
                label,
                incident: BTreeSet::new(),
            },
        );
        self.next_vertex = self.next_vertex.max(id.0 + 1);
        Ok(())
    }

    pub fn add_edge(&mut self, a: VertexId, b: VertexId, weight: f64) -> Result<EdgeId, GraphError> {
        let id = EdgeId(self.next_edge);
        self.add_edge_with_id(id, a, b, weight)?;
        Ok(id)
    }

    pub fn add_edge_with_id(
        &mut self,
        id: EdgeId,
        a: VertexId,
        b: VertexId,
        weight: f64,
    ) -> Result<(), GraphError> {
        check_finite(weight)?;
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        for v in [a, b] {
            if !self.vertices.contains_key(&v) {
                return Err(GraphError::UnknownVertex(v));
            }
        }
        if self.edges.contains_key(&id) {
            return Err(GraphError::DuplicateEdge(id));
        }
        self.edges.insert(id, Edge { ends: (a, b), weight });
        self.vertices.get_mut(&a).unwrap().incident.insert(id);
        self.vertices.get_mut(&b).unwrap().incident.insert(id);
        self.next_edge = self.next_edge.max(id.0 + 1);
        Ok(())
    }

    pub fn remove_edge(&mut self, id: EdgeId) -> Option<Edge> {
        let edge = self.edges.remove(&id)?;
        for v in [edge.ends.0, edge.ends.1] {
            if let Some(data) = self.vertices.get_mut(&v) {
                data.incident.remove(&id);
            }
        }
        Some(edge)
    }

    /// Removes a vertex together with its incident edges.
    pub fn remove_vertex(&mut self, id: VertexId) -> Option<f64> {
        let incident: Vec<EdgeId> = self.vertices.get(&id)?.incident.iter().copied().collect();
        for e in incident {
            self.remove_edge(e);
        }
        self.vertices.remove(&id).map(|d| d.weight)
    }

    /// Moves the endpoint `from` of edge `id` onto vertex `to`.
    pub(crate) fn rewire_edge(&mut self, id: EdgeId, from: VertexId, to: VertexId) -> Result<(), GraphError> {
        let edge = self.edges.get_mut(&id).ok_or(GraphError::UnknownEdge(id))?;
        let other = edge.other(from);
        if other == to {
            return Err(GraphError::SelfLoop(to));
        }
        if edge.ends.0 == from {
            edge.ends.0 = to;
        } else {
            edge.ends.1 = to;
        }
        self.vertices.get_mut(&from).ok_or(GraphError::UnknownVertex(from))?.incident.remove(&id);
        self.vertices.get_mut(&to).ok_or(GraphError::UnknownVertex(to))?.incident.insert(id);
        Ok(())
    }

    pub fn set_vertex_weight(&mut self, id: VertexId, weight: f64) -> Result<(), GraphError> {
        check_finite(weight)?;
        self.vertices.get_mut(&id).ok_or(GraphError::UnknownVertex(id))?.weight = weight;
        Ok(())
    }

    pub fn set_vertex_label(&mut self, id: VertexId, label: impl Into<String>) -> Result<(), GraphError> {
        self.vertices.get_mut(&id).ok_or(GraphError::UnknownVertex(id))?.label = Some(label.into());
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains_key(&v)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains_key(&e)
    }

    /// Vertex ids in ascending order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.keys().copied()
    }

    /// Edges in ascending id order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &Edge)> + '_ {
        self.edges.iter().map(|(id, e)| (*id, e))
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.get(&id)
    }

    pub fn vertex_weight(&self, id: VertexId) -> Option<f64> {
        self.vertices.get(&id).map(|d| d.weight)
    }

    pub fn edge_weight(&self, id: EdgeId) -> Option<f64> {
        self.edges.get(&id).map(|e| e.weight)
    }

    pub fn label(&self, id: VertexId) -> Option<&str> {
        self.vertices.get(&id).and_then(|d| d.label.as_deref())
    }

    /// Label if present, numeric id otherwise.
    pub fn display_name(&self, id: VertexId) -> String {
        self.label(id).map(str::to_owned).unwrap_or_else(|| id.to_string())
    }

    pub fn incident(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.vertices.get(&v).into_iter().flat_map(|d| d.incident.iter().copied())
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.vertices.get(&v).map_or(0, |d| d.incident.len())
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.incident(v).map(move |e| self.edges[&e].other(v))
    }

    pub fn edges_between(&self, a: VertexId, b: VertexId) -> Vec<EdgeId> {
        self.incident(a).filter(|e| self.edges[e].other(a) == b).collect()
    }

    pub fn has_parallel_edges(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges.values().any(|e| {
            let key = (e.ends.0.min(e.ends.1), e.ends.0.max(e.ends.1));
            !seen.insert(key)
        })
    }

    /// Smallest id that `add_vertex` would hand out next.
    pub fn next_vertex_id(&self) -> VertexId {
        VertexId(self.next_vertex)
    }

    pub fn next_edge_id(&self) -> EdgeId {
        EdgeId(self.next_edge)
    }

    /// Reserves id space so that freshly created ids never collide with ids
    /// of another graph (used when sub-instances are mapped back).
    pub fn reserve_ids(&mut self, vertex: VertexId, edge: EdgeId) {
        self.next_vertex = self.next_vertex.max(vertex.0);
        self.next_edge = self.next_edge.max(edge.0);
    }

    /// Subgraph induced by `keep`, with ids and labels preserved.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> WeightedGraph {
        let mut g = WeightedGraph {
            next_vertex: self.next_vertex,
            next_edge: self.next_edge,
            ..Default::default()
        };
        for &v in keep {
            if let Some(data) = self.vertices.get(&v) {
                g.vertices.insert(
                    v,
                    VertexData {
                        weight: data.weight,
                        label: data.label.clone(),
                        incident: BTreeSet::new(),
                    },
                );
            }
        }
        for (&id, e) in &self.edges {
            if keep.contains(&e.ends.0) && keep.contains(&e.ends.1) {
                g.edges.insert(id, *e);
                g.vertices.get_mut(&e.ends.0).unwrap().incident.insert(id);
                g.vertices.get_mut(&e.ends.1).unwrap().incident.insert(id);
            }
        }
        g
    }

    /// Checks that every element of `sub` exists and every selected edge has
    /// both endpoints selected.
    pub fn validate(&self, sub: &Subgraph) -> Result<(), GraphError> {
        for &v in &sub.vertices {
            if !self.contains_vertex(v) {
                return Err(GraphError::UnknownVertex(v));
            }
        }
        for &e in &sub.edges {
            let edge = self.edge(e).ok_or(GraphError::UnknownEdge(e))?;
            if !sub.vertices.contains(&edge.ends.0) || !sub.vertices.contains(&edge.ends.1) {
                return Err(GraphError::DanglingEdge { edge: e });
            }
        }
        Ok(())
    }

    /// Sum of the selected vertex and edge weights. Connectivity is not
    /// required. Elements missing from the graph contribute nothing.
    pub fn total_weight(&self, sub: &Subgraph) -> f64 {
        let vertices: f64 = sub.vertices.iter().filter_map(|&v| self.vertex_weight(v)).sum();
        let edges: f64 = sub.edges.iter().filter_map(|&e| self.edge_weight(e)).sum();
        vertices + edges
    }

    /// True iff every pair of selected vertices is joined by a path of
    /// selected edges. The empty subgraph counts as connected.
    pub fn is_connected_subgraph(&self, sub: &Subgraph) -> bool {
        let Some(&start) = sub.vertices.iter().next() else {
            return true;
        };
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for e in self.incident(v) {
                if !sub.edges.contains(&e) {
                    continue;
                }
                let u = self.edges[&e].other(v);
                if sub.vertices.contains(&u) && seen.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        seen.len() == sub.vertices.len()
    }

    /// The whole graph as a subgraph.
    pub fn full_subgraph(&self) -> Subgraph {
        Subgraph {
            vertices: self.vertices().collect(),
            edges: self.edges.keys().copied().collect(),
        }
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_subgraph(&self.full_subgraph())
    }

    /// Vertex sets of the connected components, ordered by smallest id.
    pub fn component_vertex_sets(&self) -> Vec<BTreeSet<VertexId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for start in self.vertices() {
            if seen.contains(&start) {
                continue;
            }
            seen.insert(start);
            let mut comp = BTreeSet::from([start]);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for u in self.neighbors(v) {
                    if seen.insert(u) {
                        comp.insert(u);
                        queue.push_back(u);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Maximal connected pieces of the graph, weights, labels and ids kept.
    pub fn connected_components(&self) -> Vec<WeightedGraph> {
        self.component_vertex_sets()
            .iter()
            .map(|set| self.induced(set))
            .collect()
    }

    /// Biconnected components and articulation points, computed with a single
    /// iterative depth-first traversal.
    pub fn biconnected_decomposition(&self) -> Result<BiconnectedDecomposition, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        let mut out = BiconnectedDecomposition::default();
        let Some(root) = self.vertices().next() else {
            return Ok(out);
        };

        struct Frame {
            vertex: VertexId,
            parent_edge: Option<EdgeId>,
            incident: Vec<EdgeId>,
            next: usize,
        }

        let mut disc: BTreeMap<VertexId, usize> = BTreeMap::new();
        let mut low: BTreeMap<VertexId, usize> = BTreeMap::new();
        let mut edge_stack: Vec<EdgeId> = Vec::new();
        let mut root_children = 0usize;
        let mut time = 0usize;

        disc.insert(root, time);
        low.insert(root, time);
        time += 1;
        let mut stack = vec![Frame {
            vertex: root,
            parent_edge: None,
            incident: self.incident(root).collect(),
            next: 0,
        }];

        while let Some(frame) = stack.last_mut() {
            let v = frame.vertex;
            if frame.next < frame.incident.len() {
                let e = frame.incident[frame.next];
                frame.next += 1;
                if Some(e) == frame.parent_edge {
                    continue;
                }
                let u = self.edges[&e].other(v);
                match disc.get(&u).copied() {
                    None => {
                        edge_stack.push(e);
                        disc.insert(u, time);
                        low.insert(u, time);
                        time += 1;
                        stack.push(Frame {
                            vertex: u,
                            parent_edge: Some(e),
                            incident: self.incident(u).collect(),
                            next: 0,
                        });
                    }
                    Some(du) if du < disc[&v] => {
                        edge_stack.push(e);
                        let lv = low.get_mut(&v).unwrap();
                        *lv = (*lv).min(du);
                    }
                    Some(_) => {}
                }
                continue;
            }

            let finished = stack.pop().unwrap();
            let Some(parent) = stack.last() else {
                break;
            };
            let p = parent.vertex;
            let lv = low[&finished.vertex];
            let lp = low.get_mut(&p).unwrap();
            *lp = (*lp).min(lv);
            if lv >= disc[&p] {
                let split = finished.parent_edge.expect("non-root frame has a parent edge");
                let mut block = Block::default();
                while let Some(e) = edge_stack.pop() {
                    let edge = self.edges[&e];
                    block.edges.insert(e);
                    block.vertices.insert(edge.ends.0);
                    block.vertices.insert(edge.ends.1);
                    if e == split {
                        break;
                    }
                }
                out.blocks.push(block);
                if p == root {
                    root_children += 1;
                } else {
                    out.cut_vertices.insert(p);
                }
            }
        }
        if root_children >= 2 {
            out.cut_vertices.insert(root);
        }
        Ok(out)
    }
}

/// One biconnected component.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Block {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiconnectedDecomposition {
    pub blocks: Vec<Block>,
    pub cut_vertices: BTreeSet<VertexId>,
}

/// A vertex set and an edge set over some parent graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subgraph {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
}

impl Subgraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = EdgeId>,
    ) -> Self {
        Subgraph {
            vertices: vertices.into_iter().collect(),
            edges: edges.into_iter().collect(),
        }
    }

    pub fn single(v: VertexId) -> Self {
        Self::from_parts([v], [])
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty()
    }

    pub fn extend(&mut self, other: &Subgraph) {
        self.vertices.extend(other.vertices.iter().copied());
        self.edges.extend(other.edges.iter().copied());
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("root {0} is not a vertex of the graph")]
pub struct UnknownRoot(pub VertexId);

/// A graph together with an optional mandatory root vertex.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Instance {
    pub graph: WeightedGraph,
    pub root: Option<VertexId>,
}

impl Instance {
    pub fn unrooted(graph: WeightedGraph) -> Self {
        Instance { graph, root: None }
    }

    pub fn rooted(graph: WeightedGraph, root: VertexId) -> Result<Self, UnknownRoot> {
        if !graph.contains_vertex(root) {
            return Err(UnknownRoot(root));
        }
        Ok(Instance {
            graph,
            root: Some(root),
        })
    }

    pub fn is_rooted(&self) -> bool {
        self.root.is_some()
    }
}
