//! Mixed-integer model of the connected subgraph problem.
//!
//! Connectivity is certified by a rooted arborescence over the selected
//! subgraph. Variables, per vertex `v`, edge `e` and arc `(v, u)`:
//!
//! | name      | meaning                                   | domain     |
//! |-----------|-------------------------------------------|------------|
//! | `y_v`     | `v` is selected                           | binary     |
//! | `w_e`     | `e` is selected                           | binary     |
//! | `x_v_u`   | arc `v -> u` belongs to the arborescence  | binary     |
//! | `r_v`     | `v` is the arborescence root              | binary     |
//! | `d_v`     | number of vertices on the root-`v` path   | `[1, n]`   |
//!
//! The products `d_v r_v = r_v` and `d_u x_vu = (d_v + 1) x_vu` are written
//! in their big-M linear form `d_v + n r_v <= n`,
//! `n + d_u - d_v >= (n + 1) x_vu` and `n + d_v - d_u >= (n - 1) x_vu`.
//! Optional families restrict the admissible arborescences without removing
//! any subgraph: the root must be the heaviest selected vertex, and adjacent
//! selected vertices must have depths differing by at most one (BFS trees).

mod lp;

pub use lp::export_lp;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::graph::{EdgeId, Instance, Subgraph, VertexId, WeightedGraph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormulationError {
    #[error("the graph has parallel edges; preprocess it first")]
    ParallelEdges,
    #[error("the graph is not connected")]
    Disconnected,
    #[error("variable {0} has no value")]
    Incomplete(String),
    #[error("constraint {0} references an unknown variable")]
    UnknownVariable(String),
    #[error("constraint {0} has a non-finite coefficient")]
    NonFinite(String),
    #[error("subgraph is empty")]
    EmptySubgraph,
    #[error("subgraph is not a valid connected subgraph of the model graph")]
    InvalidSubgraph,
    #[error("subgraph does not contain the root {0}")]
    MissingRoot(VertexId),
    #[error("the model does not admit the empty selection")]
    EmptyNotAllowed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKind {
    Vertex(VertexId),
    Edge(EdgeId),
    Arc(VertexId, VertexId),
    Root(VertexId),
    Depth(VertexId),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Domain {
    Binary,
    Continuous { lower: f64, upper: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct MipVariable {
    pub kind: VarKind,
    pub domain: Domain,
}

impl MipVariable {
    pub fn name(&self) -> String {
        match self.kind {
            VarKind::Vertex(v) => format!("y_{v}"),
            VarKind::Edge(e) => format!("w_{e}"),
            VarKind::Arc(a, b) => format!("x_{a}_{b}"),
            VarKind::Root(v) => format!("r_{v}"),
            VarKind::Depth(v) => format!("d_{v}"),
        }
    }

    pub fn bounds(&self) -> (f64, f64) {
        match self.domain {
            Domain::Binary => (0.0, 1.0),
            Domain::Continuous { lower, upper } => (lower, upper),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarIndex(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        })
    }
}

/// Which constraint family of the model a row belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// `w_e <= y_v` for both endpoints.
    EdgeEndpoint,
    /// `sum r_v = 1` (or `<= 1` when the empty selection is admitted).
    OneRoot,
    /// `r_root = 1` for rooted instances.
    FixedRoot,
    /// `sum_{(u,v)} x_uv + r_v = y_v`.
    InDegree,
    /// `x_vu + x_uv <= w_e`.
    ArcPair,
    /// `d_v + (n - 1) r_v <= n`.
    RootDepth,
    /// `n + d_u - d_v >= (n + 1) x_vu`.
    DepthStep,
    /// `n + d_v - d_u >= (n - 1) x_vu`.
    DepthCap,
    /// `sum_{v < u} r_v <= 1 - y_u`.
    RootOrder,
    /// `d_v - d_u <= n - (n - 1) w_e`.
    BfsForward,
    /// `d_u - d_v <= n - (n - 1) w_e`.
    BfsBackward,
    /// `y_v <= sum_{e in C} w_e` added by separation.
    Cut,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearConstraint {
    pub name: String,
    pub family: Family,
    pub terms: Vec<(VarIndex, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl LinearConstraint {
    pub fn activity(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|(i, c)| c * values[i.0]).sum()
    }

    pub fn is_satisfied_by(&self, activity: f64) -> bool {
        match self.sense {
            Sense::Le => activity <= self.rhs,
            Sense::Eq => activity == self.rhs,
            Sense::Ge => activity >= self.rhs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelOptions {
    /// Root-order rule for unrooted instances.
    pub symmetry_breaking: bool,
    /// Restrict arborescences to BFS trees.
    pub bfs_restriction: bool,
    /// Admit the empty selection (unrooted only): the single-root equation is
    /// relaxed to `sum r_v <= 1`.
    pub allow_empty: bool,
}

impl Default for ModelOptions {
    fn default() -> Self {
        ModelOptions {
            symmetry_breaking: true,
            bfs_restriction: true,
            allow_empty: true,
        }
    }
}

/// `a` precedes `b`: lighter, or equally heavy with a smaller id.
pub fn precedes(g: &WeightedGraph, a: VertexId, b: VertexId) -> bool {
    let (wa, wb) = (g.vertex_weight(a).unwrap(), g.vertex_weight(b).unwrap());
    wa < wb || (wa == wb && a < b)
}

#[derive(Clone, Debug)]
pub struct MipModel {
    graph: WeightedGraph,
    root: Option<VertexId>,
    options: ModelOptions,
    variables: Vec<MipVariable>,
    index: HashMap<VarKind, VarIndex>,
    constraints: Vec<LinearConstraint>,
    objective: Vec<(VarIndex, f64)>,
}

impl MipModel {
    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn root(&self) -> Option<VertexId> {
        self.root
    }

    pub fn options(&self) -> ModelOptions {
        self.options
    }

    /// Whether the empty selection is feasible.
    pub fn admits_empty(&self) -> bool {
        self.root.is_none() && self.options.allow_empty
    }

    pub fn n(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn variables(&self) -> &[MipVariable] {
        &self.variables
    }

    pub fn variable(&self, kind: VarKind) -> Option<VarIndex> {
        self.index.get(&kind).copied()
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &[(VarIndex, f64)] {
        &self.objective
    }

    pub fn count(&self, family: Family) -> usize {
        self.constraints.iter().filter(|c| c.family == family).count()
    }

    pub fn add_constraint(&mut self, c: LinearConstraint) -> Result<(), FormulationError> {
        for &(i, coef) in &c.terms {
            if i.0 >= self.variables.len() {
                return Err(FormulationError::UnknownVariable(c.name));
            }
            if !coef.is_finite() {
                return Err(FormulationError::NonFinite(c.name));
            }
        }
        if !c.rhs.is_finite() {
            return Err(FormulationError::NonFinite(c.name));
        }
        self.constraints.push(c);
        Ok(())
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.iter().map(|(i, c)| c * values[i.0]).sum()
    }

    fn push_var(&mut self, kind: VarKind, domain: Domain) {
        let idx = VarIndex(self.variables.len());
        self.variables.push(MipVariable { kind, domain });
        self.index.insert(kind, idx);
    }

    fn v(&self, kind: VarKind) -> VarIndex {
        self.index[&kind]
    }

    fn push(&mut self, name: String, family: Family, mut terms: Vec<(VarIndex, f64)>, sense: Sense, rhs: f64) {
        terms.retain(|&(_, a)| a != 0.0);
        self.constraints.push(LinearConstraint {
            name,
            family,
            terms,
            sense,
            rhs,
        });
    }

    /// Decodes the selected subgraph from 0/1 values of `y` and `w`
    /// (values are rounded to the nearest integer).
    pub fn decode_subgraph(&self, values: &[f64]) -> Subgraph {
        let mut sub = Subgraph::new();
        for (i, var) in self.variables.iter().enumerate() {
            let on = values[i].round() == 1.0;
            match var.kind {
                VarKind::Vertex(v) if on => {
                    sub.vertices.insert(v);
                }
                VarKind::Edge(e) if on => {
                    sub.edges.insert(e);
                }
                _ => {}
            }
        }
        sub
    }
}

/// Builds the model for a simple connected instance.
pub fn build_model(instance: &Instance, options: ModelOptions) -> Result<MipModel, FormulationError> {
    let g = &instance.graph;
    if g.has_parallel_edges() {
        return Err(FormulationError::ParallelEdges);
    }
    if !g.is_connected() {
        return Err(FormulationError::Disconnected);
    }
    let n = g.vertex_count() as f64;
    let mut m = MipModel {
        graph: g.clone(),
        root: instance.root,
        options,
        variables: Vec::new(),
        index: HashMap::new(),
        constraints: Vec::new(),
        objective: Vec::new(),
    };
    let vertices: Vec<VertexId> = g.vertices().collect();
    let edges: Vec<(EdgeId, VertexId, VertexId)> = g.edges().map(|(id, e)| (id, e.ends.0, e.ends.1)).collect();

    for &v in &vertices {
        m.push_var(VarKind::Vertex(v), Domain::Binary);
    }
    for &(e, _, _) in &edges {
        m.push_var(VarKind::Edge(e), Domain::Binary);
    }
    for &(_, a, b) in &edges {
        m.push_var(VarKind::Arc(a, b), Domain::Binary);
        m.push_var(VarKind::Arc(b, a), Domain::Binary);
    }
    for &v in &vertices {
        m.push_var(VarKind::Root(v), Domain::Binary);
    }
    for &v in &vertices {
        m.push_var(VarKind::Depth(v), Domain::Continuous { lower: 1.0, upper: n });
    }

    for &v in &vertices {
        m.objective.push((m.v(VarKind::Vertex(v)), g.vertex_weight(v).unwrap()));
    }
    for &(e, _, _) in &edges {
        m.objective.push((m.v(VarKind::Edge(e)), g.edge_weight(e).unwrap()));
    }

    for &(e, a, b) in &edges {
        for end in [a, b] {
            let terms = vec![(m.v(VarKind::Edge(e)), 1.0), (m.v(VarKind::Vertex(end)), -1.0)];
            m.push(format!("edge_e{e}_v{end}"), Family::EdgeEndpoint, terms, Sense::Le, 0.0);
        }
    }

    let roots: Vec<_> = vertices.iter().map(|&v| (m.v(VarKind::Root(v)), 1.0)).collect();
    let sense = if m.admits_empty() { Sense::Le } else { Sense::Eq };
    m.push("one_root".into(), Family::OneRoot, roots, sense, 1.0);
    if let Some(r) = instance.root {
        let terms = vec![(m.v(VarKind::Root(r)), 1.0)];
        m.push(format!("fix_root_v{r}"), Family::FixedRoot, terms, Sense::Eq, 1.0);
    }

    for &v in &vertices {
        let mut terms: Vec<(VarIndex, f64)> = g
            .incident(v)
            .map(|e| m.v(VarKind::Arc(g.edge(e).unwrap().other(v), v)))
            .map(|i| (i, 1.0))
            .collect();
        terms.push((m.v(VarKind::Root(v)), 1.0));
        terms.push((m.v(VarKind::Vertex(v)), -1.0));
        m.push(format!("in_degree_v{v}"), Family::InDegree, terms, Sense::Eq, 0.0);
    }

    for &(e, a, b) in &edges {
        let terms = vec![
            (m.v(VarKind::Arc(a, b)), 1.0),
            (m.v(VarKind::Arc(b, a)), 1.0),
            (m.v(VarKind::Edge(e)), -1.0),
        ];
        m.push(format!("arc_pair_e{e}"), Family::ArcPair, terms, Sense::Le, 0.0);
    }

    for &v in &vertices {
        // A root sits at depth 1, so the coefficient is n - 1.
        let terms = vec![(m.v(VarKind::Depth(v)), 1.0), (m.v(VarKind::Root(v)), n - 1.0)];
        m.push(format!("root_depth_v{v}"), Family::RootDepth, terms, Sense::Le, n);
    }

    for &(_, a, b) in &edges {
        for (from, to) in [(a, b), (b, a)] {
            let (dv, du, x) = (
                m.v(VarKind::Depth(from)),
                m.v(VarKind::Depth(to)),
                m.v(VarKind::Arc(from, to)),
            );
            m.push(
                format!("depth_step_{from}_{to}"),
                Family::DepthStep,
                vec![(du, 1.0), (dv, -1.0), (x, -(n + 1.0))],
                Sense::Ge,
                -n,
            );
            m.push(
                format!("depth_cap_{from}_{to}"),
                Family::DepthCap,
                vec![(dv, 1.0), (du, -1.0), (x, -(n - 1.0))],
                Sense::Ge,
                -n,
            );
        }
    }

    if options.symmetry_breaking && instance.root.is_none() {
        for &u in &vertices {
            let mut terms: Vec<(VarIndex, f64)> = vertices
                .iter()
                .filter(|&&v| precedes(g, v, u))
                .map(|&v| (m.v(VarKind::Root(v)), 1.0))
                .collect();
            terms.push((m.v(VarKind::Vertex(u)), 1.0));
            m.push(format!("root_order_v{u}"), Family::RootOrder, terms, Sense::Le, 1.0);
        }
    }

    if options.bfs_restriction {
        for &(e, a, b) in &edges {
            let (da, db, w) = (m.v(VarKind::Depth(a)), m.v(VarKind::Depth(b)), m.v(VarKind::Edge(e)));
            m.push(
                format!("bfs_fwd_e{e}"),
                Family::BfsForward,
                vec![(da, 1.0), (db, -1.0), (w, n - 1.0)],
                Sense::Le,
                n,
            );
            m.push(
                format!("bfs_back_e{e}"),
                Family::BfsBackward,
                vec![(db, 1.0), (da, -1.0), (w, n - 1.0)],
                Sense::Le,
                n,
            );
        }
    }

    Ok(m)
}

/// Complete variable valuation of a model.
#[derive(Clone, Debug, PartialEq)]
pub struct Assignment {
    values: Vec<Option<f64>>,
}

impl Assignment {
    /// Assignment with no variable valued.
    pub fn unset(model: &MipModel) -> Self {
        Assignment {
            values: vec![None; model.variables().len()],
        }
    }

    pub fn from_values(values: Vec<f64>) -> Self {
        Assignment {
            values: values.into_iter().map(Some).collect(),
        }
    }

    pub fn set(&mut self, i: VarIndex, value: f64) {
        self.values[i.0] = Some(value);
    }

    pub fn get(&self, i: VarIndex) -> Option<f64> {
        self.values.get(i.0).copied().flatten()
    }

    /// Dense values, or the name of the first unvalued variable.
    pub fn dense(&self, model: &MipModel) -> Result<Vec<f64>, FormulationError> {
        if self.values.len() != model.variables().len() {
            return Err(FormulationError::Incomplete(
                model
                    .variables()
                    .get(self.values.len())
                    .map(|v| v.name())
                    .unwrap_or_else(|| "<extra>".into()),
            ));
        }
        self.values
            .iter()
            .zip(model.variables())
            .map(|(v, var)| v.ok_or_else(|| FormulationError::Incomplete(var.name())))
            .collect()
    }
}

/// Assignment certifying a connected subgraph: a BFS tree rooted at the
/// model root, or at the heaviest selected vertex for unrooted models.
/// Parents are the smallest-id discoverers; unselected depths are `n`.
pub fn encode_subgraph(model: &MipModel, sub: &Subgraph) -> Result<Assignment, FormulationError> {
    let g = model.graph();
    if sub.vertices.is_empty() {
        return Err(FormulationError::EmptySubgraph);
    }
    if g.validate(sub).is_err() || !g.is_connected_subgraph(sub) {
        return Err(FormulationError::InvalidSubgraph);
    }
    let root = match model.root() {
        Some(r) if !sub.vertices.contains(&r) => return Err(FormulationError::MissingRoot(r)),
        Some(r) => r,
        None => *sub
            .vertices
            .iter()
            .reduce(|best, v| if precedes(g, *best, *v) { v } else { best })
            .unwrap(),
    };

    let mut depth: BTreeMap<VertexId, usize> = BTreeMap::from([(root, 1)]);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for e in g.incident(v) {
            if !sub.edges.contains(&e) {
                continue;
            }
            let u = g.edge(e).unwrap().other(v);
            if !depth.contains_key(&u) {
                depth.insert(u, depth[&v] + 1);
                queue.push_back(u);
            }
        }
    }

    let n = g.vertex_count() as f64;
    let mut values = vec![0.0; model.variables().len()];
    for (i, var) in model.variables().iter().enumerate() {
        values[i] = match var.kind {
            VarKind::Vertex(v) => sub.vertices.contains(&v) as u8 as f64,
            VarKind::Edge(e) => sub.edges.contains(&e) as u8 as f64,
            VarKind::Root(v) => (v == root) as u8 as f64,
            VarKind::Depth(v) => depth.get(&v).map_or(n, |&d| d as f64),
            VarKind::Arc(..) => 0.0,
        };
    }
    for (&v, &dv) in &depth {
        if v == root {
            continue;
        }
        let parent = g
            .incident(v)
            .filter(|e| sub.edges.contains(e))
            .map(|e| g.edge(e).unwrap().other(v))
            .filter(|u| depth.get(u) == Some(&(dv - 1)))
            .min()
            .expect("BFS child has a parent");
        values[model.v(VarKind::Arc(parent, v)).0] = 1.0;
    }
    Ok(Assignment::from_values(values))
}

/// The all-zero selection (depths at `n`), feasible when the model admits
/// the empty subgraph.
pub fn encode_empty(model: &MipModel) -> Result<Assignment, FormulationError> {
    if !model.admits_empty() {
        return Err(FormulationError::EmptyNotAllowed);
    }
    let n = model.n() as f64;
    let values = model
        .variables()
        .iter()
        .map(|var| match var.kind {
            VarKind::Depth(_) => n,
            _ => 0.0,
        })
        .collect();
    Ok(Assignment::from_values(values))
}

/// Names of every violated constraint (exact arithmetic on the given
/// values). Binary variables must be exactly 0 or 1 and continuous ones
/// within their bounds; offenders are reported as `domain_<var>`.
pub fn check_assignment(model: &MipModel, a: &Assignment) -> Result<Vec<String>, FormulationError> {
    let values = a.dense(model)?;
    let mut violated = Vec::new();
    for (var, &value) in model.variables().iter().zip(&values) {
        let ok = match var.domain {
            Domain::Binary => value == 0.0 || value == 1.0,
            Domain::Continuous { lower, upper } => lower <= value && value <= upper,
        };
        if !ok {
            violated.push(format!("domain_{}", var.name()));
        }
    }
    for c in model.constraints() {
        if !c.is_satisfied_by(c.activity(&values)) {
            violated.push(c.name.clone());
        }
    }
    Ok(violated)
}
