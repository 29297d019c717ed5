//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use std::collections::BTreeSet;

use gmwcs::generate::{generate, GenerateOptions};
use gmwcs::graph::{Instance, Subgraph, VertexId, WeightedGraph};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const TOL: f64 = 1e-9;

/// Connected graph with weights on a 0.001 grid in `[-5, 5]`.
pub fn connected(n: usize, density: f64, seed: u64) -> WeightedGraph {
    generate(&GenerateOptions {
        nodes: n,
        density,
        weight_range: (-5.0, 5.0),
        seed,
    })
    .unwrap()
}

/// Connected graph with integer weights in `[-5, 5]`, so sums are exact.
pub fn connected_integral(n: usize, density: f64, seed: u64) -> WeightedGraph {
    let mut g = connected(n, density, seed);
    let vs: Vec<VertexId> = g.vertices().collect();
    for v in vs {
        let w = g.vertex_weight(v).unwrap().round();
        g.set_vertex_weight(v, w).unwrap();
    }
    let mut rebuilt = WeightedGraph::new();
    for v in g.vertices() {
        rebuilt.add_vertex_with_id(v, g.vertex_weight(v).unwrap()).unwrap();
        if let Some(l) = g.label(v) {
            rebuilt.set_vertex_label(v, l).unwrap();
        }
    }
    for (id, e) in g.edges() {
        rebuilt.add_edge_with_id(id, e.ends.0, e.ends.1, e.weight.round()).unwrap();
    }
    rebuilt
}

/// Unrooted, or rooted at a vertex picked by `rng`.
pub fn maybe_rooted(g: WeightedGraph, rng: &mut ChaCha8Rng, rooted: bool) -> Instance {
    if rooted {
        let vs: Vec<VertexId> = g.vertices().collect();
        let r = vs[rng.gen_range(0..vs.len())];
        Instance::rooted(g, r).unwrap()
    } else {
        Instance::unrooted(g)
    }
}

/// Every connected subgraph (all edge subsets), empty excluded. Small
/// graphs only.
pub fn connected_subgraphs(g: &WeightedGraph) -> Vec<Subgraph> {
    let vs: Vec<VertexId> = g.vertices().collect();
    let es: Vec<_> = g.edges().map(|(id, e)| (id, e.ends)).collect();
    let mut out = Vec::new();
    for vmask in 1u32..(1 << vs.len()) {
        let set: BTreeSet<VertexId> = (0..vs.len()).filter(|i| vmask >> i & 1 == 1).map(|i| vs[i]).collect();
        let inner: Vec<_> = es
            .iter()
            .filter(|(_, (a, b))| set.contains(a) && set.contains(b))
            .map(|(id, _)| *id)
            .collect();
        for emask in 0u32..(1 << inner.len()) {
            let sub = Subgraph::from_parts(
                set.iter().copied(),
                (0..inner.len()).filter(|i| emask >> i & 1 == 1).map(|i| inner[i]),
            );
            if g.is_connected_subgraph(&sub) {
                out.push(sub);
            }
        }
    }
    out
}

/// Whether `sub` is a feasible answer for `instance`.
pub fn feasible(instance: &Instance, sub: &Subgraph) -> bool {
    let g = &instance.graph;
    if sub.vertices.is_empty() {
        return sub.edges.is_empty() && instance.root.is_none();
    }
    g.validate(sub).is_ok()
        && g.is_connected_subgraph(sub)
        && instance.root.is_none_or(|r| sub.vertices.contains(&r))
}
