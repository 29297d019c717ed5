//! Max-flow based separation of root cuts at a fractional point.
//!
//! ```text
//! cargo run --example separation
//! ```

use std::collections::BTreeMap;

use gmwcs::graph::WeightedGraph;
use gmwcs::separation::{find_violated_cuts, FlowNetwork, DEFAULT_TOLERANCE};

fn main() {
    // Plain max flow.
    let mut net = FlowNetwork::new(4, 0, 3);
    net.add_arc(0, 1, 3.0);
    net.add_arc(0, 2, 2.0);
    net.add_arc(1, 2, 1.0);
    net.add_arc(1, 3, 2.0);
    net.add_arc(2, 3, 3.0);
    let flow = net.max_flow();
    println!("max flow {} with min cut arcs {:?}", flow.value, flow.cut);

    // A root r with a profitable vertex b reached through half-selected edges.
    let mut g = WeightedGraph::new();
    let r = g.add_vertex(0.0).unwrap();
    let a = g.add_vertex(-1.0).unwrap();
    let b = g.add_vertex(5.0).unwrap();
    let e1 = g.add_edge(r, a, -1.0).unwrap();
    let e2 = g.add_edge(a, b, -1.0).unwrap();
    let y = BTreeMap::from([(r, 1.0), (a, 0.5), (b, 1.0)]);
    let w = BTreeMap::from([(e1, 0.5), (e2, 0.5)]);
    for cut in find_violated_cuts(&g, r, &w, &y, DEFAULT_TOLERANCE) {
        println!(
            "y_{} <= sum of w over {:?} is violated by {}",
            cut.target,
            cut.edges,
            cut.violation(&y, &w)
        );
    }
}
