//! Apply the reduction rules, inspect the trace and lift a solution of the
//! reduced graph back to the original one.
//!
//! ```text
//! cargo run --example preprocessing
//! ```

use gmwcs::graph::{Instance, WeightedGraph};
use gmwcs::reductions::{preprocess, summary};
use gmwcs::solver::{solve, SolveConfig};

fn main() {
    // A positive edge, a negative chain and a parallel pair.
    let mut g = WeightedGraph::new();
    let v: Vec<_> = [2.0, 1.0, -3.0, -1.0, 6.0, 1.0]
        .iter()
        .map(|&w| g.add_vertex(w).unwrap())
        .collect();
    g.add_edge(v[0], v[1], 1.5).unwrap();
    g.add_edge(v[1], v[2], -1.0).unwrap();
    g.add_edge(v[2], v[3], -2.0).unwrap();
    g.add_edge(v[3], v[4], -0.5).unwrap();
    g.add_edge(v[4], v[5], -1.0).unwrap();
    g.add_edge(v[4], v[5], -0.25).unwrap();
    let instance = Instance::unrooted(g);

    let (reduced, trace) = preprocess(&instance);
    println!(
        "{} vertices / {} edges  ->  {} vertices / {} edges",
        instance.graph.vertex_count(),
        instance.graph.edge_count(),
        reduced.graph.vertex_count(),
        reduced.graph.edge_count()
    );
    for (rule, count) in summary(&trace) {
        println!("  {rule}: {count}");
    }
    for record in trace.records() {
        println!("  {record:?}");
    }

    let config = SolveConfig {
        preprocess: false,
        ..SolveConfig::default()
    };
    let on_reduced = solve(&reduced, &config).unwrap();
    let lifted = trace.lift(&reduced.graph, &on_reduced.solution).unwrap();
    println!(
        "reduced optimum {} ; lifted weight {} ; connected {}",
        on_reduced.weight,
        instance.graph.total_weight(&lifted),
        instance.graph.is_connected_subgraph(&lifted)
    );
}
