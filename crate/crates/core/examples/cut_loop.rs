//! The cutting-plane engine with the built-in exhaustive backend, and the
//! same engine used through the main solve entry point.
//!
//! ```text
//! cargo run --example cut_loop
//! ```

use gmwcs::graph::{Instance, WeightedGraph};
use gmwcs::solver::{backend_cut_loop, solve_with_backend, Engine, ExhaustiveBackend, SolveConfig};

fn main() {
    let mut g = WeightedGraph::new();
    let v: Vec<_> = [0.0, -1.0, 4.0, 2.0, -3.0]
        .iter()
        .map(|&w| g.add_vertex(w).unwrap())
        .collect();
    for (a, b, w) in [(0, 1, -1.0), (1, 2, -0.5), (2, 3, -1.0), (3, 4, -1.0), (4, 0, -0.5), (0, 3, -6.0)] {
        g.add_edge(v[a], v[b], w).unwrap();
    }

    let rooted = Instance::rooted(g.clone(), v[0]).unwrap();
    let report = backend_cut_loop(&rooted, &mut ExhaustiveBackend, &SolveConfig::default()).unwrap();
    println!(
        "rooted: weight {} after {} round(s), {} cut(s), bounds {:?}",
        report.result.weight, report.rounds, report.cuts_added, report.bounds
    );

    let config = SolveConfig {
        engine: Engine::BackendCutLoop,
        ..SolveConfig::default()
    };
    let result = solve_with_backend(&Instance::unrooted(g), &config, &mut ExhaustiveBackend).unwrap();
    println!("unrooted: weight {} with {:?}", result.weight, result.solution.vertices);
}
