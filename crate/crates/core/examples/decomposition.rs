//! Split a graph at the cut vertices of its largest biconnected component
//! and solve it piecewise.
//!
//! ```text
//! cargo run --example decomposition
//! ```

use gmwcs::decomposition::{plan, solve_decomposed_with, DecompositionError};
use gmwcs::graph::{Instance, WeightedGraph};
use gmwcs::solver::{branch_and_bound, SolveConfig};

fn main() {
    // A 4-cycle core with a path hanging off one vertex and a triangle off another.
    let mut g = WeightedGraph::new();
    let v: Vec<_> = [1.0, -2.0, 3.0, -1.0, -1.0, 6.0, 2.0, -4.0, 5.0]
        .iter()
        .map(|&w| g.add_vertex(w).unwrap())
        .collect();
    for (a, b, w) in [
        (0, 1, -1.0),
        (1, 2, -1.0),
        (2, 3, -1.0),
        (3, 0, -1.0),
        (0, 4, -1.0),
        (4, 5, -2.0),
        (2, 6, -0.5),
        (6, 7, -1.0),
        (7, 8, -1.0),
        (8, 6, -3.0),
    ] {
        g.add_edge(v[a], v[b], w).unwrap();
    }
    let instance = Instance::unrooted(g);

    let p = plan(&instance).unwrap().expect("graph has cut vertices");
    println!("core {:?}", p.core);
    println!("cut vertices {:?}", p.cut_vertices);
    for (c, branch) in &p.branches {
        println!("  branch at {c}: {:?}", branch.vertices);
    }

    let config = SolveConfig::default();
    let result = solve_decomposed_with(&instance, true, |sub: &Instance, allow_empty| {
        let config = SolveConfig {
            allow_empty,
            ..config.clone()
        };
        Ok::<_, DecompositionError>(branch_and_bound(sub, &config).unwrap().0)
    })
    .unwrap();
    println!("weight {} with {:?}", result.weight, result.solution.vertices);
}
