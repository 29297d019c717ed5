//! Build a small graph in code and solve it, unrooted and rooted.
//!
//! ```text
//! cargo run --example solve_instance
//! ```

use gmwcs::graph::{Instance, WeightedGraph};
use gmwcs::io::format_result;
use gmwcs::solver::{solve, SolveConfig};

fn main() {
    let mut g = WeightedGraph::new();
    let names = ["a", "b", "c", "d", "e", "f"];
    let weights = [4.0, -2.0, 3.0, -6.0, 5.0, -1.0];
    let v: Vec<_> = names
        .iter()
        .zip(weights)
        .map(|(name, w)| g.add_labeled_vertex(*name, w).unwrap())
        .collect();
    for (x, y, w) in [(0, 1, -1.0), (1, 2, 0.5), (2, 3, -1.0), (3, 4, -0.5), (4, 5, 2.0), (5, 0, -3.0)] {
        g.add_edge(v[x], v[y], w).unwrap();
    }

    let config = SolveConfig::default();
    let unrooted = solve(&Instance::unrooted(g.clone()), &config).unwrap();
    println!("-- unrooted --\n{}", format_result(&g, &unrooted));

    let rooted = solve(&Instance::rooted(g.clone(), v[3]).unwrap(), &config).unwrap();
    println!("-- rooted at d --\n{}", format_result(&g, &rooted));
}
