//! Compare the solver against brute force on seeded random instances.
//!
//! ```text
//! cargo run --release --example oracle_check -- 200
//! ```

use gmwcs::generate::{generate, GenerateOptions};
use gmwcs::graph::Instance;
use gmwcs::oracle::brute_force;
use gmwcs::solver::{solve, SolveConfig};

fn main() {
    let count: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    let mut mismatches = 0;
    for seed in 0..count {
        let nodes = 4 + (seed % 9) as usize;
        let g = generate(&GenerateOptions {
            nodes,
            density: 0.4,
            weight_range: (-5.0, 5.0),
            seed,
        })
        .unwrap();
        let instance = if seed % 2 == 0 {
            Instance::unrooted(g)
        } else {
            let root = g.vertices().nth(seed as usize % nodes).unwrap();
            Instance::rooted(g, root).unwrap()
        };
        let got = solve(&instance, &SolveConfig::default()).unwrap();
        let want = brute_force(&instance).unwrap();
        if (got.weight - want.weight).abs() >= 1e-9 {
            mismatches += 1;
            println!("seed {seed}: solver {} vs brute force {}", got.weight, want.weight);
        }
    }
    println!("{count} instances, {mismatches} mismatches");
}
