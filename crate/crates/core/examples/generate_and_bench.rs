//! Generate a small suite of instances into a temporary directory and
//! benchmark it.
//!
//! ```text
//! cargo run --release --example generate_and_bench
//! ```

use gmwcs::bench::{run_bench, BenchOptions};
use gmwcs::generate::{generate, GenerateOptions};
use gmwcs::io::{write_instance, InstanceFiles};

fn main() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..5 {
        let g = generate(&GenerateOptions {
            nodes: 40,
            density: 0.1,
            weight_range: (-5.0, 5.0),
            seed,
        })
        .unwrap();
        write_instance(&g, &InstanceFiles::with_prefix(dir.path().join(format!("inst{seed}")))).unwrap();
    }
    let report = run_bench(
        dir.path(),
        &BenchOptions {
            repeats: 3,
            ..BenchOptions::default()
        },
    )
    .unwrap();
    print!("{}", report.to_tsv());
}
