//! Seeded random instances.
//!
//! Every vertex pair is joined with probability `density`; if the result is
//! disconnected, the components are chained together by random edges
//! between uniformly chosen vertices. Weights are uniform in the given range
//! and rounded to three decimals so the files stay readable.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{VertexId, WeightedGraph};

#[derive(Clone, Debug, PartialEq)]
pub struct GenerateOptions {
    pub nodes: usize,
    pub density: f64,
    pub weight_range: (f64, f64),
    pub seed: u64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenerateError {
    #[error("need at least one node")]
    NoNodes,
    #[error("density {0} is outside [0, 1]")]
    Density(f64),
    #[error("weight range {0}..{1} is empty or not finite")]
    WeightRange(f64, f64),
}

fn draw(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        return lo;
    }
    let x = rng.gen_range(lo..=hi);
    ((x * 1000.0).round() / 1000.0).clamp(lo, hi)
}

pub fn generate(options: &GenerateOptions) -> Result<WeightedGraph, GenerateError> {
    let (lo, hi) = options.weight_range;
    if options.nodes == 0 {
        return Err(GenerateError::NoNodes);
    }
    if !(0.0..=1.0).contains(&options.density) {
        return Err(GenerateError::Density(options.density));
    }
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(GenerateError::WeightRange(lo, hi));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut g = WeightedGraph::new();
    let vs: Vec<VertexId> = (0..options.nodes)
        .map(|i| {
            let w = draw(&mut rng, options.weight_range);
            g.add_labeled_vertex(format!("n{i}"), w).unwrap()
        })
        .collect();
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            if rng.gen_bool(options.density) {
                let w = draw(&mut rng, options.weight_range);
                g.add_edge(vs[i], vs[j], w).unwrap();
            }
        }
    }

    let mut comps: Vec<Vec<VertexId>> = g
        .component_vertex_sets()
        .into_iter()
        .map(|c| c.into_iter().collect())
        .collect();
    comps.shuffle(&mut rng);
    for pair in comps.windows(2) {
        let a = *pair[0].choose(&mut rng).unwrap();
        let b = *pair[1].choose(&mut rng).unwrap();
        let w = draw(&mut rng, options.weight_range);
        g.add_edge(a, b, w).unwrap();
    }
    Ok(g)
}
