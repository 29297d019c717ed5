//! Exact solver for the generalized maximum-weight connected subgraph
//! problem: given an undirected graph with real weights on vertices and
//! edges, find a connected subgraph of maximum total weight, optionally
//! forced to contain a root vertex.
//!
//! ```
//! use gmwcs::graph::{Instance, WeightedGraph};
//! use gmwcs::solver::{solve, SolveConfig};
//!
//! let mut g = WeightedGraph::new();
//! let a = g.add_vertex(3.0).unwrap();
//! let b = g.add_vertex(-1.0).unwrap();
//! let c = g.add_vertex(4.0).unwrap();
//! g.add_edge(a, b, -1.0).unwrap();
//! g.add_edge(b, c, 0.5).unwrap();
//! let result = solve(&Instance::unrooted(g), &SolveConfig::default()).unwrap();
//! assert_eq!(result.weight, 5.5);
//! ```

pub mod bench;
pub mod cli;
pub mod decomposition;
pub mod formulation;
pub mod generate;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod reductions;
pub mod separation;
pub mod solver;
