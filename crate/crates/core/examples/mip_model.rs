//! Build the integer programming model, encode a subgraph as a point of it,
//! check the point and export the model in LP format.
//!
//! ```text
//! cargo run --example mip_model
//! ```

use gmwcs::formulation::{build_model, check_assignment, encode_subgraph, export_lp, Family, ModelOptions};
use gmwcs::graph::{Instance, Subgraph, WeightedGraph};

fn main() {
    let mut g = WeightedGraph::new();
    let a = g.add_vertex(2.0).unwrap();
    let b = g.add_vertex(-1.0).unwrap();
    let c = g.add_vertex(3.0).unwrap();
    let ab = g.add_edge(a, b, -0.5).unwrap();
    let bc = g.add_edge(b, c, -0.5).unwrap();
    g.add_edge(c, a, -4.0).unwrap();

    let model = build_model(&Instance::unrooted(g), ModelOptions::default()).unwrap();
    println!("{} variables, {} constraints", model.variables().len(), model.constraints().len());
    for family in [Family::EdgeEndpoint, Family::InDegree, Family::DepthStep, Family::RootOrder, Family::BfsForward] {
        println!("  {family:?}: {}", model.count(family));
    }

    let path = Subgraph::from_parts([a, b, c], [ab, bc]);
    let point = encode_subgraph(&model, &path).unwrap();
    let violated = check_assignment(&model, &point).unwrap();
    println!("path a-b-c violates {violated:?}");

    print!("{}", export_lp(&model));
}
