//! Instance files and result output.
//!
//! Nodes file: one `<id> <weight>` record per line. Edges file: one
//! `<id1> <id2> <weight>` record per line. Fields are separated by tabs (any
//! whitespace is accepted on input); blank lines and lines starting with `#`
//! are skipped. Ids are arbitrary tokens and become vertex labels; vertices
//! are numbered in file order.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::graph::{Instance, Subgraph, VertexId, WeightedGraph};
use crate::solver::SolveResult;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFiles {
    pub nodes_path: PathBuf,
    pub edges_path: PathBuf,
}

impl InstanceFiles {
    pub fn new(nodes_path: impl Into<PathBuf>, edges_path: impl Into<PathBuf>) -> Self {
        InstanceFiles {
            nodes_path: nodes_path.into(),
            edges_path: edges_path.into(),
        }
    }

    /// `<prefix>.nodes` and `<prefix>.edges`.
    pub fn with_prefix(prefix: impl AsRef<Path>) -> Self {
        let p = prefix.as_ref().as_os_str();
        let mut nodes = p.to_owned();
        nodes.push(".nodes");
        let mut edges = p.to_owned();
        edges.push(".edges");
        InstanceFiles::new(nodes, edges)
    }
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{file} line {line}: {message}")]
    Malformed {
        file: &'static str,
        line: usize,
        message: String,
    },
    #[error("edges line {line}: unknown node {id}")]
    UnknownEndpoint { line: usize, id: String },
    #[error("nodes line {line}: duplicate node {id}")]
    DuplicateNode { line: usize, id: String },
    #[error("edges line {line}: self-loop on {id}")]
    SelfLoop { line: usize, id: String },
    #[error("unknown root {0}")]
    UnknownRoot(String),
}

fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        (!line.is_empty() && !line.starts_with('#')).then(|| (i + 1, line.split_whitespace().collect()))
    })
}

fn weight(file: &'static str, line: usize, token: &str) -> Result<f64, ParseError> {
    match token.parse::<f64>() {
        Ok(w) if w.is_finite() => Ok(w),
        _ => Err(ParseError::Malformed {
            file,
            line,
            message: format!("bad weight {token:?}"),
        }),
    }
}

/// Parses instance text; `root` names a node id.
pub fn parse_instance_str(nodes: &str, edges: &str, root: Option<&str>) -> Result<Instance, ParseError> {
    let mut g = WeightedGraph::new();
    let mut ids: HashMap<String, VertexId> = HashMap::new();
    for (line, fields) in records(nodes) {
        let [id, w] = fields[..] else {
            return Err(ParseError::Malformed {
                file: "nodes",
                line,
                message: format!("expected 2 fields, found {}", fields.len()),
            });
        };
        let w = weight("nodes", line, w)?;
        if ids.contains_key(id) {
            return Err(ParseError::DuplicateNode { line, id: id.into() });
        }
        let v = g.add_labeled_vertex(id, w).expect("weight is finite");
        ids.insert(id.to_string(), v);
    }
    for (line, fields) in records(edges) {
        let [a, b, w] = fields[..] else {
            return Err(ParseError::Malformed {
                file: "edges",
                line,
                message: format!("expected 3 fields, found {}", fields.len()),
            });
        };
        let w = weight("edges", line, w)?;
        let end = |id: &str| {
            ids.get(id)
                .copied()
                .ok_or_else(|| ParseError::UnknownEndpoint { line, id: id.into() })
        };
        let (va, vb) = (end(a)?, end(b)?);
        if va == vb {
            return Err(ParseError::SelfLoop { line, id: a.into() });
        }
        g.add_edge(va, vb, w).expect("endpoints exist and differ");
    }
    let root = match root {
        Some(r) => Some(*ids.get(r).ok_or_else(|| ParseError::UnknownRoot(r.into()))?),
        None => None,
    };
    Ok(Instance { graph: g, root })
}

fn read(path: &Path) -> Result<String, ParseError> {
    fs::read_to_string(path).map_err(|source| ParseError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn parse_instance(files: &InstanceFiles, root: Option<&str>) -> Result<Instance, ParseError> {
    parse_instance_str(&read(&files.nodes_path)?, &read(&files.edges_path)?, root)
}

/// Shortest round-trip decimal, with negative zero printed as `0`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x}")
    }
}

pub fn format_nodes(g: &WeightedGraph) -> String {
    let mut s = String::new();
    for v in g.vertices() {
        let _ = writeln!(s, "{}\t{}", g.display_name(v), format_number(g.vertex_weight(v).unwrap()));
    }
    s
}

pub fn format_edges(g: &WeightedGraph) -> String {
    let mut s = String::new();
    for (_, e) in g.edges() {
        let _ = writeln!(
            s,
            "{}\t{}\t{}",
            g.display_name(e.ends.0),
            g.display_name(e.ends.1),
            format_number(e.weight)
        );
    }
    s
}

pub fn write_instance(g: &WeightedGraph, files: &InstanceFiles) -> std::io::Result<()> {
    fs::write(&files.nodes_path, format_nodes(g))?;
    fs::write(&files.edges_path, format_edges(g))
}

/// The result block printed by the command-line tool.
pub fn format_result(g: &WeightedGraph, result: &SolveResult) -> String {
    format_solution(g, &result.solution, result.weight, result.status.as_str(), result.upper_bound)
}

fn format_solution(g: &WeightedGraph, sub: &Subgraph, weight: f64, status: &str, bound: f64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "weight {}", format_number(weight));
    let _ = writeln!(s, "status {status}");
    let _ = writeln!(s, "bound {}", format_number(bound));
    s.push_str("nodes\n");
    for &v in &sub.vertices {
        let _ = writeln!(s, "{}", g.display_name(v));
    }
    s.push_str("edges\n");
    for &e in &sub.edges {
        let (a, b) = g.edge(e).unwrap().ends;
        let _ = writeln!(s, "{} {}", g.display_name(a), g.display_name(b));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::Status;

    #[test]
    fn parses_small_instance() {
        let inst = parse_instance_str("a\t1.5\nb\t-2\n", "a\tb\t0.5\n", None).unwrap();
        assert_eq!(inst.graph.vertex_count(), 2);
        assert_eq!(inst.graph.edge_count(), 1);
        assert_eq!(inst.graph.label(VertexId(1)), Some("b"));
    }

    #[test]
    fn missing_endpoint_names_id_and_line() {
        let err = parse_instance_str("a\t1\nb\t1\n", "a\tb\t1\n\na\tc\t2\n", None).unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, ParseError::UnknownEndpoint { line: 3, .. }));
        assert!(msg.contains('c') && msg.contains('3'));
    }

    #[test]
    fn comments_are_ignored() {
        let plain = parse_instance_str("a\t1\nb\t2\n", "a\tb\t-1\n", Some("b")).unwrap();
        let noisy = parse_instance_str("# nodes\na\t1\n\n# more\nb\t2\n", "\n# e\na\tb\t-1\n", Some("b")).unwrap();
        assert_eq!(plain, noisy);
        assert_eq!(plain.root, Some(VertexId(1)));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_instance_str("a\t1\na\t2\n", "", None),
            Err(ParseError::DuplicateNode { line: 2, .. })
        ));
        assert!(matches!(
            parse_instance_str("a\t1\n", "a\ta\t1\n", None),
            Err(ParseError::SelfLoop { line: 1, .. })
        ));
        assert!(matches!(
            parse_instance_str("a\tx\n", "", None),
            Err(ParseError::Malformed { line: 1, .. })
        ));
        assert!(matches!(
            parse_instance_str("a\t1\t2\n", "", None),
            Err(ParseError::Malformed { line: 1, .. })
        ));
        assert!(matches!(
            parse_instance_str("a\t1\n", "", Some("z")),
            Err(ParseError::UnknownRoot(_))
        ));
        assert!(matches!(
            parse_instance_str("a\tinf\n", "", None),
            Err(ParseError::Malformed { .. })
        ));
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let nodes = "x\t0.1\ny\t-3\nz\t0.0000001\n";
        let edges = "x\ty\t2.5\ny\tz\t-0.125\n";
        let inst = parse_instance_str(nodes, edges, None).unwrap();
        assert_eq!(format_nodes(&inst.graph), nodes);
        assert_eq!(format_edges(&inst.graph), "x\ty\t2.5\ny\tz\t-0.125\n");
        assert_eq!(format_number(1e-7), "0.0000001");
    }

    #[test]
    fn result_block() {
        let inst = parse_instance_str("a\t5\n", "", None).unwrap();
        let r = SolveResult {
            solution: Subgraph::single(VertexId(0)),
            weight: 5.0,
            upper_bound: 5.0,
            status: Status::Optimal,
        };
        assert_eq!(
            format_result(&inst.graph, &r),
            "weight 5\nstatus optimal\nbound 5\nnodes\na\nedges\n"
        );
        assert_eq!(format_number(-0.0), "0");
    }
}
