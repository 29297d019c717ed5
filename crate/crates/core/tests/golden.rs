//! Byte-exact LP export and CLI output on the fixture instances, plus a
//! re-parse of exported LP text.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use gmwcs::formulation::{build_model, export_lp, Domain, MipModel, ModelOptions, Sense};
use gmwcs::io::{parse_instance, InstanceFiles};

const FIXTURES: [&str; 3] = ["single_vertex", "single_edge", "triangle"];

fn fixture(name: &str, ext: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(format!("{name}.{ext}"))
}

fn load(name: &str) -> gmwcs::graph::Instance {
    parse_instance(&InstanceFiles::new(fixture(name, "nodes"), fixture(name, "edges")), None).unwrap()
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = gmwcs::cli::run(args.iter().copied(), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn lp_export_matches_golden_files() {
    for name in FIXTURES {
        let model = build_model(&load(name), ModelOptions::default()).unwrap();
        let golden = fs::read_to_string(fixture(name, "lp")).unwrap();
        assert_eq!(export_lp(&model), golden, "{name}");
    }
}

#[test]
fn cli_export_lp_matches_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    for name in FIXTURES {
        let out = dir.path().join(format!("{name}.lp"));
        let nodes = fixture(name, "nodes");
        let edges = fixture(name, "edges");
        let (code, _) = run_cli(&[
            "gmwcs",
            "-n",
            nodes.to_str().unwrap(),
            "-e",
            edges.to_str().unwrap(),
            "--export-lp",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert_eq!(fs::read(&out).unwrap(), fs::read(fixture(name, "lp")).unwrap(), "{name}");
    }
}

#[test]
fn cli_output_matches_golden_files() {
    for name in FIXTURES {
        let nodes = fixture(name, "nodes");
        let edges = fixture(name, "edges");
        let (code, out) = run_cli(&["gmwcs", "-n", nodes.to_str().unwrap(), "-e", edges.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert_eq!(out, fs::read_to_string(fixture(name, "out")).unwrap(), "{name}");
    }
}

/// Minimal reader for the LP subset the exporter writes.
#[derive(Debug, PartialEq)]
struct ParsedLp {
    objective: Vec<(String, f64)>,
    rows: Vec<(String, Vec<(String, f64)>, String, f64)>,
    bounds: BTreeMap<String, (f64, f64)>,
    binaries: Vec<String>,
}

fn parse_expr(text: &str) -> Vec<(String, f64)> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens == ["0"] {
        return Vec::new();
    }
    let mut terms = Vec::new();
    let mut i = 0;
    let mut sign = 1.0;
    while i < tokens.len() {
        match tokens[i] {
            "+" => {
                sign = 1.0;
                i += 1;
            }
            "-" => {
                sign = -1.0;
                i += 1;
            }
            coef => {
                let c: f64 = coef.parse().unwrap();
                terms.push((tokens[i + 1].to_string(), sign * c));
                sign = 1.0;
                i += 2;
            }
        }
    }
    terms
}

fn parse_lp(text: &str) -> ParsedLp {
    let mut lp = ParsedLp {
        objective: Vec::new(),
        rows: Vec::new(),
        bounds: BTreeMap::new(),
        binaries: Vec::new(),
    };
    let mut section = "";
    for line in text.lines() {
        match line {
            "Maximize" | "Subject To" | "Bounds" | "Binaries" => {
                section = line;
                continue;
            }
            "End" => break,
            _ => {}
        }
        let line = line.trim();
        match section {
            "Maximize" => lp.objective = parse_expr(line.strip_prefix("obj:").unwrap()),
            "Subject To" => {
                let (name, rest) = line.split_once(':').unwrap();
                let tokens: Vec<&str> = rest.split_whitespace().collect();
                let k = tokens.len();
                let rhs: f64 = tokens[k - 1].parse().unwrap();
                let sense = tokens[k - 2].to_string();
                lp.rows.push((name.to_string(), parse_expr(&tokens[..k - 2].join(" ")), sense, rhs));
            }
            "Bounds" => {
                let t: Vec<&str> = line.split_whitespace().collect();
                lp.bounds.insert(t[2].to_string(), (t[0].parse().unwrap(), t[4].parse().unwrap()));
            }
            "Binaries" => lp.binaries.push(line.to_string()),
            _ => panic!("text outside a section: {line}"),
        }
    }
    lp
}

fn expected(model: &MipModel) -> ParsedLp {
    let name = |i: gmwcs::formulation::VarIndex| model.variables()[i.0].name();
    ParsedLp {
        objective: model.objective().iter().map(|&(i, c)| (name(i), c)).collect(),
        rows: model
            .constraints()
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let sense = match c.sense {
                    Sense::Le => "<=",
                    Sense::Eq => "=",
                    Sense::Ge => ">=",
                };
                (
                    format!("c{}", k + 1),
                    c.terms.iter().map(|&(i, a)| (name(i), a)).collect(),
                    sense.to_string(),
                    c.rhs,
                )
            })
            .collect(),
        bounds: model
            .variables()
            .iter()
            .filter_map(|v| match v.domain {
                Domain::Continuous { lower, upper } => Some((v.name(), (lower, upper))),
                Domain::Binary => None,
            })
            .collect(),
        binaries: model
            .variables()
            .iter()
            .filter(|v| v.domain == Domain::Binary)
            .map(|v| v.name())
            .collect(),
    }
}

#[test]
fn exported_lp_reparses_to_the_model() {
    for name in FIXTURES {
        for options in [
            ModelOptions::default(),
            ModelOptions {
                symmetry_breaking: false,
                bfs_restriction: false,
                allow_empty: false,
            },
        ] {
            let model = build_model(&load(name), options).unwrap();
            assert_eq!(parse_lp(&export_lp(&model)), expected(&model), "{name}");
        }
    }
}
