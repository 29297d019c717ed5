//! The command-line tool against the library and the oracle.

mod common;

use std::fs;
use std::path::Path;

use gmwcs::bench::{run_bench, BenchOptions, TSV_HEADER};
use gmwcs::cli::{run, EXIT_ERROR, EXIT_OK, EXIT_TIMEOUT};
use gmwcs::io::{parse_instance, write_instance, InstanceFiles};

use common::connected;

fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(args.iter().copied(), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn weight_line(out: &str) -> f64 {
    out.lines().next().unwrap().strip_prefix("weight ").unwrap().parse().unwrap()
}

fn paths(prefix: &Path) -> (String, String) {
    let f = InstanceFiles::with_prefix(prefix);
    (f.nodes_path.to_str().unwrap().into(), f.edges_path.to_str().unwrap().into())
}

#[test]
fn oracle_flag_agrees_with_default() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..50u64 {
        let prefix = dir.path().join(format!("g{seed}"));
        write_instance(&connected(4 + seed as usize % 9, 0.4, seed), &InstanceFiles::with_prefix(&prefix)).unwrap();
        let (n, e) = paths(&prefix);
        let mut args = vec!["gmwcs", "-n", &n, "-e", &e];
        if seed % 2 == 1 {
            args.extend(["-r", "n0"]);
        }
        let (c1, default, _) = cli(&args);
        args.push("--oracle");
        let (c2, oracle, _) = cli(&args);
        assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
        assert!((weight_line(&default) - weight_line(&oracle)).abs() < 1e-9, "seed {seed}");
        if seed % 2 == 1 {
            assert!(default.lines().skip_while(|l| *l != "nodes").any(|l| l == "n0"));
        }
    }
}

#[test]
fn generate_writes_requested_instance() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("inst");
    let p = prefix.to_str().unwrap();
    let (code, _, err) = cli(&["gmwcs", "generate", "--nodes", "12", "--density", "0.4", "--weight-range", "-5,5", "--seed", "7", "--out", p]);
    assert_eq!(code, EXIT_OK, "{err}");
    let inst = parse_instance(&InstanceFiles::with_prefix(&prefix), None).unwrap();
    assert_eq!(inst.graph, connected(12, 0.4, 7));

    let (code, _, _) = cli(&["gmwcs", "generate", "--nodes", "5", "--density", "0.4", "--weight-range", "-1,1", "--out", p, "--count", "3"]);
    assert_eq!(code, EXIT_OK);
    for i in 0..3 {
        assert!(dir.path().join(format!("inst{i}.edges")).exists());
    }
}

#[test]
fn errors_and_timeouts_use_their_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("bad");
    fs::write(dir.path().join("bad.nodes"), "a\t1\n").unwrap();
    fs::write(dir.path().join("bad.edges"), "a\tz\t1\n").unwrap();
    let (n, e) = paths(&prefix);
    let (code, _, err) = cli(&["gmwcs", "-n", &n, "-e", &e]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("line 1") && err.contains('z'), "{err}");

    let (code, _, err) = cli(&["gmwcs", "-n", &n, "-e", "/nonexistent/file"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("/nonexistent/file"));

    let prefix = dir.path().join("big");
    write_instance(&connected(60, 0.1, 3), &InstanceFiles::with_prefix(&prefix)).unwrap();
    let (n, e) = paths(&prefix);
    let (code, out, _) = cli(&["gmwcs", "-n", &n, "-e", &e, "-t", "0", "--no-preprocess", "--no-decompose"]);
    assert_eq!(code, EXIT_TIMEOUT);
    assert!(out.contains("status timeout"));
}

#[test]
fn output_file_option() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("g");
    write_instance(&connected(6, 0.5, 1), &InstanceFiles::with_prefix(&prefix)).unwrap();
    let (n, e) = paths(&prefix);
    let target = dir.path().join("result.txt");
    let (code, out, _) = cli(&["gmwcs", "-n", &n, "-e", &e, "-o", target.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (EXIT_OK, ""));
    assert!(fs::read_to_string(target).unwrap().starts_with("weight "));
}

#[test]
fn bench_on_empty_directory_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, out, _) = cli(&["gmwcs", "bench", "--dir", d]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, format!("{TSV_HEADER}\n"));
}

#[test]
fn bench_reports_one_row_per_instance() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("one.nodes"), "a\t5\n").unwrap();
    fs::write(dir.path().join("one.edges"), "").unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, out, _) = cli(&["gmwcs", "bench", "--dir", d, "--repeats", "3"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    let fields: Vec<&str> = lines[1].split('\t').collect();
    assert_eq!((fields[0], fields[1], fields[2], fields[6], fields[7]), ("one", "1", "0", "optimal", "5"));

    for seed in 0..20 {
        write_instance(&connected(10, 0.3, seed), &InstanceFiles::with_prefix(dir.path().join(format!("s{seed:02}")))).unwrap();
    }
    let report = run_bench(dir.path(), &BenchOptions { repeats: 2, ..BenchOptions::default() }).unwrap();
    assert_eq!(report.rows.len(), 21);
    assert!(report.rows.iter().all(|r| r.consistent() && r.times.len() == 2));
}
