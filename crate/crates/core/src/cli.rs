//! Command-line front end.
//!
//! ```text
//! gmwcs -n NODES -e EDGES [-r ROOT] [-t SECONDS] [-m WORKERS] [-o OUT] ...
//! gmwcs generate --nodes N --density P --weight-range LO,HI --seed S --out PREFIX
//! gmwcs bench --dir DIR [--repeats R] [-t SECONDS] [-m WORKERS] [-o OUT]
//! ```
//!
//! Exit codes: 0 optimal, 3 time limit reached (the incumbent is still
//! printed), 1 usage, input or solver error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use crate::bench::{run_bench, BenchOptions};
use crate::formulation::{build_model, export_lp};
use crate::generate::{generate, GenerateOptions};
use crate::io::{format_result, parse_instance, write_instance, InstanceFiles};
use crate::oracle;
use crate::solver::{solve, SolveConfig, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_TIMEOUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "gmwcs", version, about = "Maximum-weight connected subgraph solver")]
#[command(args_conflicts_with_subcommands = true, subcommand_negates_reqs = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    solve: SolveArgs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a random connected instance.
    Generate(GenerateArgs),
    /// Time repeated solves over a directory of instances.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct Tuning {
    /// Time limit in seconds.
    #[arg(short = 't', long = "time-limit")]
    time_limit: Option<f64>,
    /// Number of search workers.
    #[arg(short = 'm', long = "workers", default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    no_preprocess: bool,
    #[arg(long)]
    no_decompose: bool,
    #[arg(long)]
    no_symmetry: bool,
    #[arg(long)]
    no_bfs: bool,
    /// Disallow the empty solution.
    #[arg(long)]
    nonempty: bool,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Nodes file.
    #[arg(short = 'n', long = "nodes", required = true)]
    nodes: Option<PathBuf>,
    /// Edges file.
    #[arg(short = 'e', long = "edges", required = true)]
    edges: Option<PathBuf>,
    /// Node that must be in the solution.
    #[arg(short = 'r', long)]
    root: Option<String>,
    /// Output file (default: standard output).
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    /// Write the MIP model in LP format and exit.
    #[arg(long)]
    export_lp: Option<PathBuf>,
    /// Use brute force instead of the solver (small instances only).
    #[arg(long)]
    oracle: bool,
    #[command(flatten)]
    tuning: Tuning,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long)]
    nodes: usize,
    #[arg(long)]
    density: f64,
    /// Weight bounds as `lo,hi`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    weight_range: (f64, f64),
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output prefix; writes `<prefix>.nodes` and `<prefix>.edges`.
    #[arg(long)]
    out: PathBuf,
    /// Write this many instances `<prefix><i>` with seeds `seed + i`.
    #[arg(long)]
    count: Option<u64>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long)]
    dir: PathBuf,
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    tuning: Tuning,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected lo,hi")?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((num(lo)?, num(hi)?))
}

impl Tuning {
    fn config(&self) -> Result<SolveConfig, String> {
        if self.workers == 0 {
            return Err("--workers must be at least 1".into());
        }
        let time_limit = match self.time_limit {
            Some(t) if t.is_finite() && t >= 0.0 => Some(Duration::from_secs_f64(t)),
            Some(t) => return Err(format!("invalid time limit {t}")),
            None => None,
        };
        Ok(SolveConfig {
            time_limit,
            workers: self.workers,
            preprocess: !self.no_preprocess,
            decompose: !self.no_decompose,
            symmetry_breaking: !self.no_symmetry,
            bfs_restriction: !self.no_bfs,
            allow_empty: !self.nonempty,
            ..SolveConfig::default()
        })
    }
}

fn emit(path: &Option<PathBuf>, text: &str, out: &mut dyn Write) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn run_solve(args: SolveArgs, out: &mut dyn Write) -> Result<i32, String> {
    let config = args.tuning.config()?;
    let files = InstanceFiles::new(args.nodes.unwrap(), args.edges.unwrap());
    let instance = parse_instance(&files, args.root.as_deref()).map_err(|e| e.to_string())?;

    if let Some(path) = &args.export_lp {
        let model = build_model(&instance, config.model_options()).map_err(|e| e.to_string())?;
        fs::write(path, export_lp(&model)).map_err(|e| format!("{}: {e}", path.display()))?;
        return Ok(EXIT_OK);
    }

    let result = if args.oracle {
        oracle::brute_force_with(&instance, config.allow_empty).map_err(|e| e.to_string())?
    } else {
        solve(&instance, &config).map_err(|e| e.to_string())?
    };
    if result.status == Status::InfeasibleRooted {
        return Err("no feasible solution".into());
    }
    emit(&args.output, &format_result(&instance.graph, &result), out)?;
    Ok(if result.status == Status::Timeout { EXIT_TIMEOUT } else { EXIT_OK })
}

fn run_generate(args: GenerateArgs) -> Result<i32, String> {
    let mut options = GenerateOptions {
        nodes: args.nodes,
        density: args.density,
        weight_range: args.weight_range,
        seed: args.seed,
    };
    let targets: Vec<(u64, PathBuf)> = match args.count {
        None => vec![(args.seed, args.out)],
        Some(k) => (0..k)
            .map(|i| {
                let mut p = args.out.clone().into_os_string();
                p.push(i.to_string());
                (args.seed + i, PathBuf::from(p))
            })
            .collect(),
    };
    for (seed, prefix) in targets {
        options.seed = seed;
        let g = generate(&options).map_err(|e| e.to_string())?;
        write_instance(&g, &InstanceFiles::with_prefix(&prefix)).map_err(|e| format!("{}: {e}", prefix.display()))?;
    }
    Ok(EXIT_OK)
}

fn run_bench_cmd(args: BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    let options = BenchOptions {
        repeats: args.repeats,
        config: args.tuning.config()?,
    };
    let report = run_bench(&args.dir, &options).map_err(|e| format!("{}: {e}", args.dir.display()))?;
    for (name, why) in &report.skipped {
        let _ = writeln!(err, "warning: skipped {name}: {why}");
    }
    emit(&args.output, &report.to_tsv(), out)?;
    Ok(EXIT_OK)
}

/// Runs the tool on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let outcome = match cli.command {
        Some(Command::Generate(a)) => run_generate(a),
        Some(Command::Bench(a)) => run_bench_cmd(a, out, err),
        None => run_solve(cli.solve, out),
    };
    match outcome {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(args.iter().copied(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn missing_files_is_usage_error() {
        let (code, _, err) = run_capture(&["gmwcs"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.contains("--nodes"));
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_capture(&["gmwcs", "--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("generate"));
    }

    #[test]
    fn range_parser() {
        assert_eq!(parse_range("-5,5"), Ok((-5.0, 5.0)));
        assert!(parse_range("5").is_err());
    }

    #[test]
    fn zero_workers_rejected() {
        let (code, _, err) = run_capture(&["gmwcs", "-n", "x", "-e", "y", "-m", "0"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.contains("workers"));
    }
}
