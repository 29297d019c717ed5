//! Repeated timed solves over a directory of instances.
//!
//! Every `<name>.nodes` file with a matching `<name>.edges` is an instance.
//! Each one is solved `repeats` times in sequence; the report keeps the
//! median, second-smallest and second-largest wall times.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use crate::io::{format_number, parse_instance, InstanceFiles};
use crate::solver::{solve, SolveConfig, Status};

#[derive(Clone, Debug, PartialEq)]
pub struct BenchOptions {
    pub repeats: usize,
    pub config: SolveConfig,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            repeats: 10,
            config: SolveConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    /// Wall time of every run, in seconds, in run order.
    pub times: Vec<f64>,
    pub weights: Vec<f64>,
    /// `Timeout` if any run timed out.
    pub status: Status,
}

impl BenchRow {
    fn sorted(&self) -> Vec<f64> {
        let mut t = self.times.clone();
        t.sort_by(f64::total_cmp);
        t
    }

    pub fn median(&self) -> f64 {
        let t = self.sorted();
        let k = t.len();
        if k % 2 == 1 {
            t[k / 2]
        } else {
            (t[k / 2 - 1] + t[k / 2]) / 2.0
        }
    }

    pub fn second_min(&self) -> f64 {
        let t = self.sorted();
        t[1.min(t.len() - 1)]
    }

    pub fn second_max(&self) -> f64 {
        let t = self.sorted();
        t[t.len().saturating_sub(2)]
    }

    /// All repeats found the same weight.
    pub fn consistent(&self) -> bool {
        self.weights.windows(2).all(|w| w[0] == w[1])
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Instances that could not be read, with the reason.
    pub skipped: Vec<(String, String)>,
}

pub const TSV_HEADER: &str = "instance\tn\tm\tmedian_s\tp2min_s\tp2max_s\tstatus\tweight";

impl BenchReport {
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{TSV_HEADER}");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{}\t{}\t{}\t{:.6}\t{:.6}\t{:.6}\t{}\t{}",
                r.instance,
                r.n,
                r.m,
                r.median(),
                r.second_min(),
                r.second_max(),
                r.status.as_str(),
                format_number(r.weights[0])
            );
        }
        for (name, why) in &self.skipped {
            let _ = writeln!(s, "# skipped {name}: {why}");
        }
        s
    }
}

pub fn run_bench(dir: &Path, options: &BenchOptions) -> std::io::Result<BenchReport> {
    let repeats = options.repeats.max(1);
    let mut names: Vec<String> = fs::read_dir(dir)?
        .filter_map(|entry| {
            let path = entry.ok()?.path();
            (path.extension()? == "nodes").then(|| path.file_stem()?.to_str().map(str::to_owned))?
        })
        .collect();
    names.sort();

    let mut report = BenchReport::default();
    for name in names {
        let files = InstanceFiles::with_prefix(dir.join(&name));
        let instance = match parse_instance(&files, None) {
            Ok(i) => i,
            Err(e) => {
                report.skipped.push((name, e.to_string()));
                continue;
            }
        };
        let mut row = BenchRow {
            instance: name.clone(),
            n: instance.graph.vertex_count(),
            m: instance.graph.edge_count(),
            times: Vec::new(),
            weights: Vec::new(),
            status: Status::Optimal,
        };
        let mut failed = None;
        for _ in 0..repeats {
            let start = Instant::now();
            match solve(&instance, &options.config) {
                Ok(r) => {
                    row.times.push(start.elapsed().as_secs_f64());
                    row.weights.push(r.weight);
                    if r.status == Status::Timeout {
                        row.status = Status::Timeout;
                    }
                }
                Err(e) => {
                    failed = Some(e.to_string());
                    break;
                }
            }
        }
        match failed {
            Some(why) => report.skipped.push((name, why)),
            None => report.rows.push(row),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(times: &[f64]) -> BenchRow {
        BenchRow {
            instance: "x".into(),
            n: 1,
            m: 0,
            times: times.to_vec(),
            weights: vec![1.0; times.len()],
            status: Status::Optimal,
        }
    }

    #[test]
    fn statistics() {
        let r = row(&[5.0, 1.0, 3.0, 2.0, 4.0]);
        assert_eq!((r.median(), r.second_min(), r.second_max()), (3.0, 2.0, 4.0));
        let r = row(&[4.0, 1.0, 3.0, 2.0]);
        assert_eq!((r.median(), r.second_min(), r.second_max()), (2.5, 2.0, 3.0));
        let r = row(&[7.0]);
        assert_eq!((r.median(), r.second_min(), r.second_max()), (7.0, 7.0, 7.0));
    }

    #[test]
    fn empty_report_is_header_only() {
        assert_eq!(BenchReport::default().to_tsv(), format!("{TSV_HEADER}\n"));
    }
}
