//! Cut counts of the recursive elimination against the all-pairs baseline.

use std::fmt::Write as _;

use anyhow::Result;
use serde::{Deserialize, Serialize};

use polypart::depth::{eliminate_cycles, quadratic_baseline};
use polypart::generate::random_lines;
use polypart::rng::from_seed;

use crate::Config;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub ns: Vec<usize>,
    /// Instances per size; instance `k` uses seed `seed + k`.
    pub seeds: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub seed: u64,
    pub cuts: usize,
    pub baseline: usize,
    pub repairs: usize,
    pub depth: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub n: usize,
    pub cuts: usize,
    pub baseline: usize,
    pub beats_baseline: bool,
    /// log2 slope of the summed cut count against the previous size,
    /// printed with three decimals.
    pub slope: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchResult {
    #[serde(rename = "D")]
    pub d: u32,
    pub n0: usize,
    pub rows: Vec<BenchRow>,
    pub summary: Vec<BenchSummary>,
}

pub fn slope(n0: usize, c0: usize, n1: usize, c1: usize) -> f64 {
    (c1 as f64 / c0 as f64).log2() / (n1 as f64 / n0 as f64).log2()
}

/// Eliminates cycles on every (size, seed) instance.
pub fn run(b: &BenchConfig, cfg: &Config) -> Result<BenchResult> {
    let d = cfg.d.unwrap_or(3);
    let n0 = cfg.n0.unwrap_or(8);
    let mut rows = Vec::new();
    for &n in &b.ns {
        for k in 0..b.seeds {
            let seed = cfg.seed + k;
            let lines = random_lines(n, &mut from_seed(seed))?;
            let e = eliminate_cycles(&lines, d, n0, &cfg.params, seed)?;
            let baseline = quadratic_baseline(&lines)?.len();
            let depth = e.trace.iter().map(|t| t.depth).max().unwrap_or(0);
            rows.push(BenchRow { n, seed, cuts: e.cuts.len(), baseline, repairs: e.repairs, depth });
        }
    }
    let mut summary: Vec<BenchSummary> = Vec::new();
    for &n in &b.ns {
        let (cuts, baseline) = rows
            .iter()
            .filter(|r| r.n == n)
            .fold((0, 0), |(c, q), r| (c + r.cuts, q + r.baseline));
        let slope = summary.last().map(|p| format!("{:.3}", slope(p.n, p.cuts, n, cuts)));
        summary.push(BenchSummary { n, cuts, baseline, beats_baseline: cuts < baseline, slope });
    }
    Ok(BenchResult { d, n0, rows, summary })
}

/// Plain-text table of the summary.
pub fn table(r: &BenchResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:>6} {:>10} {:>10} {:>7} {:>7}", "n", "cuts", "baseline", "ratio", "slope");
    for row in &r.summary {
        let ratio = row.cuts as f64 / row.baseline.max(1) as f64;
        let _ = writeln!(
            s,
            "{:>6} {:>10} {:>10} {:>7.3} {:>7}",
            row.n,
            row.cuts,
            row.baseline,
            ratio,
            row.slope.as_deref().unwrap_or("-")
        );
    }
    s
}
