//! Pipeline driver behind the `polypart` binary: instance files, run
//! artifacts, replay verification and the cut-count benchmark.

pub mod bench;
pub mod instance;
pub mod verify;

use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use polypart::curve_partition::first_stage;
use polypart::cutting::{second_stage, FullDecomposition};
use polypart::depth::{eliminate_cycles, quadratic_baseline, Cut, CutKind, DepthGraph, RecursionNode};
use polypart::geometry::{check_disjoint_non_vertical, Segment3};
use polypart::point_partition::{partition_points, PartitionStats};
use polypart::rng::{child_seed, from_seed};
use polypart::{Params, Poly};

pub use bench::{BenchConfig, BenchResult};
pub use instance::{content_hash, generate, GenKind, Instance};

pub const RUN_SCHEMA: &str = "polypart-run/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    PartitionPoints,
    PartitionLines,
    EliminateCycles,
    Bench,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Baseline {
    Quadratic,
}

/// Everything that determines a run's output besides the input file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub command: Command,
    pub seed: u64,
    #[serde(rename = "D")]
    pub d: Option<u32>,
    pub r: Option<u64>,
    pub n0: Option<usize>,
    pub baseline: Option<Baseline>,
    pub bench: Option<BenchConfig>,
    /// Only exact rational arithmetic is supported.
    pub arithmetic: String,
    pub params: Params,
}

impl Config {
    pub fn new(command: Command, seed: u64, params: Params) -> Self {
        Self { command, seed, d: None, r: None, n0: None, baseline: None, bench: None, arithmetic: "exact".into(), params }
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.params;
        let positive = [p.c_cell, p.c_deg, p.c_sample, p.a_cut, p.c_vis, p.c_bnd];
        if positive.contains(&0) || p.retry_budget == 0 || p.resample_budget == 0 || p.max_factor_degree == 0 {
            bail!("all constants must be positive");
        }
        if self.arithmetic != "exact" {
            bail!("unsupported arithmetic mode {:?}", self.arithmetic);
        }
        if self.d == Some(0) || self.r == Some(0) {
            bail!("D and r must be positive");
        }
        Ok(())
    }
}

/// A persisted run: configuration, input hash, result and a digest over
/// all three.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub schema: String,
    pub config: Config,
    pub input_sha256: Option<String>,
    pub result: Value,
    pub digest: String,
}

fn digest_of(config: &Config, input: &Option<String>, result: &Value) -> String {
    let body = serde_json::to_vec(&(RUN_SCHEMA, config, input, result)).expect("serializable");
    hex::encode(Sha256::digest(body))
}

impl Artifact {
    pub fn new(config: Config, input_sha256: Option<String>, result: Value) -> Self {
        let digest = digest_of(&config, &input_sha256, &result);
        Self { schema: RUN_SCHEMA.into(), config, input_sha256, result, digest }
    }

    pub fn expected_digest(&self) -> String {
        digest_of(&self.config, &self.input_sha256, &self.result)
    }
}

/// Serialized form used for every output file.
pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub signs: Vec<i8>,
    pub weight: u64,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointsResult {
    pub dim: usize,
    pub r: u64,
    pub total_weight: u64,
    pub degree: u32,
    pub factors: Vec<Poly>,
    pub cells: Vec<CellRecord>,
    pub boundary: Vec<usize>,
    pub boundary_weight: u64,
    pub stats: PartitionStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EliminationResult {
    pub strategy: String,
    pub n: usize,
    pub cut_count: usize,
    pub cuts_by_kind: BTreeMap<CutKind, usize>,
    pub cuts: Vec<Cut>,
    pub pieces: usize,
    pub edges: usize,
    pub graph: DepthGraph,
    pub order: Vec<usize>,
    pub trace: Vec<RecursionNode>,
    pub repairs: usize,
}

pub fn partition_points_result(inst: &Instance, cfg: &Config) -> Result<PointsResult> {
    let pts = inst.points()?;
    let r = cfg.r.context("r is required")?;
    let part = partition_points(&pts, r, &cfg.params, &mut from_seed(cfg.seed), None)?;
    Ok(PointsResult {
        dim: pts.first().map_or(3, |p| p.coords.len()),
        r,
        total_weight: pts.iter().map(|p| p.weight).sum(),
        degree: part.poly.degree(),
        factors: part.poly.factors,
        cells: part
            .cells
            .into_iter()
            .map(|c| CellRecord { signs: c.signs, weight: c.weight, members: c.members })
            .collect(),
        boundary: part.boundary,
        boundary_weight: part.boundary_weight,
        stats: part.poly.stats,
    })
}

pub fn partition_lines_result(inst: &Instance, cfg: &Config) -> Result<FullDecomposition> {
    let segs: Vec<Segment3> = inst.lines()?.into_iter().map(Segment3::full).collect();
    let d = cfg.d.context("D is required")?;
    let s1 = first_stage(&segs, d, &cfg.params, &mut from_seed(cfg.seed))?;
    Ok(second_stage(s1, &segs, &cfg.params, child_seed(cfg.seed, 1))?)
}

pub fn eliminate_result(inst: &Instance, cfg: &Config) -> Result<EliminationResult> {
    let lines = inst.lines()?;
    check_disjoint_non_vertical(&lines)?;
    let (strategy, cuts, graph, order, trace, repairs) = match cfg.baseline {
        Some(Baseline::Quadratic) => {
            let cuts = quadratic_baseline(&lines)?;
            let graph = DepthGraph::build(&lines, &cuts)?;
            let order = graph.topological_order().context("baseline left a cycle")?;
            ("quadratic", cuts, graph, order, Vec::new(), 0)
        }
        None => {
            let d = cfg.d.context("D is required")?;
            let n0 = cfg.n0.context("n0 is required")?;
            let e = eliminate_cycles(&lines, d, n0, &cfg.params, cfg.seed)?;
            ("recursive", e.cuts, e.graph, e.order, e.trace, e.repairs)
        }
    };
    let cuts = cuts.cuts();
    let mut by_kind = BTreeMap::new();
    for c in &cuts {
        *by_kind.entry(c.kind).or_insert(0) += 1;
    }
    Ok(EliminationResult {
        strategy: strategy.into(),
        n: lines.len(),
        cut_count: cuts.len(),
        cuts_by_kind: by_kind,
        pieces: lines.len() + cuts.len(),
        edges: graph.edges.len(),
        cuts,
        graph,
        order,
        trace,
        repairs,
    })
}

/// Runs the configured command and returns its result as JSON.
pub fn run(cfg: &Config, input: Option<&[u8]>) -> Result<Value> {
    cfg.validate()?;
    let inst = match (cfg.command, input) {
        (Command::Bench, _) => None,
        (_, Some(b)) => Some(Instance::parse(b)?),
        (_, None) => bail!("an input instance is required"),
    };
    let v = match cfg.command {
        Command::PartitionPoints => serde_json::to_value(partition_points_result(inst.as_ref().unwrap(), cfg)?)?,
        Command::PartitionLines => serde_json::to_value(partition_lines_result(inst.as_ref().unwrap(), cfg)?)?,
        Command::EliminateCycles => serde_json::to_value(eliminate_result(inst.as_ref().unwrap(), cfg)?)?,
        Command::Bench => {
            let b = cfg.bench.as_ref().context("bench settings are required")?;
            serde_json::to_value(bench::run(b, cfg)?)?
        }
    };
    Ok(v)
}

/// Runs a command and wraps the result into an artifact.
pub fn execute(cfg: Config, input: Option<&[u8]>) -> Result<Artifact> {
    let result = run(&cfg, input)?;
    let hash = if cfg.command == Command::Bench { None } else { input.map(content_hash) };
    Ok(Artifact::new(cfg, hash, result))
}
