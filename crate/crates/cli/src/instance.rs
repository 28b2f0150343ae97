//! Instance files: lines or weighted points with rational string coordinates.

use std::str::FromStr;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use polypart::generate::{cycle_gadget, parallel_family, random_lines, random_points};
use polypart::geometry::{check_disjoint_non_vertical, Line3, WeightedPoint};
use polypart::polynomial::rational_string;
use polypart::rng::from_seed;
use polypart::Rational;

pub const INSTANCE_SCHEMA: &str = "polypart-instance/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineRecord {
    pub id: u64,
    pub origin: [String; 3],
    pub dir: [String; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    pub coords: Vec<String>,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceData {
    Lines { lines: Vec<LineRecord> },
    Points { dim: usize, points: Vec<PointRecord> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub schema: String,
    /// How the instance was produced, when generated.
    pub generator: Option<Generator>,
    #[serde(flatten)]
    pub data: InstanceData,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub kind: GenKind,
    pub n: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    RandomLines,
    RandomPoints,
    CycleGadget,
    ParallelFamily,
}

fn parse_q(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|e| anyhow::anyhow!("bad rational {s:?}: {e}"))
}

fn triple(v: &[String; 3]) -> Result<[Rational; 3]> {
    Ok([parse_q(&v[0])?, parse_q(&v[1])?, parse_q(&v[2])?])
}

impl Instance {
    pub fn from_lines(lines: &[Line3], generator: Option<Generator>) -> Self {
        let s = |p: &[Rational; 3]| p.each_ref().map(rational_string);
        let lines = lines.iter().map(|l| LineRecord { id: l.id, origin: s(&l.origin), dir: s(&l.dir) }).collect();
        Self { schema: INSTANCE_SCHEMA.into(), generator, data: InstanceData::Lines { lines } }
    }

    pub fn from_points(points: &[WeightedPoint], dim: usize, generator: Option<Generator>) -> Self {
        let points = points
            .iter()
            .map(|p| PointRecord { coords: p.coords.iter().map(rational_string).collect(), weight: p.weight })
            .collect();
        Self { schema: INSTANCE_SCHEMA.into(), generator, data: InstanceData::Points { dim, points } }
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let inst: Instance = serde_json::from_slice(bytes).context("instance is not valid JSON")?;
        if inst.schema != INSTANCE_SCHEMA {
            bail!("unsupported instance schema {:?}", inst.schema);
        }
        Ok(inst)
    }

    pub fn lines(&self) -> Result<Vec<Line3>> {
        let InstanceData::Lines { lines } = &self.data else { bail!("instance holds points, expected lines") };
        lines.iter().map(|r| Ok(Line3::new(r.id, triple(&r.origin)?, triple(&r.dir)?)?)).collect()
    }

    pub fn points(&self) -> Result<Vec<WeightedPoint>> {
        let InstanceData::Points { dim, points } = &self.data else { bail!("instance holds lines, expected points") };
        points
            .iter()
            .map(|p| {
                if p.coords.len() != *dim || p.weight == 0 {
                    bail!("point must have {dim} coordinates and positive weight");
                }
                Ok(WeightedPoint::new(p.coords.iter().map(|c| parse_q(c)).collect::<Result<_>>()?, p.weight))
            })
            .collect()
    }
}

/// Content hash in the style of git: sha256 over `blob <len>\0<bytes>`.
pub fn content_hash(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", bytes.len()));
    h.update(bytes);
    hex::encode(h.finalize())
}

/// Builds an instance; line instances are checked against the depth
/// preconditions before they are returned.
pub fn generate(kind: GenKind, n: usize, seed: u64, dim: usize) -> Result<Instance> {
    if n == 0 {
        bail!("n must be at least 1");
    }
    let generator = Some(Generator { kind, n, seed });
    let lines = match kind {
        GenKind::RandomPoints => {
            if !(2..=3).contains(&dim) {
                bail!("points must have dimension 2 or 3");
            }
            return Ok(Instance::from_points(&random_points(n, dim, &mut from_seed(seed)), dim, generator));
        }
        GenKind::RandomLines => random_lines(n, &mut from_seed(seed))?,
        GenKind::CycleGadget => cycle_gadget(n),
        GenKind::ParallelFamily => parallel_family(n),
    };
    check_disjoint_non_vertical(&lines)?;
    Ok(Instance::from_lines(&lines, generator))
}
