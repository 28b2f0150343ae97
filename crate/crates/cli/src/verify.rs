//! Replay and semantic verification of run artifacts.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde_json::Value;

use polypart::cutting::FullDecomposition;
use polypart::geometry::Segment3;
use polypart::oracle::{verify_decomposition, verify_elimination, verify_point_partition, Check, VerificationReport};
use polypart::polynomial::Algebraic;

use crate::{content_hash, run, Artifact, Command, EliminationResult, Instance, PointsResult, RUN_SCHEMA};

fn check(name: &str, pass: bool, measured: impl ToString, bound: impl ToString, witness: Option<String>) -> Check {
    Check {
        name: name.into(),
        pass,
        measured: measured.to_string(),
        bound: bound.to_string(),
        slack: "1".into(),
        witness: if pass { None } else { witness },
    }
}

/// JSON pointer of the first difference between two values.
pub fn first_difference(a: &Value, b: &Value) -> Option<String> {
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            for k in x.keys().chain(y.keys()) {
                match (x.get(k), y.get(k)) {
                    (Some(u), Some(v)) => {
                        if let Some(p) = first_difference(u, v) {
                            return Some(format!("/{k}{p}"));
                        }
                    }
                    _ => return Some(format!("/{k}")),
                }
            }
            None
        }
        (Value::Array(x), Value::Array(y)) => {
            for (i, (u, v)) in x.iter().zip(y).enumerate() {
                if let Some(p) = first_difference(u, v) {
                    return Some(format!("/{i}{p}"));
                }
            }
            (x.len() != y.len()).then(|| format!("/{}", x.len().min(y.len())))
        }
        _ => (a != b).then(String::new),
    }
}

/// Verifies a run artifact against its input: schema, digest, input hash,
/// a full replay, and the oracle checks for the command.
pub fn verify(run_bytes: &[u8], input: Option<&[u8]>) -> VerificationReport {
    let mut rep = VerificationReport::default();
    let art: Artifact = match serde_json::from_slice(run_bytes) {
        Ok(a) => a,
        Err(e) => {
            rep.checks.push(check("artifact.parse", false, "", "", Some(e.to_string())));
            return rep;
        }
    };
    rep.checks.push(check("artifact.schema", art.schema == RUN_SCHEMA, &art.schema, RUN_SCHEMA, Some(art.schema.clone())));
    let digest = art.expected_digest();
    rep.checks.push(check("artifact.digest", digest == art.digest, &art.digest, &digest, Some("digest mismatch".into())));
    if art.config.command != Command::Bench {
        let hash = input.map(content_hash);
        rep.checks.push(check(
            "artifact.input_hash",
            hash.is_some() && hash == art.input_sha256,
            art.input_sha256.clone().unwrap_or_default(),
            hash.clone().unwrap_or_else(|| "no input given".into()),
            Some("input differs from the one recorded".into()),
        ));
    }
    match run(&art.config, input) {
        Ok(v) => {
            let diff = first_difference(&art.result, &v);
            rep.checks.push(check("replay.identical", diff.is_none(), "", "", diff.map(|p| format!("result{p}"))));
        }
        Err(e) => rep.checks.push(check("replay.run", false, "", "", Some(format!("{e:#}")))),
    }
    if let Err(e) = semantic(&art, input, &mut rep) {
        rep.checks.push(check("semantic.load", false, "", "", Some(format!("{e:#}"))));
    }
    rep
}

fn semantic(art: &Artifact, input: Option<&[u8]>, rep: &mut VerificationReport) -> anyhow::Result<()> {
    let cfg = &art.config;
    if cfg.command == Command::Bench {
        return Ok(());
    }
    let inst = Instance::parse(input.unwrap_or_default())?;
    match cfg.command {
        Command::PartitionPoints => {
            let res: PointsResult = serde_json::from_value(art.result.clone())?;
            let pts = inst.points()?;
            rep.extend(verify_point_partition(&res.factors, &pts, res.r, cfg.params.c_cell));
            points_consistency(&res, &pts, cfg.params.c_deg, rep);
        }
        Command::PartitionLines => {
            let full: FullDecomposition = serde_json::from_value(art.result.clone())?;
            let segs: Vec<Segment3> = inst.lines()?.into_iter().map(Segment3::full).collect();
            rep.checks.push(check("decomposition.degree_param", Some(full.stage1.d) == cfg.d, full.stage1.d, cfg.d.unwrap_or(0), Some("D differs".into())));
            rep.extend(verify_decomposition(&full, &segs, &cfg.params));
        }
        Command::EliminateCycles => {
            let res: EliminationResult = serde_json::from_value(art.result.clone())?;
            let lines = inst.lines()?;
            let cuts: Vec<(u64, Algebraic, _)> = res.cuts.iter().map(|c| (c.line, c.t.clone(), c.kind)).collect();
            rep.extend(verify_elimination(&lines, &cuts, &res.graph));
            elimination_consistency(&res, lines.len(), rep);
        }
        Command::Bench => unreachable!(),
    }
    Ok(())
}

fn points_consistency(res: &PointsResult, pts: &[polypart::geometry::WeightedPoint], c_deg: u64, rep: &mut VerificationReport) {
    let sign = |i: usize| -> Option<Vec<i8>> {
        let mut s = Vec::new();
        for f in &res.factors {
            let v = f.eval(&pts[i].coords).ok()?;
            if v.is_zero() {
                return None;
            }
            s.push(if v.is_positive() { 1 } else { -1 });
        }
        Some(s)
    };
    let mut seen = vec![0u32; pts.len()];
    let mut witness = None;
    for c in &res.cells {
        let mut w = 0;
        for &m in &c.members {
            if m >= pts.len() || sign(m).as_ref() != Some(&c.signs) {
                witness = Some(format!("point {m} in cell {:?}", c.signs));
                continue;
            }
            seen[m] += 1;
            w += pts[m].weight;
        }
        if w != c.weight {
            witness = Some(format!("cell {:?} weight {} != {w}", c.signs, c.weight));
        }
    }
    let mut bw = 0;
    for &b in &res.boundary {
        if b >= pts.len() || sign(b).is_some() {
            witness = Some(format!("boundary point {b}"));
            continue;
        }
        seen[b] += 1;
        bw += pts[b].weight;
    }
    if bw != res.boundary_weight {
        witness = Some(format!("boundary weight {} != {bw}", res.boundary_weight));
    }
    if let Some(i) = seen.iter().position(|&k| k != 1) {
        witness = Some(format!("point {i} listed {} times", seen[i]));
    }
    rep.checks.push(check("point_partition.cells", witness.is_none(), res.cells.len(), "", witness));

    let degree: u32 = res.factors.iter().map(|f| f.degree().unwrap_or(0)).sum();
    // deg <= c_deg * r^(1/d), compared in integers.
    let d = res.dim as u32;
    let pass = degree == res.degree && (degree as u128).pow(d) <= (c_deg as u128).pow(d) * res.r as u128;
    rep.checks.push(check("point_partition.degree", pass, degree, format!("{c_deg}*{}^(1/{d})", res.r), Some(format!("degree {}", res.degree))));
}

fn elimination_consistency(res: &EliminationResult, n: usize, rep: &mut VerificationReport) {
    let g = &res.graph;
    let mut pos = vec![usize::MAX; g.nodes.len()];
    let mut ok = res.order.len() == g.nodes.len();
    for (i, &v) in res.order.iter().enumerate() {
        if v >= pos.len() || pos[v] != usize::MAX {
            ok = false;
            break;
        }
        pos[v] = i;
    }
    let bad = g.edges.iter().find(|&&(a, b)| a >= pos.len() || b >= pos.len() || pos[a] >= pos[b]);
    rep.checks.push(check(
        "depth.topological_order",
        ok && bad.is_none(),
        res.order.len(),
        g.nodes.len(),
        Some(bad.map_or("order is not a permutation".into(), |e| format!("edge {e:?}"))),
    ));
    let mut by_kind = BTreeMap::new();
    for c in &res.cuts {
        *by_kind.entry(c.kind).or_insert(0) += 1;
    }
    let counts = res.cut_count == res.cuts.len()
        && res.pieces == n + res.cuts.len()
        && res.edges == g.edges.len()
        && res.n == n
        && by_kind == res.cuts_by_kind;
    rep.checks.push(check("depth.counts", counts, res.cut_count, res.cuts.len(), Some("summary counts disagree".into())));
}
