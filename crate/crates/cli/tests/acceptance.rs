//! End-to-end acceptance criteria. Each test prints one PASS/FAIL line to
//! stderr (not captured) and then asserts.

use std::io::Write as _;
use std::process::Command as Proc;
use std::sync::OnceLock;

use rand::Rng as _;
use serde_json::Value;

use polypart::depth::{eliminate_cycles, quadratic_baseline};
use polypart::generate::{cycle_gadget, random_lines, random_points};
use polypart::geometry::{Segment3, WeightedPoint};
use polypart::oracle::{dissects, verify_decomposition, verify_elimination, verify_point_partition, VerificationReport};
use polypart::point_partition::{dissect, partition_points};
use polypart::polynomial::isolate_real_roots;
use polypart::rng::{child, from_seed};
use polypart::{Params, Rational};
use polypart_cli::bench::{slope, table, BenchResult, BenchRow, BenchSummary};
use polypart_cli::verify::verify;
use polypart_cli::{execute, partition_lines_result, to_json, Command, Config, Instance};

fn report(criterion: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "criterion {criterion} [{verdict}] {name}: {detail}");
}

fn failed_names(rep: &VerificationReport) -> Vec<String> {
    rep.failures().iter().map(|c| format!("{} ({})", c.name, c.witness.as_deref().unwrap_or(""))).collect()
}

#[test]
fn criterion_1_dissection_bound() {
    let params = Params::default();
    let mut claimed = 0;
    let mut bad = Vec::new();
    for run in 0..200u64 {
        let mut rng = child(0xd15, run);
        let degree = 1 + (run % 3) as u32;
        let nsets = rng.gen_range(1..=4);
        let sets: Vec<Vec<WeightedPoint>> = (0..nsets)
            .map(|_| {
                let size = rng.gen_range(1..=60);
                // A small box forces repeated points now and then.
                let span = rng.gen_range(3..200);
                (0..size)
                    .map(|_| {
                        let c = (0..3).map(|_| Rational::from_integer(rng.gen_range(-span..=span).into())).collect();
                        WeightedPoint::new(c, rng.gen_range(1..=5))
                    })
                    .collect()
            })
            .collect();
        let refs: Vec<Vec<&WeightedPoint>> = sets.iter().map(|s| s.iter().collect()).collect();
        let dis = dissect(&refs, 3, degree, &params, &mut rng).expect("dissect");
        for (i, s) in refs.iter().enumerate() {
            if dis.dissected[i] {
                claimed += 1;
                if !dissects(&dis.poly, s) {
                    bad.push((run, i));
                }
            }
        }
    }
    let pass = bad.is_empty() && claimed > 0;
    report(1, "dissection bound", pass, &format!("{claimed} claimed dissections over 200 runs, {} violate 7/8", bad.len()));
    assert!(pass, "{bad:?}");
}

#[test]
fn criterion_2_point_partitioning() {
    let params = Params::default();
    let (n, r) = (2000, 64u64);
    let mut failures = Vec::new();
    let mut max_deg = 0;
    for seed in 0..20 {
        let pts = random_points(n, 3, &mut from_seed(seed));
        let part = partition_points(&pts, r, &params, &mut from_seed(seed + 1), None).expect("partition");
        let rep = verify_point_partition(&part.poly.factors, &pts, r, params.c_cell);
        let deg = part.poly.degree();
        max_deg = max_deg.max(deg);
        // deg <= c_deg * r^(1/3)
        if (deg as u64).pow(3) > params.c_deg.pow(3) * r {
            failures.push(format!("seed {seed}: degree {deg}"));
        }
        failures.extend(failed_names(&rep).into_iter().map(|f| format!("seed {seed}: {f}")));
    }
    let pass = failures.is_empty();
    report(2, "point partitioning", pass, &format!("20 seeds, max degree {max_deg} (bound 16), failures {failures:?}"));
    assert!(pass);
}

struct DecompositionRun {
    report: VerificationReport,
    /// Largest number of distinct crossings of a line with the zero set,
    /// and the degree of the partitioning polynomial.
    max_crossings: usize,
    degree: u32,
}

fn decomposition_runs() -> &'static Vec<DecompositionRun> {
    static RUNS: OnceLock<Vec<DecompositionRun>> = OnceLock::new();
    RUNS.get_or_init(|| {
        let params = Params::default();
        (0..20u64)
            .map(|seed| {
                let lines = random_lines(500, &mut from_seed(seed)).unwrap();
                let inst = Instance::from_lines(&lines, None);
                let mut cfg = Config::new(Command::PartitionLines, seed, params.clone());
                cfg.d = Some(4);
                let full = partition_lines_result(&inst, &cfg).expect("decomposition");
                let segs: Vec<Segment3> = lines.into_iter().map(Segment3::full).collect();
                let report = verify_decomposition(&full, &segs, &params);
                let mut max_crossings = 0;
                for s in &segs {
                    let mut roots = Vec::new();
                    let mut inside = false;
                    for f in &full.stage1.factors {
                        let u = f.restrict_to_line(&s.line.origin, &s.line.dir).unwrap();
                        if u.is_zero() {
                            inside = true;
                            break;
                        }
                        roots.extend(isolate_real_roots(&u).unwrap());
                    }
                    if !inside {
                        roots.sort();
                        roots.dedup();
                        max_crossings = max_crossings.max(roots.len());
                    }
                }
                DecompositionRun { report, max_crossings, degree: full.stage1.degree() }
            })
            .collect()
    })
}

#[test]
fn criterion_3_first_stage_properties() {
    let mut failures = Vec::new();
    for (seed, run) in decomposition_runs().iter().enumerate() {
        for c in run.report.checks.iter().filter(|c| c.name.starts_with("stage1.") && !c.pass) {
            failures.push(format!("seed {seed}: {} ({})", c.name, c.witness.as_deref().unwrap_or("")));
        }
    }
    let pass = failures.is_empty();
    report(3, "first-stage properties", pass, &format!("n=500, D=4, 20 seeds, failures {failures:?}"));
    assert!(pass);
}

#[test]
fn criterion_4_full_decomposition() {
    let runs = decomposition_runs();
    let mut failures = Vec::new();
    let (mut max_cell, mut max_nonempty, mut max_cross) = (String::new(), 0u64, 0u64);
    for (seed, run) in runs.iter().enumerate() {
        for c in &run.report.checks {
            if !c.pass && !c.name.starts_with("stage1.") {
                failures.push(format!("seed {seed}: {} ({})", c.name, c.witness.as_deref().unwrap_or("")));
            }
            match c.name.as_str() {
                "decomposition.per_cell_bound" => max_cell = format!("{} <= {}", c.measured, c.bound),
                "decomposition.nonempty_cells" => max_nonempty = max_nonempty.max(c.measured.parse().unwrap()),
                "decomposition.boundary_crossings" => max_cross = max_cross.max(c.measured.parse().unwrap()),
                _ => {}
            }
        }
    }
    let pass = failures.is_empty();
    report(
        4,
        "full decomposition",
        pass,
        &format!("20 seeds, per-cell {max_cell}, max nonempty {max_nonempty}, max crossings {max_cross}, failures {failures:?}"),
    );
    assert!(pass);
}

struct SweepRow {
    n: usize,
    seed: u64,
    cuts: usize,
    baseline: usize,
    repairs: usize,
    depth: u32,
    report: VerificationReport,
    bezout: Vec<String>,
}

const SWEEP_NS: [usize; 4] = [32, 64, 128, 256];

fn sweep() -> &'static Vec<SweepRow> {
    static ROWS: OnceLock<Vec<SweepRow>> = OnceLock::new();
    ROWS.get_or_init(|| {
        let params = Params::default();
        let mut rows = Vec::new();
        for n in SWEEP_NS {
            for seed in 0..20u64 {
                let lines = random_lines(n, &mut from_seed(seed)).unwrap();
                let e = eliminate_cycles(&lines, 3, 8, &params, seed).expect("elimination");
                let cuts: Vec<_> = e.cuts.cuts().into_iter().map(|c| (c.line, c.t, c.kind)).collect();
                let mut report = verify_elimination(&lines, &cuts, &e.graph);
                let ordered = e.graph.topological_order().is_some();
                report.checks.push(polypart::oracle::Check {
                    name: "depth.topological_sort".into(),
                    pass: ordered,
                    measured: String::new(),
                    bound: String::new(),
                    slack: "1".into(),
                    witness: (!ordered).then(|| "sort failed".into()),
                });
                let bezout = e
                    .trace
                    .iter()
                    .filter(|t| t.max_type1 > t.degree as usize || t.max_type2 > t.type2_bound as usize)
                    .map(|t| format!("n={n} seed={seed} node size {} type1 {} type2 {}", t.size, t.max_type1, t.max_type2))
                    .collect();
                rows.push(SweepRow {
                    n,
                    seed,
                    cuts: e.cuts.len(),
                    baseline: quadratic_baseline(&lines).unwrap().len(),
                    repairs: e.repairs,
                    depth: e.trace.iter().map(|t| t.depth).max().unwrap_or(0),
                    report,
                    bezout,
                });
            }
        }
        rows
    })
}

#[test]
fn criterion_5_bezout_bounds() {
    let mut failures = Vec::new();
    let mut worst = (0, 0);
    for (seed, run) in decomposition_runs().iter().enumerate() {
        if run.max_crossings > run.degree as usize {
            failures.push(format!("decomposition seed {seed}: {} crossings, degree {}", run.max_crossings, run.degree));
        }
        worst = worst.max((run.max_crossings, run.degree as usize));
    }
    for row in sweep() {
        failures.extend(row.bezout.iter().cloned());
    }
    let pass = failures.is_empty();
    report(5, "per-line Bezout bounds", pass, &format!("max zero-set crossings {} at degree {}, failures {failures:?}", worst.0, worst.1));
    assert!(pass);
}

#[test]
fn criterion_6_depth_cycle_elimination() {
    let params = Params::default();
    let gadget = cycle_gadget(3);
    let e = eliminate_cycles(&gadget, 3, 8, &params, 0).unwrap();
    let cuts: Vec<_> = e.cuts.cuts().into_iter().map(|c| (c.line, c.t, c.kind)).collect();
    let mut failures = failed_names(&verify_elimination(&gadget, &cuts, &e.graph));
    if e.cuts.is_empty() {
        failures.push("gadget was not cut".into());
    }
    let mut repairs = 0;
    for row in sweep() {
        repairs += row.repairs;
        failures.extend(failed_names(&row.report).into_iter().map(|f| format!("n={} seed={}: {f}", row.n, row.seed)));
    }
    let pass = failures.is_empty();
    report(
        6,
        "depth-cycle elimination",
        pass,
        &format!("gadget cut {} times; 80 random runs acyclic with exact edges, {repairs} repair cuts, failures {failures:?}", e.cuts.len()),
    );
    assert!(pass);
}

#[test]
fn criterion_7_cut_count_scaling() {
    let rows = sweep();
    let mut failures = Vec::new();
    let mut max_slope: f64 = 0.0;
    for seed in 0..20u64 {
        let mine: Vec<&SweepRow> = rows.iter().filter(|r| r.seed == seed).collect();
        for w in mine.windows(2) {
            let s = slope(w[0].n, w[0].cuts, w[1].n, w[1].cuts);
            max_slope = max_slope.max(s);
        }
        for r in mine.iter().filter(|r| r.n >= 128 && r.cuts >= r.baseline) {
            failures.push(format!("seed {seed}: n={} cuts {} >= baseline {}", r.n, r.cuts, r.baseline));
        }
    }
    let bench = BenchResult {
        d: 3,
        n0: 8,
        rows: rows
            .iter()
            .map(|r| BenchRow { n: r.n, seed: r.seed, cuts: r.cuts, baseline: r.baseline, repairs: r.repairs, depth: r.depth })
            .collect(),
        summary: {
            let mut out: Vec<BenchSummary> = Vec::new();
            for n in SWEEP_NS {
                let (c, b) = rows.iter().filter(|r| r.n == n).fold((0, 0), |(c, b), r| (c + r.cuts, b + r.baseline));
                let s = out.last().map(|p| format!("{:.3}", slope(p.n, p.cuts, n, c)));
                out.push(BenchSummary { n, cuts: c, baseline: b, beats_baseline: c < b, slope: s });
            }
            out
        },
    };
    // cuts(n) is the sweep total over the 20 seeds; single seeds are only
    // reported, small n being noisy.
    for w in bench.summary.windows(2) {
        let s = slope(w[0].n, w[0].cuts, w[1].n, w[1].cuts);
        if s > 1.9 {
            failures.push(format!("slope {s:.3} from n={} to n={}", w[0].n, w[1].n));
        }
    }
    let _ = write!(std::io::stderr(), "{}", table(&bench));
    let pass = failures.is_empty();
    report(7, "cut-count scaling", pass, &format!("20 seeds, max single-seed slope {max_slope:.3} (not asserted), failures {failures:?}"));
    assert!(pass);
}

/// Every scalar leaf of a JSON value, as a JSON pointer.
fn leaves(v: &Value, path: String, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| leaves(x, format!("{path}/{k}"), out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| leaves(x, format!("{path}/{i}"), out)),
        _ => out.push(path),
    }
}

fn mutate(v: &mut Value) {
    *v = match v.take() {
        Value::Bool(b) => Value::Bool(!b),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Value::from(i + 1),
            None => Value::from(n.as_u64().unwrap().wrapping_add(1)),
        },
        Value::String(s) => match s.parse::<Rational>() {
            Ok(q) => Value::String((q + Rational::from_integer(1.into())).to_string()),
            Err(_) => Value::String(format!("{s}0")),
        },
        Value::Null => Value::from(1),
        other => other,
    };
}

#[test]
fn criterion_8_fault_injection() {
    let lines = random_lines(40, &mut from_seed(3)).unwrap();
    let line_inst = to_json(&Instance::from_lines(&lines, None));
    let pts = random_points(200, 3, &mut from_seed(4));
    let point_inst = to_json(&Instance::from_points(&pts, 3, None));
    let params = Params::default();
    let mut runs = Vec::new();
    let mut c = Config::new(Command::PartitionPoints, 5, params.clone());
    c.r = Some(16);
    runs.push((c, point_inst.clone()));
    let mut c = Config::new(Command::PartitionLines, 5, params.clone());
    c.d = Some(2);
    runs.push((c, line_inst.clone()));
    let mut c = Config::new(Command::EliminateCycles, 5, params);
    c.d = Some(3);
    c.n0 = Some(8);
    runs.push((c, line_inst));

    let mut untampered_ok = true;
    let mut artifacts = Vec::new();
    for (cfg, input) in runs {
        let art = execute(cfg, Some(input.as_bytes())).unwrap();
        let text = to_json(&art);
        untampered_ok &= verify(text.as_bytes(), Some(input.as_bytes())).passed();
        let value: Value = serde_json::from_str(&text).unwrap();
        let mut paths = Vec::new();
        leaves(&value, String::new(), &mut paths);
        artifacts.push((value, paths, input));
    }
    let mut rng = from_seed(8);
    let mut missed = Vec::new();
    let mut beyond_digest = 0;
    for k in 0..50 {
        let (value, paths, input) = &artifacts[k % artifacts.len()];
        let path = &paths[rng.gen_range(0..paths.len())];
        let mut bad = value.clone();
        mutate(bad.pointer_mut(path).unwrap());
        let rep = verify(to_json(&bad).as_bytes(), Some(input.as_bytes()));
        if rep.passed() {
            missed.push(path.clone());
        }
        if rep.failures().iter().any(|c| c.name != "artifact.digest") {
            beyond_digest += 1;
        }
    }
    let pass = untampered_ok && missed.is_empty();
    report(
        8,
        "oracle fault injection",
        pass,
        &format!("50 mutations, {} detected ({beyond_digest} also by replay or oracle checks), untampered runs verify: {untampered_ok}, missed {missed:?}", 50 - missed.len()),
    );
    assert!(pass);
}

#[test]
fn criterion_9_determinism() {
    let bin = env!("CARGO_BIN_EXE_polypart");
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let invocations: Vec<(&str, Vec<String>)> = vec![
        ("lines", vec!["generate".into(), "--kind".into(), "random-lines".into(), "--n".into(), "48".into(), "--seed".into(), "7".into()]),
        ("points", vec!["generate".into(), "--kind".into(), "random-points".into(), "--n".into(), "300".into(), "--seed".into(), "7".into()]),
        ("pp", vec!["partition-points".into(), "--input".into(), p("points.a"), "--r".into(), "16".into(), "--seed".into(), "7".into()]),
        ("pl", vec!["partition-lines".into(), "--input".into(), p("lines.a"), "--D".into(), "3".into(), "--seed".into(), "7".into()]),
        ("el", vec!["eliminate-cycles".into(), "--input".into(), p("lines.a"), "--seed".into(), "7".into()]),
        ("bl", vec!["eliminate-cycles".into(), "--input".into(), p("lines.a"), "--baseline".into(), "quadratic".into()]),
        ("bench", vec!["bench".into(), "--ns".into(), "16,32".into(), "--seed".into(), "7".into()]),
        ("verify", vec!["verify".into(), "--run".into(), p("el.a"), "--input".into(), p("lines.a")]),
    ];
    let mut differing = Vec::new();
    for (name, args) in &invocations {
        let mut outs = Vec::new();
        for (tag, threads) in [("a", "1"), ("b", "2")] {
            let out = p(&format!("{name}.{tag}"));
            let flag = if *name == "verify" { "--report" } else { "--out" };
            let status = Proc::new(bin)
                .args(args)
                .args([flag, &out, "--threads", threads])
                .env_remove("POLYPART_SEED")
                .stderr(std::process::Stdio::null())
                .status()
                .unwrap();
            assert!(status.success(), "{name} failed");
            outs.push(std::fs::read(&out).unwrap());
        }
        if outs[0] != outs[1] {
            differing.push(*name);
        }
    }
    let pass = differing.is_empty();
    report(9, "determinism", pass, &format!("{} subcommand runs repeated with 1 and 2 threads, differing {differing:?}", invocations.len()));
    assert!(pass);
}
