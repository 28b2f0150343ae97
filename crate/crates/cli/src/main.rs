use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use polypart::Params;
use polypart_cli::{bench, execute, generate, to_json, verify::verify, Baseline, BenchConfig, BenchResult, Command, Config, GenKind};

#[derive(Parser)]
#[command(name = "polypart", version, about = "Polynomial partitioning of lines in 3-space and depth-cycle elimination")]
struct Cli {
    /// Worker threads (default: all cores). Outputs do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    #[arg(long, env = "POLYPART_SEED", default_value_t = 0)]
    seed: u64,
    /// JSON file overriding the pipeline constants.
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a random or structured instance.
    Generate {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, env = "POLYPART_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partition a weighted point set into cells of bounded weight.
    PartitionPoints {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        r: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Two-stage decomposition of space adapted to a set of lines.
    PartitionLines {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "D")]
        d: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Cut lines so that the depth relation among the pieces is acyclic.
    EliminateCycles {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "D", default_value_t = 3)]
        d: u32,
        #[arg(long, default_value_t = 8)]
        n0: usize,
        /// Run the all-pairs cutting instead.
        #[arg(long, value_enum)]
        baseline: Option<Baseline>,
        #[command(flatten)]
        common: Common,
    },
    /// Check a run artifact; exits nonzero when a check fails.
    Verify {
        #[arg(long)]
        run: PathBuf,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Cut counts against the all-pairs baseline on random lines.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "64,128,256,512")]
        ns: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        #[arg(long = "D", default_value_t = 3)]
        d: u32,
        #[arg(long, default_value_t = 8)]
        n0: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(p: &PathBuf) -> Result<Vec<u8>> {
    std::fs::read(p).with_context(|| format!("reading {}", p.display()))
}

fn config(command: Command, common: &Common) -> Result<Config> {
    let params = match &common.params {
        Some(p) => serde_json::from_slice(&read(p)?).context("parsing params")?,
        None => Params::default(),
    };
    Ok(Config::new(command, common.seed, params))
}

fn main_inner(cli: Cli) -> Result<ExitCode> {
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(k).build_global()?;
    }
    let (cfg, input, out) = match cli.cmd {
        Cmd::Generate { kind, n, dim, seed, out } => {
            emit(&out, &to_json(&generate(kind, n, seed, dim)?))?;
            return Ok(ExitCode::SUCCESS);
        }
        Cmd::Verify { run, input, report } => {
            let input = input.as_ref().map(read).transpose()?;
            let rep = verify(&read(&run)?, input.as_deref());
            emit(&report, &to_json(&rep))?;
            for c in rep.failures() {
                eprintln!("FAIL {}: {}", c.name, c.witness.as_deref().unwrap_or(""));
            }
            return Ok(if rep.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
        Cmd::PartitionPoints { input, r, common } => {
            let mut cfg = config(Command::PartitionPoints, &common)?;
            cfg.r = Some(r);
            (cfg, Some(read(&input)?), common.out)
        }
        Cmd::PartitionLines { input, d, common } => {
            let mut cfg = config(Command::PartitionLines, &common)?;
            cfg.d = Some(d);
            (cfg, Some(read(&input)?), common.out)
        }
        Cmd::EliminateCycles { input, d, n0, baseline, common } => {
            let mut cfg = config(Command::EliminateCycles, &common)?;
            if baseline.is_none() {
                cfg.d = Some(d);
                cfg.n0 = Some(n0);
            }
            cfg.baseline = baseline;
            (cfg, Some(read(&input)?), common.out)
        }
        Cmd::Bench { ns, seeds, d, n0, common } => {
            let mut cfg = config(Command::Bench, &common)?;
            cfg.d = Some(d);
            cfg.n0 = Some(n0);
            cfg.bench = Some(BenchConfig { ns, seeds });
            (cfg, None, common.out)
        }
    };
    let start = std::time::Instant::now();
    let art = execute(cfg, input.as_deref())?;
    if art.config.command == Command::Bench {
        let b: BenchResult = serde_json::from_value(art.result.clone())?;
        eprint!("{}", bench::table(&b));
    }
    eprintln!("done in {:.2?}", start.elapsed());
    emit(&out, &to_json(&art))?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            let kind = e.downcast_ref::<polypart::Error>().map(|p| {
                let d = format!("{p:?}");
                d.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("").to_string()
            });
            let msg = serde_json::json!({ "error": kind.unwrap_or_else(|| "Failure".into()), "message": format!("{e:#}") });
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}
