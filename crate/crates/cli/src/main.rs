//! hopset: build, verify, and benchmark (beta, eps)-hopsets.
//!
//! Exit codes: 0 all verifications passed, 1 a verification failed,
//! 2 usage error. HOPSET_THREADS caps the worker pool.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use hopset_core::bench::{self, SweepSpec};
use hopset_core::builder::{
    build, build_folklore, build_shortcut_set, BuildAux, BuildConfig, Hopset, Regime,
};
use hopset_core::gen::{generate, Family};
use hopset_core::verify::{check_distance_preservation, check_hop_stretch, VerifyMode};
use hopset_core::witness::extract_witness_path;
use hopset_core::WeightedDigraph;

#[derive(Parser)]
#[command(name = "hopset", version, about = "(beta, eps)-hopset construction and certification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph in the text format (n m header, then u v w lines)
    Gen(GenArgs),
    /// Build a hopset and write it as JSON
    Build(BuildArgs),
    /// Verify a hopset JSON against the (beta, eps) contract
    Verify(VerifyArgs),
    /// Beta-sweep benchmark emitting CSV rows
    Bench(BenchArgs),
    /// Assemble the explicit witness walk for one (s, t) pair
    Witness(WitnessArgs),
}

#[derive(Args)]
struct GenArgs {
    /// random-digraph | layered-dag | cycle-chain | path-noise
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    /// maximum edge weight
    #[arg(long, default_value_t = 100)]
    w: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    graph: PathBuf,
    /// hopbound; defaults to ceil(20 log2 n)
    #[arg(long)]
    beta: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// auto | small | large
    #[arg(long, default_value = "auto", value_parser = parse_regime)]
    regime: Regime,
    /// vertex sampling constant of the hierarchy
    #[arg(long, default_value_t = 24.0)]
    cv: f64,
    /// path sampling constant of the hierarchy
    #[arg(long, default_value_t = 24.0)]
    cp: f64,
    /// sampling constant of the large-beta reduction
    #[arg(long, default_value_t = 1.0)]
    cq: f64,
    #[arg(long)]
    out: PathBuf,
    /// also write the witness aux file (small regime only)
    #[arg(long)]
    aux: Option<PathBuf>,
    /// build the folklore baseline instead of the nice-path pipeline
    #[arg(long, default_value_t = false)]
    folklore: bool,
    /// build the SCC-star + condensation shortcut baseline instead
    #[arg(long, default_value_t = false)]
    shortcut: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    hopset: PathBuf,
    /// hopbound to certify; defaults to the value stored in the hopset
    #[arg(long)]
    beta: Option<usize>,
    /// stretch to certify; defaults to the value stored in the hopset
    #[arg(long)]
    eps: Option<f64>,
    /// force full n^2 pair verification regardless of size
    #[arg(long, default_value_t = false)]
    full: bool,
    /// verify exactly this many sampled pairs
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 100)]
    w: u64,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    /// comma-separated hopbound grid, e.g. 160,320,640
    #[arg(long, value_delimiter = ',', required = true)]
    betas: Vec<usize>,
    /// comma-separated build seeds
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    seeds: Vec<u64>,
    #[arg(long, default_value_t = 0)]
    graph_seed: u64,
    /// include folklore baseline rows
    #[arg(long, default_value_t = true)]
    folklore: bool,
    /// output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    aux: PathBuf,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    t: usize,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
}

fn parse_regime(s: &str) -> Result<Regime, String> {
    s.parse()
}

fn load_graph(path: &PathBuf) -> Result<WeightedDigraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    WeightedDigraph::parse_text(&text).with_context(|| format!("parsing {}", path.display()))
}

/// stdout write that tolerates a closed pipe (e.g. `hopset ... | head`)
fn emit(content: &str) -> Result<()> {
    use std::io::Write;
    match std::io::stdout().write_all(content.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => other.context("writing stdout"),
    }
}

fn write_or_print(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, content).with_context(|| format!("writing {}", path.display()))
        }
        None => emit(content),
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen(a) => {
            let g = generate(a.family, a.n, a.m, a.w, a.seed)?;
            write_or_print(&a.out, &g.to_text())?;
            Ok(true)
        }
        Command::Build(a) => {
            if a.folklore && a.shortcut {
                bail!("--folklore and --shortcut are mutually exclusive");
            }
            let g = load_graph(&a.graph)?;
            let beta = a.beta.unwrap_or_else(|| BuildConfig::default_beta(g.n()));
            let (hopset, aux) = if a.folklore {
                (build_folklore(&g, beta, a.seed, 1.0), None)
            } else if a.shortcut {
                (build_shortcut_set(&g, beta, a.seed, 1.0), None)
            } else {
                let cfg = BuildConfig {
                    beta,
                    eps: a.eps,
                    seed: a.seed,
                    c_v: a.cv,
                    c_p: a.cp,
                    c_q: a.cq,
                    regime: a.regime,
                };
                build(&g, &cfg)?
            };
            fs::write(&a.out, hopset.to_json())
                .with_context(|| format!("writing {}", a.out.display()))?;
            eprintln!(
                "built {} hopset: {} edges in {} ms ({:?})",
                hopset.regime,
                hopset.total_edges(),
                hopset.runtime_ms,
                hopset.counts_by_kind()
            );
            if let Some(aux_path) = a.aux {
                match aux {
                    Some(aux) => fs::write(&aux_path, aux.to_json())
                        .with_context(|| format!("writing {}", aux_path.display()))?,
                    None => bail!("--aux requires the small regime (paper pipeline)"),
                }
            }
            Ok(true)
        }
        Command::Verify(a) => {
            let g = load_graph(&a.graph)?;
            let text = fs::read_to_string(&a.hopset)
                .with_context(|| format!("reading {}", a.hopset.display()))?;
            let hopset = Hopset::from_json(&text)?;
            let beta = a.beta.unwrap_or(hopset.beta);
            let eps = a.eps.unwrap_or(hopset.eps);
            let mode = if a.full {
                VerifyMode::Full
            } else if let Some(k) = a.sample {
                VerifyMode::Sample(k)
            } else {
                VerifyMode::Auto
            };
            let preservation = check_distance_preservation(&g, &hopset.edges, mode, a.seed);
            let report = check_hop_stretch(&g, &hopset.edges, beta, eps, mode, a.seed);
            let ok = preservation.passed() && report.passed();
            eprintln!(
                "verify: {} pairs ({}), max_stretch {:.4}, achieved_hopbound {}, preservation {}: {}",
                report.pairs_checked,
                report.mode,
                report.max_stretch,
                report.achieved_hopbound,
                preservation.passed(),
                if ok { "PASS" } else { "FAIL" }
            );
            if let Some(path) = a.report {
                fs::write(&path, report.to_json())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(ok)
        }
        Command::Bench(a) => {
            let spec = SweepSpec {
                family: a.family,
                n: a.n,
                m: a.m,
                w_max: a.w,
                eps: a.eps,
                beta_grid: a.betas,
                seeds: a.seeds,
                graph_seed: a.graph_seed,
                include_folklore: a.folklore,
            };
            let rows = bench::sweep(&spec)?;
            let ok = rows.iter().all(|r| r.verified);
            write_or_print(&a.out, &bench::to_csv(&rows))?;
            Ok(ok)
        }
        Command::Witness(a) => {
            let g = load_graph(&a.graph)?;
            let text = fs::read_to_string(&a.aux)
                .with_context(|| format!("reading {}", a.aux.display()))?;
            let dist = g.apsp();
            let aux = BuildAux::from_json(&text, &dist)?;
            // rebuild the hopset from the pinned config for realizability
            let (hopset, _) = build(&g, &aux.config)?;
            let outcome = extract_witness_path(&g, &hopset, &aux, &dist, a.s, a.t)?;
            let mut text = outcome.summary();
            text.push('\n');
            for e in &outcome.events {
                text.push_str(&format!("  {e}\n"));
            }
            emit(&text)?;
            Ok(outcome.realizable && outcome.hop_ok && outcome.stretch_ok)
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    if let Ok(threads) = std::env::var("HOPSET_THREADS") {
        if let Ok(threads) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
