//! Command-line frontend.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::align::{ClusteringPair, UniversePolicy};
use crate::contrib::ContributionMode;
use crate::error::Error;
use crate::gnmi::{gnmi, GnmiConfig};
use crate::meanf1::{mean_f1, F1Variant};
use crate::model::{load_cnl, Clustering, ParseOptions};
use crate::nmi::{nmi_exact, Normalization};
use crate::omega::{omega, omega_soft};
use crate::synth::generate_synthetic;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_PARSE: i32 = 4;
pub const EXIT_UNIVERSE: i32 = 5;
pub const EXIT_DEGENERATE: i32 = 6;

#[derive(Debug, Parser)]
#[command(
    name = "clustereval",
    version,
    about = "Evaluate overlapping and multi-resolution clusterings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score a candidate clustering against a ground truth.
    Eval(EvalArgs),
    /// Write a seeded synthetic clustering in CNL format.
    Generate(GenerateArgs),
    /// Write the bundled sample clusterings into a directory.
    Corpus(CorpusArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Omega,
    OmegaSoft,
    F1a,
    F1h,
    F1p,
    Nmi,
    Gnmi,
}

impl Metric {
    pub const ALL: [Metric; 7] = [
        Metric::Omega,
        Metric::OmegaSoft,
        Metric::F1a,
        Metric::F1h,
        Metric::F1p,
        Metric::Nmi,
        Metric::Gnmi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Omega => "omega",
            Metric::OmegaSoft => "omega-soft",
            Metric::F1a => "f1a",
            Metric::F1h => "f1h",
            Metric::F1p => "f1p",
            Metric::Nmi => "nmi",
            Metric::Gnmi => "gnmi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UniverseArg {
    Strict,
    Intersect,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Ground-truth clustering (CNL).
    pub gt: PathBuf,
    /// Candidate clustering (CNL).
    pub cand: PathBuf,
    /// Comma-separated metrics; all by default.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub metrics: Vec<Metric>,
    /// Shared nodes split their membership between clusters.
    #[arg(long, conflicts_with = "multires")]
    pub ovp: bool,
    /// Shared nodes fully belong to every containing cluster (default).
    #[arg(long)]
    pub multires: bool,
    /// How to treat nodes present in only one clustering.
    #[arg(long, value_enum, default_value_t = UniverseArg::Strict)]
    pub universe: UniverseArg,
    /// Admissible GNMI error.
    #[arg(long, default_value_t = 0.01)]
    pub rerr: f64,
    /// GNMI risk (one minus confidence).
    #[arg(long, default_value_t = 0.01)]
    pub risk: f64,
    /// GNMI random seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for Omega and GNMI.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Drop repeated node ids within a line instead of failing.
    #[arg(long)]
    pub dedup: bool,
    /// Print a JSON object instead of tab-separated lines.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub nodes: usize,
    #[arg(long)]
    pub clusters: usize,
    /// Average number of clusters per node.
    #[arg(long, default_value_t = 1.0)]
    pub membership: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Target directory, created if missing.
    pub dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Output {
    Plain,
    Json,
}

/// A fully resolved evaluation request.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub gt_path: PathBuf,
    pub cand_path: PathBuf,
    pub metrics: Vec<Metric>,
    pub mode: ContributionMode,
    pub universe_policy: UniversePolicy,
    pub parse: ParseOptions,
    pub gnmi: GnmiConfig,
    pub workers: usize,
    pub output: Output,
}

impl From<&EvalArgs> for RunSpec {
    fn from(a: &EvalArgs) -> Self {
        Self {
            gt_path: a.gt.clone(),
            cand_path: a.cand.clone(),
            metrics: if a.metrics.is_empty() {
                Metric::ALL.to_vec()
            } else {
                a.metrics.clone()
            },
            mode: if a.ovp {
                ContributionMode::Overlapping
            } else {
                ContributionMode::MultiResolution
            },
            universe_policy: match a.universe {
                UniverseArg::Strict => UniversePolicy::Strict,
                UniverseArg::Intersect => UniversePolicy::Intersect,
            },
            parse: ParseOptions {
                dedup_members: a.dedup,
            },
            gnmi: GnmiConfig {
                rerr: a.rerr,
                rrisk: a.risk,
                seed: a.seed,
                ..GnmiConfig::default()
            },
            workers: a.workers.max(1),
            output: if a.json { Output::Json } else { Output::Plain },
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Io(PathBuf, std::io::Error),
    Input(PathBuf, Error),
    Eval(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        let e = match self {
            CliError::Io(..) => return EXIT_IO,
            CliError::Input(_, e) | CliError::Eval(e) => e,
        };
        match e {
            Error::InvalidToken { .. }
            | Error::DuplicateMember { .. }
            | Error::EmptyClustering
            | Error::EmptyCluster { .. } => EXIT_PARSE,
            Error::UniverseMismatch { .. } => EXIT_UNIVERSE,
            Error::Degenerate(_) | Error::SaturatedExpectation => EXIT_DEGENERATE,
            Error::InvalidParameter(_) => EXIT_USAGE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Input(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Eval(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

/// One evaluated metric.
#[derive(Debug, Clone, Serialize)]
pub struct MetricReport {
    #[serde(skip)]
    pub metric: Option<Metric>,
    pub value: f64,
    pub converged: bool,
    /// Sampled events (GNMI only).
    pub events: Option<u64>,
    /// Random seed (GNMI only).
    pub seed: Option<u64>,
    pub elapsed_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

fn load(path: &Path, opts: ParseOptions) -> Result<Clustering, CliError> {
    load_cnl(path, opts)
        .map_err(|e| CliError::Io(path.to_path_buf(), e))?
        .map_err(|e| CliError::Input(path.to_path_buf(), e))
}

/// Evaluates every requested metric in order.
pub fn run(spec: &RunSpec) -> Result<Vec<MetricReport>, CliError> {
    let gt = load(&spec.gt_path, spec.parse)?;
    let cand = load(&spec.cand_path, spec.parse)?;
    let pair = ClusteringPair::aligned(&gt, &cand, spec.universe_policy).map_err(CliError::Eval)?;
    let mut out = Vec::with_capacity(spec.metrics.len());
    for &m in &spec.metrics {
        let start = Instant::now();
        let mut report = MetricReport {
            metric: Some(m),
            value: 0.0,
            converged: true,
            events: None,
            seed: None,
            elapsed_ms: 0.0,
            diagnostic: None,
        };
        report.value = match m {
            Metric::Omega => omega(&pair, spec.workers).map_err(CliError::Eval)?.value,
            Metric::OmegaSoft => {
                omega_soft(&pair, spec.workers)
                    .map_err(CliError::Eval)?
                    .value
            }
            Metric::F1a => mean_f1(&pair, F1Variant::F1a, spec.mode),
            Metric::F1h => mean_f1(&pair, F1Variant::F1h, spec.mode),
            Metric::F1p => mean_f1(&pair, F1Variant::F1p, spec.mode),
            Metric::Nmi => nmi_exact(&pair, Normalization::Max).map_err(CliError::Eval)?,
            Metric::Gnmi => {
                let r = gnmi(&pair, &spec.gnmi, spec.workers).map_err(CliError::Eval)?;
                report.converged = r.converged;
                report.events = Some(r.events);
                report.seed = Some(spec.gnmi.seed);
                report.diagnostic = r.diagnostic;
                r.value
            }
        };
        report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
        out.push(report);
    }
    Ok(out)
}

/// Renders reports in the requested format.
pub fn render(reports: &[MetricReport], output: Output) -> String {
    match output {
        Output::Plain => reports
            .iter()
            .map(|r| format!("{}\t{:.6}\n", r.metric.map_or("?", Metric::name), r.value))
            .collect(),
        Output::Json => {
            let map: serde_json::Map<String, serde_json::Value> = reports
                .iter()
                .map(|r| {
                    (
                        r.metric.map_or("?", Metric::name).to_string(),
                        serde_json::to_value(r).expect("report serializes"),
                    )
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&map).expect("json");
            s.push('\n');
            s
        }
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(p.to_path_buf(), e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e)),
    }
}

fn write_corpus(dir: &Path) -> Result<(), CliError> {
    for s in crate::corpus::all() {
        let d = dir.join(s.dir());
        std::fs::create_dir_all(&d).map_err(|e| CliError::Io(d.clone(), e))?;
        for (name, text) in [("gt.cnl", s.gt), ("low.cnl", s.low), ("high.cnl", s.high)] {
            write_out(Some(&d.join(name)), text)?;
        }
    }
    Ok(())
}

/// Runs a parsed command line and returns the process exit code.
pub fn execute(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Eval(args) => {
            let spec = RunSpec::from(&args);
            run(&spec).and_then(|reports| {
                for r in &reports {
                    if let Some(d) = &r.diagnostic {
                        eprintln!("warning: {}: {d}", r.metric.map_or("?", Metric::name));
                    }
                }
                write_out(None, &render(&reports, spec.output))
            })
        }
        Command::Generate(g) => generate_synthetic(g.nodes, g.clusters, g.membership, g.seed)
            .map_err(CliError::Eval)
            .and_then(|c| write_out(g.output.as_deref(), &c.to_cnl())),
        Command::Corpus(c) => write_corpus(&c.dir),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
