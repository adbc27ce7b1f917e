//! Command-line front end.
//!
//! Exit codes: 0 success or resolving, 1 negative verdict (not resolving,
//! failed certification), 2 usage or input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thiserror::Error;

use crate::ccs::{self, CcsError};
use crate::certify::{self, UpperBoundOptions};
use crate::formats::{self, Format, FormatError};
use crate::graph::{DistanceOracle, Graph, Vertex};
use crate::resolve::{self, LandmarkSet, ResolveError, Variant};
use crate::solver::{self, Budget, Method, SolveError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Default seed for randomized tooling.
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Parser)]
#[command(
    name = "ccs",
    version,
    about = "Crystal cubic carbon graphs and their (edge) metric dimension"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate CCS(n).
    Gen(GenArgs),
    /// Check whether a landmark set resolves a graph.
    Verify(VerifyArgs),
    /// Find a minimum (or heuristic) resolving set.
    Solve(SolveArgs),
    /// Run the certification suite.
    Certify(CertifyArgs),
    /// Generate a seeded random connected graph.
    Random(RandomArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(short = 'n', value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Raise the generation guard.
    #[arg(long, default_value_t = ccs::DEFAULT_MAX_LEVEL)]
    pub max_level: u32,
}

#[derive(Debug, Args)]
pub struct GraphInput {
    /// Graph file (json, edgelist, graph6 or dimacs).
    pub graph: PathBuf,
    /// Input format; guessed from the extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: GraphInput,
    /// Landmark ids, separated by commas or spaces.
    #[arg(long, conflicts_with = "landmarks_file", required_unless_present = "landmarks_file")]
    pub landmarks: Option<String>,
    #[arg(long)]
    pub landmarks_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "edge")]
    pub variant: VariantArg,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long, value_enum, default_value = "edge")]
    pub variant: VariantArg,
    #[arg(long, conflicts_with = "greedy")]
    pub exact: bool,
    #[arg(long)]
    pub greedy: bool,
    /// Search node limit for --exact.
    #[arg(long)]
    pub node_budget: Option<u64>,
    /// Time limit in seconds for --exact.
    #[arg(long)]
    pub time_budget: Option<f64>,
    /// Candidate limit for --exact.
    #[arg(long, default_value_t = solver::DEFAULT_EXACT_MAX_CANDIDATES)]
    pub max_candidates: usize,
    /// Write the distinguishing matrix in set-cover text format.
    #[arg(long)]
    pub export_matrix: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub n_max: u32,
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = ccs::DEFAULT_MAX_LEVEL)]
    pub max_level: u32,
    /// Diagnostic: drop the landmark at this position in every upper-bound check.
    #[arg(long)]
    pub drop_landmark: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RandomArgs {
    /// Vertex count.
    #[arg(short = 'n', value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Probability of each non-tree edge.
    #[arg(long, default_value_t = 0.3)]
    pub edge_prob: f64,
    #[arg(long, value_enum, default_value = "edgelist")]
    pub format: Format,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum VariantArg {
    Vertex,
    Edge,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Vertex => Variant::Vertex,
            VariantArg::Edge => Variant::Edge,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error("bad landmark list: {0}")]
    Landmarks(String),
    #[error(transparent)]
    Resolve(#[from] ResolveError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Ccs(#[from] CcsError),
    #[error("{0}")]
    Usage(String),
    #[error("write failed: {0}")]
    Output(#[from] std::io::Error),
}

/// Parses arguments and runs, returning the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match run(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Gen(args) => cmd_gen(args, out),
        Command::Verify(args) => cmd_verify(args, out),
        Command::Solve(args) => cmd_solve(args, out),
        Command::Certify(args) => cmd_certify(args, out),
        Command::Random(args) => cmd_random(args, out),
    }
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn cmd_gen(args: GenArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let ccs = ccs::generate_ccs_guarded(args.n, args.max_level)?;
    write_output(args.output.as_deref(), &formats::emit_ccs(args.format, &ccs), out)?;
    Ok(EXIT_OK)
}

fn cmd_random(args: RandomArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if !(0.0..=1.0).contains(&args.edge_prob) {
        return Err(CliError::Usage(format!(
            "--edge-prob {} outside [0, 1]",
            args.edge_prob
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let g = Graph::random_connected(args.n as usize, args.edge_prob, &mut rng);
    write_output(args.output.as_deref(), &formats::emit(args.format, &g), out)?;
    Ok(EXIT_OK)
}

pub fn read_graph(input: &GraphInput) -> Result<Graph, CliError> {
    let path = &input.graph;
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    let format = input.format.unwrap_or_else(|| Format::from_path(path));
    formats::parse(format, &text)
        .map(|p| p.graph)
        .map_err(|source| CliError::Format {
            path: path.clone(),
            source,
        })
}

/// Landmark ids separated by commas and/or whitespace.
pub fn parse_landmarks(text: &str, vertex_count: usize) -> Result<LandmarkSet, CliError> {
    let ids = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<Vertex>()
                .map_err(|_| CliError::Landmarks(format!("{s:?} is not a vertex id")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LandmarkSet::new(ids, vertex_count)?)
}

fn cmd_verify(args: VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let g = read_graph(&args.input)?;
    let text = match (&args.landmarks, &args.landmarks_file) {
        (Some(list), _) => list.clone(),
        (None, Some(path)) => fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?,
        (None, None) => unreachable!("clap requires one landmark source"),
    };
    let landmarks = parse_landmarks(&text, g.vertex_count())?;
    let variant: Variant = args.variant.into();
    let oracle = DistanceOracle::from_sources(&g, landmarks.as_slice()).expect("landmarks validated");
    let verdict = resolve::is_resolving(&g, &oracle, variant, &landmarks)?;

    if args.json {
        let doc = json!({ "variant": variant, "landmarks": landmarks, "verdict": verdict });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializes"))?;
    } else if verdict.resolving {
        writeln!(
            out,
            "resolving: {} landmarks distinguish every {variant}",
            landmarks.len()
        )?;
    } else {
        let (a, b) = verdict.witness.expect("witness present when not resolving");
        writeln!(
            out,
            "not resolving: {a} and {b} share {:?}",
            verdict.shared.unwrap_or_default()
        )?;
    }
    Ok(if verdict.resolving { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_solve(args: SolveArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let g = read_graph(&args.input)?;
    let variant: Variant = args.variant.into();
    let method = if args.greedy { Method::Greedy } else { Method::Exact };
    let budget = Budget {
        node_limit: args.node_budget,
        time_limit: args.time_budget.map(Duration::from_secs_f64),
        max_candidates: args.max_candidates,
    };
    if method == Method::Exact && g.vertex_count() > budget.max_candidates.min(64) {
        return Err(SolveError::TooLarge {
            candidates: g.vertex_count(),
            limit: budget.max_candidates.min(64),
        }
        .into());
    }
    let oracle = DistanceOracle::all_pairs(&g);
    if let Some(path) = &args.export_matrix {
        let matrix = solver::build_matrix(&oracle, &g, variant)?;
        fs::write(path, matrix.to_dimacs()).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    let result = solver::solve(&g, &oracle, variant, method, &budget)?;
    // solve() only returns sets that passed the representation check
    let verified = true;

    if args.json {
        let doc = json!({ "method": if method == Method::Exact { "exact" } else { "greedy" }, "size": result.landmarks.len(), "verified": verified, "result": result });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializes"))?;
    } else {
        writeln!(out, "variant: {variant}")?;
        writeln!(
            out,
            "method: {}",
            if method == Method::Exact { "exact" } else { "greedy" }
        )?;
        writeln!(out, "size: {}", result.landmarks.len())?;
        writeln!(out, "landmarks: {}", result.landmarks)?;
        writeln!(out, "optimal: {}", result.optimal)?;
        writeln!(out, "verified: {verified}")?;
        writeln!(out, "nodes: {}", result.nodes_explored)?;
    }
    Ok(EXIT_OK)
}

fn cmd_certify(args: CertifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut reports = certify::certify_all_guarded(args.n_max, args.max_level)?;
    if let Some(i) = args.drop_landmark {
        for report in reports.iter_mut().filter(|r| r.claim == "upper_bound") {
            let n = report.n.expect("upper bound reports carry n");
            *report = certify::certify_upper_bound_with(
                n,
                UpperBoundOptions {
                    drop_landmark: Some(i),
                    max_level: Some(args.max_level),
                },
            )?;
        }
    }
    let text = if args.json {
        certify::to_json(&reports)
    } else {
        certify::to_text(&reports)
    };
    out.write_all(text.as_bytes())?;
    Ok(if reports.iter().all(|r| r.passed()) {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with_args(std::iter::once("ccs").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn landmark_lists() {
        assert_eq!(parse_landmarks("0, 1 3", 8).unwrap().as_slice(), &[0, 1, 3]);
        assert!(matches!(parse_landmarks("0,x", 8), Err(CliError::Landmarks(_))));
        assert!(matches!(parse_landmarks("9", 8), Err(CliError::Resolve(_))));
        assert!(parse_landmarks("", 8).unwrap().is_empty());
    }

    #[test]
    fn gen_edgelist_and_usage_errors() {
        let (code, out, _) = run_args(&["gen", "-n", "1", "--format", "edgelist"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 12);
        assert_eq!(run_args(&["gen", "-n", "0"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["certify", "--n-max", "0"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["gen", "-n", "7"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn random_is_seeded() {
        let a = run_args(&["random", "-n", "9", "--seed", "7"]).1;
        let b = run_args(&["random", "-n", "9", "--seed", "7"]).1;
        assert_eq!(a, b);
        let g = formats::parse_edgelist(&a).unwrap();
        assert!(g.is_connected());
        assert_eq!(run_args(&["random", "-n", "4", "--edge-prob", "2"]).0, EXIT_USAGE);
    }
}
