//! `dendro`: tree-valued cocycles from the command line.
//!
//! Every subcommand prints a report (JSON by default) and exits with
//! 0 on success, 1 on a failed check, 2 on unreadable input and 3 when
//! the two elementarity oracles disagree.

mod commands;
mod gen;
mod report;

use std::fs;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use dendro_core::dendrite::DEFAULT_AUTOMORPHISM_BOUND;
use serde_json::json;

use commands::{Method, Stop};
use report::{InputDigest, Report, Status};

#[derive(Parser)]
#[command(name = "dendro", version, about = "Median cocycles and elementarity of tree-valued cocycles")]
struct Cli {
    /// Seed for sampled checks and generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Largest tree (in vertices) whose automorphisms are enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_AUTOMORPHISM_BOUND)]
    max_search: usize,
    /// Add wall-clock timings to the report.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Search,
    Lp,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    StarZ2,
    PathZ2,
    RandomCocycle,
    RandomBoundary,
    BadCocycle,
    TreePath,
    TreeStar,
    TreeRandom,
    TreeWazewski,
}

#[derive(Subcommand)]
enum Command {
    /// Check tree and instance documents against every invariant.
    Validate {
        #[arg(required = true)]
        paths: Vec<String>,
    },
    /// Point classes, ends, branch points and the center of a tree.
    Analyze { path: String },
    /// The median cocycle at three points, with its norm.
    Omega {
        path: String,
        #[arg(long, num_args = 3, required = true, value_names = ["P", "Q", "R"])]
        points: Vec<String>,
        #[arg(long, default_value = "1")]
        p_norm: String,
    },
    /// Coboundary and equivariance checks of the median cocycle.
    CocycleCheck { path: String },
    /// Decide elementarity of an instance.
    Elementarity {
        path: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
    },
    /// Minimal equivariant closed families and their hulls.
    MinimalFamilies { path: String },
    /// A basis of the invariant Bochner vectors, with norms.
    InvariantVectors {
        path: String,
        #[arg(long, default_value = "2")]
        p_norm: String,
        #[arg(long, default_value = "2")]
        q_norm: String,
    },
    /// Invariant vector, level sets, centers, elementarity certificate.
    Pipeline { path: String },
    /// Pull the median cocycle back along a boundary map.
    Pullback { path: String },
    /// Write a generated tree or instance.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Vertices (path, random), leaves (star) or degree (wazewski).
        #[arg(long, default_value_t = 5)]
        size: usize,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long)]
        out: Option<String>,
    },
}

fn run(cli: &Cli) -> Result<Option<Report>, Stop> {
    let report = match &cli.command {
        Command::Validate { paths } => commands::validate(paths)?,
        Command::Analyze { path } => commands::analyze(path, cli.max_search)?,
        Command::Omega { path, points, p_norm } => commands::omega_cmd(path, points, p_norm)?,
        Command::CocycleCheck { path } => commands::cocycle_check(path, cli.seed, cli.max_search)?,
        Command::Elementarity { path, method } => {
            let method = match method {
                MethodArg::Search => Method::Search,
                MethodArg::Lp => Method::Lp,
                MethodArg::Both => Method::Both,
            };
            commands::elementarity(path, method)?
        }
        Command::MinimalFamilies { path } => commands::minimal(path)?,
        Command::InvariantVectors { path, p_norm, q_norm } => commands::invariant_vectors(path, p_norm, q_norm)?,
        Command::Pipeline { path } => commands::pipeline(path)?,
        Command::Pullback { path } => commands::pullback(path)?,
        Command::Gen { kind, size, depth, out } => {
            let doc = gen::document(*kind, cli.seed, *size, *depth).map_err(Stop::Input)?;
            let Some(out) = out else {
                print!("{doc}");
                return Ok(None);
            };
            fs::write(out, &doc).map_err(|e| Stop::Input(format!("{out}: {e}")))?;
            let kind = kind.to_possible_value().expect("named").get_name().to_string();
            Report::new(
                "gen",
                vec![InputDigest::of(out, doc.as_bytes())],
                Status::Pass,
                json!({ "kind": kind, "seed": cli.seed, "out": out }),
            )
        }
    };
    Ok(Some(report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut report = match run(&cli) {
        Ok(None) => return ExitCode::SUCCESS,
        Ok(Some(r)) | Err(Stop::Report(r)) => r,
        Err(Stop::Input(message)) => {
            eprintln!("dendro: {message}");
            return ExitCode::from(2);
        }
    };
    if cli.timings {
        report.timings = Some(json!({ "total_ms": start.elapsed().as_secs_f64() * 1e3 }));
    }
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    let _ = std::io::stdout().write_all(text.as_bytes());
    ExitCode::from(report.exit_code())
}
