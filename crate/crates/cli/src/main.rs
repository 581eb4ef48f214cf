use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

use commands::{Ctx, InputError, Outcome};

#[derive(Parser, Debug)]
#[command(name = "gmodel", version, about = "Groupoid models and Cuntz-Pimsner relations for discrete correspondences")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Truncation depth (default 6, or the document's value)
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Length cap for inverse semigroup elements (default 3)
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Word-length cap for presented groups (default 4)
    #[arg(long, global = true)]
    wordcap: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized audits
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check the base groupoid, the correspondence and the regular set
    Validate { document: PathBuf },
    /// List finite paths up to the depth
    Paths { document: PathBuf },
    /// Truncated path spaces, their coherence and the algebras A_[0,depth]
    Omega {
        document: PathBuf,
        /// Random triples for the algebra audit
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Points of the truncated boundary space
    Boundary { document: PathBuf },
    /// Multiply inverse semigroup elements, or audit against the rewriting oracles
    Isg {
        document: PathBuf,
        /// Elements such as `a * v * b^`; multiplied left to right
        elements: Vec<String>,
    },
    /// Evaluate a germ, or compare two germs, at a point
    Germ {
        document: PathBuf,
        s: String,
        t: Option<String>,
        /// Base point
        #[arg(long)]
        at: String,
    },
    /// Enumerate the groupoid model and check its axioms
    Model {
        document: PathBuf,
        /// Print every arrow
        #[arg(long)]
        list: bool,
        /// Also check the restriction to R
        #[arg(long)]
        restrict: bool,
    },
    /// Hausdorffness, condition L and cofinality
    Diagnose { document: PathBuf },
    /// Toeplitz relations on the truncated Fock space
    Fock {
        document: PathBuf,
        /// Print a generator as sparse triplets
        #[arg(long)]
        export: Option<String>,
    },
    /// Cuntz-Pimsner covariance defects
    Ck {
        document: PathBuf,
        /// Use the boundary space instead of the Fock space
        #[arg(long)]
        boundary: bool,
        /// Only this vertex
        #[arg(long)]
        vertex: Option<String>,
    },
    /// Compare the germ and generator descriptions of the boundary representation
    Crosscheck { document: PathBuf },
    /// Validate the document's action
    ActionValidate { document: PathBuf },
    /// The map from the action to the truncated boundary
    UniversalMap { document: PathBuf },
    /// Count equivariant maps into the truncated path space
    Uniqueness {
        document: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u128,
    },
}

fn run(cli: &Cli) -> Result<Outcome, InputError> {
    let o = &cli.opts;
    let load = |p: &PathBuf| Ctx::load(p, o.depth, o.cap, o.wordcap, o.seed);
    match &cli.cmd {
        Cmd::Validate { document } => commands::validate(&load(document)?),
        Cmd::Paths { document } => commands::paths(&load(document)?),
        Cmd::Omega { document, samples } => commands::omega(&load(document)?, *samples),
        Cmd::Boundary { document } => commands::boundary(&load(document)?),
        Cmd::Isg { document, elements } => commands::isg(&load(document)?, elements),
        Cmd::Germ { document, s, t, at } => commands::germ(&load(document)?, s, t.as_deref(), at),
        Cmd::Model { document, list, restrict } => commands::model(&load(document)?, *list, *restrict),
        Cmd::Diagnose { document } => commands::diagnose(&load(document)?),
        Cmd::Fock { document, export } => commands::fock(&load(document)?, export.as_deref()),
        Cmd::Ck { document, boundary, vertex } => commands::ck(&load(document)?, *boundary, vertex.as_deref()),
        Cmd::Crosscheck { document } => commands::crosscheck(&load(document)?),
        Cmd::ActionValidate { document } => commands::action_validate(&load(document)?),
        Cmd::UniversalMap { document } => commands::universal_map(&load(document)?),
        Cmd::Uniqueness { document, budget } => commands::uniqueness(&load(document)?, *budget),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = match cli.opts.format {
                Format::Text => out.text.iter().map(|l| format!("{l}\n")).collect(),
                Format::Machine => gmodel::report::write_records(&out.records),
            };
            // a closed pipe (e.g. `| head`) is not an error
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
