//! `amenable`: command-line front end for amenable-core.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use amenable_core::Error;
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "amenable", version, about = "Følner sets, harem matchings and paradoxical decompositions of numbered groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// free:<k> | zd:<d> | cyclic:<m> | lamplighter | redundant-z
    #[arg(long)]
    group: String,
    /// Oracle steps before giving up with UNKNOWN.
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    #[arg(long)]
    json: bool,
    /// Write the certificate or report here as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search for an n-Følner set with respect to D.
    FolnerSearch {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        d: String,
        #[arg(long)]
        n: u64,
    },
    /// Least size of an n-Følner set with respect to D.
    FolnerFunction {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        d: String,
        #[arg(long)]
        n: u64,
    },
    /// The n-th set of the computable Følner sequence.
    FolnerSeq {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: u64,
    },
    /// Reiter defects of a function given as JSON, and a Følner level set.
    ReiterCheck {
        #[command(flatten)]
        common: Common,
        /// `{support:[codes], values:{code:"p/q"}}`
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        d: String,
        #[arg(long)]
        n: u64,
    },
    /// Decide n-invariance of a Reiter function in a c.e. group.
    Kappa {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        d: String,
        #[arg(long)]
        n: u64,
    },
    /// Decide x·y = z from Følner sets alone.
    WpFromFolner {
        #[command(flatten)]
        common: Common,
        /// Three elements `x,y,z`.
        #[arg(long)]
        triple: String,
        /// `search` (any computable group) or `box` (zd only).
        #[arg(long, default_value = "search")]
        oracle: String,
    },
    /// Run the back-and-forth matching on Γ_K for a few steps.
    HaremDemo {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: String,
        #[arg(long, default_value_t = 3)]
        steps: u64,
        /// Partners per left vertex.
        #[arg(long, default_value_t = 1)]
        mult: u64,
        /// Witness h(n) = slope·n + offset.
        #[arg(long, default_value_t = 1)]
        slope: u64,
        #[arg(long, default_value_t = 0)]
        offset: u64,
    },
    /// Build a paradoxical decomposition from a witness K0.
    Paradox {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k0: String,
        #[arg(long)]
        n: u64,
        /// Resolve and check codes 0..count.
        #[arg(long)]
        verify: Option<u64>,
        /// `left,right`: constant matching radii instead of the witness radii.
        #[arg(long)]
        fixed_radius: Option<String>,
    },
    /// Re-check a decomposition report, or the first-letter decomposition of free:2.
    ParadoxVerify {
        #[command(flatten)]
        common: Common,
        /// Report written by `paradox --verify .. --out`.
        #[arg(long, conflicts_with = "verify")]
        input: Option<PathBuf>,
        /// Check the first-letter decomposition on codes 0..count.
        #[arg(long)]
        verify: Option<u64>,
    },
    /// Decide whether K witnesses paradoxicality.
    Witness {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: String,
        /// Also look for an n-Følner set refuting (K, n).
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, default_value_t = 8)]
        size_bound: usize,
    },
    /// Restrict an (n|K|)-Følner set to an n-Følner set inside ⟨K⟩.
    RestrictFolner {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: String,
        #[arg(long)]
        n: u64,
        /// The (n|K|)-Følner set; searched for when absent.
        #[arg(long)]
        f: Option<String>,
    },
}

pub const EXIT_UNKNOWN: u8 = 2;
pub const EXIT_PRECONDITION: u8 = 3;
pub const EXIT_MALFORMED: u8 = 4;

fn error_exit(e: &Error) -> u8 {
    match e {
        Error::MalformedSpec(_)
        | Error::MalformedLiteral { .. }
        | Error::InvalidArgument(_)
        | Error::NonPositiveValue { .. }
        | Error::InvalidPartition(_)
        | Error::EmptySupport
        | Error::EmptySet => EXIT_MALFORMED,
        _ => EXIT_PRECONDITION,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_MALFORMED } else { 0 });
        }
    };
    let json = cli.command.common().json;
    match commands::run(cli.command) {
        Ok(report) => {
            report.print(json);
            ExitCode::from(report.exit)
        }
        Err(commands::Failure::Core(e)) => {
            eprintln!("error: {e}");
            if json {
                println!("{}", serde_json::json!({ "status": "ERROR", "message": e.to_string() }));
            }
            ExitCode::from(error_exit(&e))
        }
        Err(commands::Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_MALFORMED)
        }
    }
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::FolnerSearch { common, .. }
            | Command::FolnerFunction { common, .. }
            | Command::FolnerSeq { common, .. }
            | Command::ReiterCheck { common, .. }
            | Command::Kappa { common, .. }
            | Command::WpFromFolner { common, .. }
            | Command::HaremDemo { common, .. }
            | Command::Paradox { common, .. }
            | Command::ParadoxVerify { common, .. }
            | Command::Witness { common, .. }
            | Command::RestrictFolner { common, .. } => common,
        }
    }
}
