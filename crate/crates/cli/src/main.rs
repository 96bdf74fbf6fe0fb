//! `dilatation-lab`: construct the family, certify irreducibility and
//! dilatations, search small words, and re-verify written reports.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

mod cache;
mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{CommandError, Outcome};
use config::{CommandKind, Format, KRange, RawFlags, RunConfig};

#[derive(Parser)]
#[command(name = "dilatation-lab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// A single k or an inclusive range LO..HI.
    #[arg(long)]
    k: Option<KRange>,
    /// Width of dilatation intervals, as p/q, a decimal, or 1e-N.
    #[arg(long, default_value = "1e-12")]
    tol: String,
    /// Primes below this bound feed the degree sieve.
    #[arg(long, default_value_t = 200)]
    prime_bound: u64,
    /// Attach resultant-elimination traces to certificates.
    #[arg(long)]
    elimination: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Result cache directory; DILATATION_LAB_CACHE takes precedence.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Chord diagram, intersection graph, topology, matrices and characteristic polynomial.
    Construct(Common),
    /// Maximality certificates and dilatation intervals for one k or a range.
    Certify(Common),
    /// Spectral radii of short words in the twist/rotation semigroup.
    Search {
        #[command(flatten)]
        common: Common,
        /// Longest positive twist word to try.
        #[arg(long, default_value_t = 2)]
        max_len: usize,
    },
    /// Irreducibility certificate for a member of the family or any polynomial.
    Prove {
        #[command(flatten)]
        common: Common,
        /// `x^5-x^3-x^2-1` or a constant-first coefficient list `-1,0,-1,-1,0,1`.
        #[arg(long, conflicts_with = "k")]
        poly: Option<String>,
    },
    /// Re-check a JSON report or certificate written by another subcommand.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn build(command: CommandKind, c: Common, max_len: usize, k_required: bool) -> Result<RunConfig, String> {
    RunConfig::new(
        command,
        RawFlags {
            k: c.k,
            tol: c.tol,
            prime_bound: c.prime_bound,
            elimination: c.elimination,
            max_len,
            format: c.format,
            cache: c.cache,
        },
        k_required,
    )
}

fn run(cli: Cli) -> Result<Outcome, CommandError> {
    let usage = CommandError::Usage;
    match cli.command {
        Command::Construct(c) => commands::construct(&build(CommandKind::Construct, c, 0, true).map_err(usage)?),
        Command::Certify(c) => commands::certify(&build(CommandKind::Certify, c, 0, true).map_err(usage)?),
        Command::Search { common, max_len } => {
            commands::search(&build(CommandKind::Search, common, max_len, true).map_err(usage)?)
        }
        Command::Prove { common, poly } => {
            let config = build(CommandKind::Prove, common, 0, poly.is_none()).map_err(usage)?;
            commands::prove(&config, poly.as_deref())
        }
        Command::Verify { file, format } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| CommandError::Usage(format!("cannot read {}: {e}", file.display())))?;
            Ok(commands::verify(&text, format))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(outcome.output.as_bytes());
            let _ = out.flush();
            ExitCode::from(if outcome.ok { 0 } else { 1 })
        }
        Err(CommandError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CommandError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
