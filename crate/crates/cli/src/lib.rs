//! `qstoch`: command-line front end for the amplitude-space engines.
//!
//! Four subcommands, one report pipeline: each command builds a
//! [`report::Report`], which renders to markdown (default), CSV, or
//! JSON and goes to stdout or `--out`. Exit codes are part of the
//! interface:
//!
//! - 0: success; for `verify` and `turng`, every check passed
//! - 1: a verification check or certification failed
//! - 2: usage error (bad flags, malformed or out-of-range spec)
//! - 3: numerical or resource failure inside a computation
//!
//! Reports contain no timestamps, hostnames, or paths, so a command
//! rerun with identical arguments produces byte-identical output.

pub mod commands;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use qstoch::distributions::NbConvention;

use commands::tables::WhichTable;
use commands::verify::Suite;
use report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Md,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    /// P(n) = C(n+r-1, n) (1-p)^r p^n.
    Pmf,
    /// The same law with p and 1-p exchanged.
    Swapped,
}

impl From<Convention> for NbConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Pmf => NbConvention::Pmf,
            Convention::Swapped => NbConvention::Swapped,
        }
    }
}

/// Amplitude-space engines for discrete distributions: reference
/// tables, information measures, verification suites, and a certified
/// modular RNG.
#[derive(Debug, Parser)]
#[command(name = "qstoch", version, max_term_width = 80)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Md)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Decimal places for markdown and CSV cells (round-half-even).
    /// JSON always carries full precision.
    #[arg(long, global = true, default_value_t = report::DEFAULT_PRECISION,
          value_parser = clap::value_parser!(u8).range(0..=17))]
    pub precision: u8,

    /// Negative-binomial parameter convention for `--spec` and the nb
    /// table.
    #[arg(long, global = true, value_enum, default_value_t = Convention::Pmf)]
    pub nb_convention: Convention,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Modular-projection reference tables.
    Tables {
        #[arg(value_enum)]
        which: WhichTable,
        /// Projection modulus M.
        #[arg(long, default_value_t = 4)]
        modulus: u64,
    },
    /// Information measures of one distribution.
    Measures {
        /// Family spec, `family:key=value,...`;
        /// e.g. `binomial:n=10,p=0.3` or `poisson:lambda=8`.
        #[arg(long)]
        spec: String,
    },
    /// Deterministic verification suites.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Generate modular digits and certify uniformity.
    Turng {
        /// Source distribution, `family:key=value,...`.
        #[arg(long)]
        spec: String,
        /// Projection modulus M.
        #[arg(long, default_value_t = 4)]
        modulus: u64,
        /// Digits to draw.
        #[arg(long, default_value_t = 1_000_000)]
        count: u64,
        /// Generator seed.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also write the raw digit stream here (one digit per byte).
        #[arg(long, value_name = "PATH")]
        stream_out: Option<PathBuf>,
    },
}

/// A failed invocation: either the engines refused, or output could
/// not be written.
enum Failure {
    Engine(qstoch::Error),
    Io(PathBuf, std::io::Error),
}

impl From<qstoch::Error> for Failure {
    fn from(e: qstoch::Error) -> Self {
        Failure::Engine(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Engine(e) if e.is_usage() => 2,
            _ => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Engine(e) => e.to_string(),
            Failure::Io(path, e) => format!("cannot write {}: {e}", path.display()),
        }
    }
}

/// Parse `std::env::args`, run, and return the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage problems exit 2; --help and --version exit 0.
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            failure.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, Failure> {
    let convention = NbConvention::from(cli.nb_convention);
    let mut stream: Option<(PathBuf, Vec<u8>)> = None;
    let report: Report = match &cli.command {
        Command::Tables { which, modulus } => {
            commands::tables::run(*which, *modulus, convention)?
        }
        Command::Measures { spec } => commands::measures::run(spec, convention)?,
        Command::Verify { suite } => commands::verify::run(*suite)?,
        Command::Turng {
            spec,
            modulus,
            count,
            seed,
            stream_out,
        } => {
            let (report, bytes) = commands::turng::run(
                spec,
                *modulus,
                *count,
                *seed,
                convention,
                stream_out.is_some(),
            )?;
            if let (Some(path), Some(bytes)) = (stream_out, bytes) {
                stream = Some((path.clone(), bytes));
            }
            report
        }
    };

    if let Some((path, bytes)) = stream {
        std::fs::write(&path, bytes).map_err(|e| Failure::Io(path, e))?;
    }
    let rendered = match cli.format {
        Format::Md => report.render_markdown(cli.precision),
        Format::Csv => report.render_csv(cli.precision),
        Format::Json => report.render_json(),
    };
    match &cli.out {
        Some(path) => {
            std::fs::write(path, rendered).map_err(|e| Failure::Io(path.clone(), e))?;
        }
        None => print!("{rendered}"),
    }
    Ok(if report.all_passed() { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_line_grammar_parses() {
        let cli = Cli::try_parse_from([
            "qstoch",
            "turng",
            "--spec",
            "poisson:lambda=8",
            "--modulus",
            "4",
            "--count",
            "1000000",
            "--seed",
            "1",
            "--format",
            "json",
        ])
        .unwrap();
        assert!(matches!(cli.format, Format::Json));
        match cli.command {
            Command::Turng { count, seed, .. } => {
                assert_eq!((count, seed), (1_000_000, 1));
            }
            _ => panic!("parsed the wrong subcommand"),
        }
    }

    #[test]
    fn precision_is_range_checked() {
        assert!(Cli::try_parse_from(["qstoch", "tables", "poisson", "--precision", "18"]).is_err());
        assert!(Cli::try_parse_from(["qstoch", "tables", "poisson", "--precision", "17"]).is_ok());
    }
}
