use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use flatlands_cli::{check, generate, parse_kind, verify, CliError, ColoringDocument, GenMode, VerifyMode, EXIT_INPUT};

/// Finite-geometry target colorings: recognize, verify and generate.
///
/// Geometries are given as KIND R Q, where KIND is PG or AG, R is the rank
/// (one more than the dimension) and Q the field order. Set
/// FLATLANDS_THREADS to cap the worker threads.
#[derive(Parser)]
#[command(name = "flatlands", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a coloring document is a target. Exit 0 for a target,
    /// 1 for a non-target, 2 for bad input.
    Check {
        /// Document path; standard input when omitted or "-".
        file: Option<PathBuf>,
    },
    /// Compare recognition with the forbidden search over many colorings.
    /// Exit 0 iff they agree everywhere.
    #[command(group(ArgGroup::new("mode").required(true).args(["exhaustive", "sample"])))]
    Verify {
        kind: String,
        r: u32,
        q: u32,
        /// Every coloring (at most 2^25).
        #[arg(long)]
        exhaustive: bool,
        /// This many seeded random colorings.
        #[arg(long, value_name = "N")]
        sample: Option<u64>,
        #[arg(long, default_value_t = 0, requires = "sample")]
        seed: u64,
        /// Also print a JSON record.
        #[arg(long)]
        json: bool,
    },
    /// Print a seeded coloring document.
    #[command(group(ArgGroup::new("what").required(true).args(["target", "random"])))]
    Gen {
        kind: String,
        r: u32,
        q: u32,
        /// A target built along a random chain of flats.
        #[arg(long)]
        target: bool,
        /// A uniformly random coloring.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read_document(file: Option<PathBuf>) -> Result<ColoringDocument, CliError> {
    let text = match file {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)?,
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    ColoringDocument::parse(&text)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Check { file } => check(&read_document(file)?, &mut out),
        Command::Verify { kind, r, q, exhaustive: _, sample, seed, json } => {
            let mode = match sample {
                Some(n) => VerifyMode::Sample { n, seed },
                None => VerifyMode::Exhaustive,
            };
            verify(parse_kind(&kind)?, r, q, mode, json, &mut out)
        }
        Command::Gen { kind, r, q, target, random: _, seed } => {
            let mode = if target { GenMode::Target } else { GenMode::Random };
            let doc = generate(parse_kind(&kind)?, r, q, mode, seed)?;
            out.write_all(doc.to_toml().as_bytes())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
