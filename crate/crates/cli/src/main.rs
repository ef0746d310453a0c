use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use relcr::json::{field, to_string_indent, usize_from_json};
use relcr_cli::commands::{self, EXIT_INPUT, EXIT_INTERNAL};
use relcr_cli::corpus;
use relcr_cli::scenario::{parse_k, parse_seeds, read_json, Certificate, Mode, Scenario};
use serde_json::Value;

/// Relative complete reducibility of matrix groups, decided in exact arithmetic.
///
/// Exit codes: 0 RelCR, 1 not RelCR, 2 inconclusive, 3 invalid input, 4 internal error.
/// RELCR_THREADS caps the number of worker threads.
#[derive(Parser)]
#[command(name = "relcr", version)]
struct Cli {
    /// Indent width of the JSON report; 0 prints it on one line.
    #[arg(long, global = true, default_value_t = 2)]
    json_indent: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a scenario file.
    Check {
        scenario: PathBuf,
        /// definition, minimal, levi, crosscheck or auto (overrides the file).
        #[arg(long)]
        mode: Option<String>,
        /// Maximum size of the subspace pool.
        #[arg(long)]
        pool_cap: Option<usize>,
        /// Largest complement family (in parameters) searched exactly.
        #[arg(long)]
        elim_cap: Option<usize>,
        /// JSON file with a list of seed vectors for the pool.
        #[arg(long)]
        seeds: Option<PathBuf>,
    },
    /// Enumerate the flags of a torus (or the G2 torus) given as `{"ambient_dim", "k"}`.
    Flags {
        file: PathBuf,
        /// Only the minimal flags.
        #[arg(long)]
        minimal: bool,
    },
    /// Verify a certificate of opposite pairs; exit 0 if accepted, 1 if not.
    Verify { certificate: PathBuf },
    /// Run the golden corpus; exit 0 when every selected item passes.
    Corpus {
        /// Run only items whose name contains this text or that carry this tag.
        #[arg(long)]
        filter: Option<String>,
        /// Read the corpus from this directory instead of the built-in copy.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("RELCR_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| anyhow!("RELCR_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn run(cli: Cli) -> Result<(Value, i32)> {
    configure_threads()?;
    match cli.command {
        Command::Check {
            scenario,
            mode,
            pool_cap,
            elim_cap,
            seeds,
        } => {
            let v = read_json(&scenario)?;
            let mut s = Scenario::from_json(&v).with_context(|| format!("invalid scenario {}", scenario.display()))?;
            if let Some(m) = mode {
                s.mode = Mode::parse(&m)?;
            }
            if let Some(c) = pool_cap {
                s.options.pool_cap = c;
            }
            if let Some(c) = elim_cap {
                s.options.elim_cap = c;
            }
            if let Some(path) = seeds {
                s.options.seeds = Some(parse_seeds(&read_json(&path)?, s.ambient_dim)?);
            }
            commands::check(&s)
        }
        Command::Flags { file, minimal } => {
            let v = read_json(&file)?;
            let n = usize_from_json(&v, "ambient_dim")?;
            let (k, _) = parse_k(field(&v, "k")?, n).context("K")?;
            Ok((commands::flags(&k, minimal)?, 0))
        }
        Command::Verify { certificate } => {
            let v = read_json(&certificate)?;
            let c = Certificate::from_json(&v)
                .with_context(|| format!("invalid certificate {}", certificate.display()))?;
            commands::verify(&c)
        }
        Command::Corpus { filter, dir } => {
            let items = match dir {
                Some(d) => corpus::from_dir(&d)?,
                None => corpus::embedded()?,
            };
            let (summary, ok) = corpus::run(&items, filter.as_deref());
            Ok((summary, if ok { 0 } else { 1 }))
        }
    }
}

fn main() -> ExitCode {
    // clap's own usage-error code (2) would read as "inconclusive"
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    let indent = cli.json_indent;
    let code = match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok((report, code))) => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{}", to_string_indent(&report, indent)) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => EXIT_INTERNAL,
                _ => code,
            }
        }
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            EXIT_INPUT
        }
        Err(_) => EXIT_INTERNAL,
    };
    ExitCode::from(code as u8)
}
