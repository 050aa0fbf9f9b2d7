//! `acaf`: verify connections, curvature and BGG operators of ACAF structures.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on invalid input.

mod emit;
mod problem;
mod verbs;

use clap::Parser;
use emit::Format;
use problem::{load_problem, InputError, Mode, Overrides};
use std::path::PathBuf;
use std::process::ExitCode;
use verbs::Verb;

#[derive(Debug, Parser)]
#[command(name = "acaf", version, about = "Exact verification of ACAF constructions")]
struct Cli {
    #[arg(value_enum)]
    verb: Verb,
    /// TOML problem file; defaults describe the flat chart in dimension 6.
    problem: Option<PathBuf>,
    /// Problem given inline instead of as a file.
    #[arg(long, conflicts_with = "problem")]
    inline: Option<String>,
    /// Real dimension (even, at least 4).
    #[arg(long)]
    n: Option<usize>,
    /// Polynomial degree of generated test sections.
    #[arg(long)]
    degree: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include per-check timings (makes output run-dependent).
    #[arg(long)]
    timings: bool,
}

fn execute(cli: &Cli) -> Result<bool, InputError> {
    let text = match (&cli.problem, &cli.inline) {
        (Some(path), _) => std::fs::read_to_string(path).map_err(|source| InputError::Read { path: path.clone(), source })?,
        (None, Some(t)) => t.clone(),
        (None, None) => String::new(),
    };
    let over = Overrides { n: cli.n, degree: cli.degree, seed: cli.seed, mode: cli.mode };
    let spec = load_problem(&text, &over)?;
    let rep = verbs::run(cli.verb, &spec)?;
    let out = emit::render(&rep, cli.format, cli.timings);
    match &cli.out {
        Some(path) => std::fs::write(path, out).map_err(|source| InputError::Write { path: path.clone(), source })?,
        None => print!("{out}"),
    }
    Ok(rep.all_passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
