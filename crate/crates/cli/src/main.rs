//! `loopfact`: build SU(2) loops from root subgroup coordinates, factor
//! them, and solve the factorization back for the coordinates.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use loopfact::Error;

use crate::config::ConfigArgs;

#[derive(Debug, Parser)]
#[command(name = "loopfact", version, about = "Factorization of SU(2) loops")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: ConfigArgs,
    /// Write the JSON result here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Assemble the loop and its triangular factorization from coordinates.
    Forward {
        /// Coordinates JSON. Without it, coordinates are sampled from --seed.
        coords: Option<PathBuf>,
    },
    /// Birkhoff and triangular factorizations of a loop.
    Factor { input: PathBuf },
    /// Recover the coordinates of a loop.
    Solve { input: PathBuf },
    /// Seeded forward/solve trials with an error summary.
    Roundtrip {
        /// Include wall-clock timings (the report is then not reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Run the exact checks over oracle fixture files or directories.
    Verify {
        /// Defaults to `fixtures/oracle`.
        paths: Vec<PathBuf>,
    },
}

/// A failure with its exit code and a JSON description for stderr.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub body: Value,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: 2, body: json!({"error": "Input", "message": message.into()}) }
    }

    /// Oracle mismatch, with the report that shows it.
    pub fn mismatch(report: Value) -> Self {
        CliError { code: 5, body: report }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        let (code, kind, extra) = match &e {
            Error::NotTopStratum { condition } => (
                3,
                "NotTopStratum",
                // JSON has no infinity; a singular section reports null.
                json!({"condition_estimate": condition, "singular": condition.is_infinite()}),
            ),
            Error::NoTriangularFactorization { modulus } => {
                (4, "NoTriangularFactorization", json!({"g0_11_modulus": modulus}))
            }
            Error::MismatchAt { n, .. } => (5, "MismatchAt", json!({"n": n})),
            Error::Input(_) => (2, "Input", Value::Null),
            Error::ZeroConstantTerm { .. } => (1, "ZeroConstantTerm", Value::Null),
            Error::NonzeroConstant { .. } => (1, "NonzeroConstant", Value::Null),
            Error::WrongOrientation { .. } => (2, "WrongOrientation", Value::Null),
            Error::GridTooSmall { .. } => (2, "GridTooSmall", Value::Null),
            Error::NonInvertibleCorner => (1, "NonInvertibleCorner", Value::Null),
            Error::NotUnitary { discrepancy } => (1, "NotUnitary", json!({"discrepancy": discrepancy})),
            Error::IrrationalNormalizer { index } => (2, "IrrationalNormalizer", json!({"index": index})),
        };
        let mut body = json!({"error": kind, "message": message});
        if let Value::Object(m) = extra {
            body.as_object_mut().unwrap().extend(m);
        }
        CliError { code, body }
    }
}

fn emit(value: &Value, output: Option<&PathBuf>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("JSON values always serialize") + "\n";
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<Value, CliError> {
    match &cli.command {
        Command::Forward { coords } => commands::forward(coords.as_deref(), &cli.config),
        Command::Factor { input } => commands::factor(input, &cli.config),
        Command::Solve { input } => commands::solve(input, &cli.config),
        Command::Roundtrip { timings } => commands::roundtrip(&cli.config, *timings),
        Command::Verify { paths } => commands::verify(paths, &cli.config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|v| emit(&v, cli.output.as_ref()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // A failing oracle run still produces its full report.
            if e.code == 5 && e.body.get("checks").is_some() {
                let _ = emit(&e.body, cli.output.as_ref());
                eprintln!("oracle mismatch");
            } else {
                eprintln!("{}", e.body);
            }
            ExitCode::from(e.code)
        }
    }
}
