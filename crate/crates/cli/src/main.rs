//! `aqcube`: validate coefficient systems, compute cohomology and decide lifting
//! obstructions from JSON input documents.

mod commands;
mod load;
mod schema;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid: {0}")]
    Validation(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Parse { .. } | CliError::Io { .. } => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::Parse { .. } => "parse",
            CliError::Io { .. } => "io",
        }
    }
}

/// Exit codes: 0 success or LIFTS, 1 OBSTRUCTED, 2 invalid input, 3 unreadable input.
#[derive(Parser)]
#[command(name = "aqcube", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the base, the grading and functoriality of the coefficient system.
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Cohomology of the cochain complex built from the document.
    Cohomology {
        file: PathBuf,
        /// A single degree; all degrees of the complex otherwise.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "all")]
        degree: Option<i64>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether the obstruction cocycle of the document vanishes.
    Obstruct {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Cell counts, interval counts and the top mapping space of [1]^n.
    CubeInfo {
        n: usize,
        #[arg(long)]
        json: bool,
    },
}

fn read(path: &PathBuf) -> Result<load::Loaded, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    load::load(load::parse(&text)?)
}

fn run(command: &Command) -> Result<commands::Report, CliError> {
    match command {
        Command::Validate { file, .. } => commands::validate(&read(file)?),
        Command::Cohomology { file, degree, .. } => commands::cohomology(&read(file)?, *degree),
        Command::Obstruct { file, .. } => commands::obstruct(&read(file)?),
        Command::CubeInfo { n, .. } => commands::cube_info(*n),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let as_json = match &cli.command {
        Command::Validate { json, .. }
        | Command::Cohomology { json, .. }
        | Command::Obstruct { json, .. }
        | Command::CubeInfo { json, .. } => *json,
    };
    match run(&cli.command) {
        Ok(report) => {
            if as_json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("serializable"));
            } else {
                print!("{}", report.text);
            }
            ExitCode::from(report.exit)
        }
        Err(e) => {
            if as_json {
                let body = json!({"error": {"kind": e.kind(), "message": e.to_string()}});
                println!("{}", serde_json::to_string_pretty(&body).expect("serializable"));
            } else {
                eprintln!("aqcube: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
