//! `linsofic`: build, certify, tile and conjugate linear sofic approximations.
//!
//! Exit status: 0 when every verified property holds, 1 when a run completed
//! but refuted something (the report is still written), 2 on input errors.

mod commands;
mod config;
mod error;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use linsofic::{FieldSpec, PrimeField, Rationals};
use serde_json::json;

use commands::{Command, MapFiles, Outcome};
use config::{Flags, RunConfig};
use error::CliError;

#[derive(Parser)]
#[command(name = "linsofic", version, about = "Linear sofic approximations over exact fields")]
struct Cli {
    #[command(subcommand)]
    command: Top,
}

#[derive(Subcommand)]
enum Top {
    /// Truncated multiplication on a Følner window
    Build(Flags),
    /// Certify a map as a d-approximation
    Check(Flags),
    /// Greedy monotiling by root vectors
    Tile(Flags),
    /// Conjugate one map onto another
    Conjugate(Flags),
    /// Tensor with identities and pad with zeros
    Amplify(Flags),
    /// Regular representation of a finite quotient
    QuotientRep(Flags),
    /// Low-rank combinations of operator families
    Lld {
        #[command(subcommand)]
        action: LldAction,
    },
    /// End-to-end demonstrations
    Demo {
        #[command(subcommand)]
        action: DemoAction,
    },
}

#[derive(Subcommand)]
enum LldAction {
    /// Sweep operator families against the low-rank bounds
    Verify(Flags),
}

#[derive(Subcommand)]
enum DemoAction {
    /// Conjugate a Følner approximation onto an amplified true representation
    WeakStability(Flags),
}

fn execute(cmd: Command, flags: &Flags) -> Result<bool, CliError> {
    let start = Instant::now();
    let cfg = RunConfig::load(flags)?;
    let maps = MapFiles::load(&cfg)?;
    let field = cfg.field.or(maps.field()).unwrap_or(FieldSpec::Prime(2));
    let Outcome { result, ok } = match field {
        FieldSpec::Prime(p) => commands::run(cmd, &cfg, &PrimeField::new(p)?, &maps)?,
        FieldSpec::Rationals => commands::run(cmd, &cfg, &Rationals, &maps)?,
    };
    let mut report = json!({
        "command": cmd.name(),
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
        "status": if ok { "ok" } else { "refuted" },
        "result": result,
    });
    if RunConfig::flag(cfg.timing) {
        report["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
    }
    let text = serde_json::to_string_pretty(&report)? + "\n";
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(path.display().to_string(), e))?,
        None => print!("{text}"),
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, flags) = match &cli.command {
        Top::Build(f) => (Command::Build, f),
        Top::Check(f) => (Command::Check, f),
        Top::Tile(f) => (Command::Tile, f),
        Top::Conjugate(f) => (Command::Conjugate, f),
        Top::Amplify(f) => (Command::Amplify, f),
        Top::QuotientRep(f) => (Command::QuotientRep, f),
        Top::Lld { action: LldAction::Verify(f) } => (Command::LldVerify, f),
        Top::Demo { action: DemoAction::WeakStability(f) } => (Command::DemoWeakStability, f),
    };
    match execute(cmd, flags) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
