//! Run configuration: command-line flags overlaid by an optional JSON config file.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use linsofic::rational::{self, Rational};
use linsofic::{AlgebraSpec, FieldSpec};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Order {
    Structured,
    RandomFirst,
}

/// Flags shared by every command. Each command reads the ones it needs.
#[derive(Args, Debug, Default)]
pub struct Flags {
    /// JSON config file; its keys override flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Algebra as JSON, e.g. '{"kind":"laurent","rank":2}'
    #[arg(long)]
    pub algebra: Option<String>,
    /// gf:p or q
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Rational p/q
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Size of the built-in candidate window
    #[arg(long)]
    pub n: Option<usize>,
    /// Quotient parameter: the group is (Z/m)^r or the Heisenberg group mod m
    #[arg(long)]
    pub m: Option<usize>,
    /// Degree cap of a quotient representation (default 2d)
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub exhaustive: bool,
    /// Build from a window that fails the invariance precondition
    #[arg(long)]
    pub skip_invariance: bool,
    /// Add wall-clock time to the report
    #[arg(long)]
    pub timing: bool,
    /// Map file (a map, or a report containing one)
    #[arg(long)]
    pub map: Option<PathBuf>,
    /// Second map file for `conjugate`
    #[arg(long)]
    pub map_b: Option<PathBuf>,
    /// Følner window file
    #[arg(long)]
    pub window: Option<PathBuf>,
    /// Tile words as JSON, e.g. '[[0],[1]]'
    #[arg(long)]
    pub tile: Option<String>,
    /// Amplification targets
    #[arg(long, value_delimiter = ',')]
    pub targets: Option<Vec<usize>>,
    /// Operator sizes AxB for `lld verify`
    #[arg(long)]
    pub dims: Option<String>,
    /// Random combinations or families to test
    #[arg(long)]
    pub samples: Option<u64>,
    /// Root-vector candidate order
    #[arg(long, value_enum)]
    pub order: Option<Order>,
}

/// The merged configuration, echoed in every report.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub algebra: Option<AlgebraSpec>,
    pub field: Option<FieldSpec>,
    pub d: Option<usize>,
    #[serde(default, with = "rational::serde_opt_str")]
    pub epsilon: Option<Rational>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub cap: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub exhaustive: Option<bool>,
    pub skip_invariance: Option<bool>,
    pub timing: Option<bool>,
    pub map: Option<PathBuf>,
    pub map_b: Option<PathBuf>,
    pub window: Option<PathBuf>,
    pub tile: Option<Vec<linsofic::BasisWord>>,
    pub targets: Option<Vec<usize>>,
    pub dims: Option<String>,
    pub samples: Option<u64>,
    pub order: Option<Order>,
}

fn flag_error(name: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("--{name}: {e}"))
}

impl RunConfig {
    /// Flags first, then every key present in the config file replaces its flag.
    pub fn load(flags: &Flags) -> Result<Self, CliError> {
        let from_flags = RunConfig {
            algebra: flags
                .algebra
                .as_deref()
                .map(serde_json::from_str)
                .transpose()
                .map_err(|e| flag_error("algebra", e))?,
            field: flags.field.as_deref().map(str::parse).transpose().map_err(|e| flag_error("field", e))?,
            d: flags.d,
            epsilon: flags
                .epsilon
                .as_deref()
                .map(rational::parse_ratio)
                .transpose()
                .map_err(|e| flag_error("epsilon", e))?,
            n: flags.n,
            m: flags.m,
            cap: flags.cap,
            seed: flags.seed,
            out: flags.out.clone(),
            exhaustive: flags.exhaustive.then_some(true),
            skip_invariance: flags.skip_invariance.then_some(true),
            timing: flags.timing.then_some(true),
            map: flags.map.clone(),
            map_b: flags.map_b.clone(),
            window: flags.window.clone(),
            tile: flags.tile.as_deref().map(serde_json::from_str).transpose().map_err(|e| flag_error("tile", e))?,
            targets: flags.targets.clone(),
            dims: flags.dims.clone(),
            samples: flags.samples,
            order: flags.order,
        };
        let Some(path) = &flags.config else {
            return Ok(from_flags);
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        let overlay: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let Value::Object(overlay) = overlay else {
            return Err(CliError::Config(format!("{}: config must be a JSON object", path.display())));
        };
        // Validates names and types of the file's keys on their own.
        serde_json::from_value::<RunConfig>(Value::Object(overlay.clone()))
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut merged = serde_json::to_value(&from_flags).map_err(CliError::Json)?;
        for (k, v) in overlay {
            merged[k] = v;
        }
        serde_json::from_value(merged).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn algebra(&self) -> AlgebraSpec {
        self.algebra.clone().unwrap_or(AlgebraSpec::Polynomial { vars: 1 })
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn flag(v: Option<bool>) -> bool {
        v.unwrap_or(false)
    }

    pub fn require<T: Clone>(value: &Option<T>, name: &str) -> Result<T, CliError> {
        value.clone().ok_or_else(|| CliError::Config(format!("missing required setting `{name}`")))
    }
}
