//! Job descriptions and their JSON input schema.

use std::path::Path;

use apfact::factorize::Factorization;
use apfact::symbol::{self, Classification, DeclaredSpectrum};
use apfact::{ApPoly, Frequency, TriangularSymbol};
use serde::{Deserialize, Serialize};

use crate::report::Report;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Classify,
    Solve,
    Factorize,
    Verify,
    Suite,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobOptions {
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Marks the input as an APW symbol, which gives negative verdicts
    /// "only if" strength.
    #[serde(default)]
    pub apw: bool,
    #[serde(default, rename = "nu", skip_serializing_if = "Option::is_none")]
    pub nu_override: Option<Frequency>,
    #[serde(default)]
    pub output: OutputFormat,
    #[serde(default)]
    pub seed: u64,
}

fn default_tol() -> f64 {
    1e-10
}

impl Default for JobOptions {
    fn default() -> Self {
        JobOptions { tol: default_tol(), apw: false, nu_override: None, output: OutputFormat::Json, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobSpec {
    pub command: Command,
    /// Absent only for `suite`.
    pub symbol: Option<TriangularSymbol>,
    pub options: JobOptions,
    /// The factorization to re-check under `verify`.
    pub factorization: Option<Factorization>,
}

/// Command-line settings that take precedence over the input file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub command: Option<Command>,
    pub tol: Option<f64>,
    pub apw: bool,
    pub nu: Option<Frequency>,
    pub output: Option<OutputFormat>,
    pub seed: Option<u64>,
}

impl Overrides {
    fn apply(&self, opts: &mut JobOptions) {
        if let Some(tol) = self.tol {
            opts.tol = tol;
        }
        opts.apw |= self.apw;
        if self.nu.is_some() {
            opts.nu_override = self.nu;
        }
        if let Some(output) = self.output {
            opts.output = output;
        }
        if let Some(seed) = self.seed {
            opts.seed = seed;
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJob {
    #[serde(default)]
    command: Option<Command>,
    lambda: Frequency,
    g: ApPoly,
    #[serde(default)]
    declared_gaps: Option<DeclaredSpectrum>,
    #[serde(default)]
    options: Option<JobOptions>,
    #[serde(default)]
    factorization: Option<Factorization>,
}

/// Deserializes `text`, reporting the line and the failing field path.
fn deserialize<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        CliError::Parse { line: inner.line(), column: inner.column(), field, message: inner.to_string() }
    })
}

/// A job from JSON text. Two shapes are accepted: a job
/// (`lambda`, `g`, optional `command`, `declared_gaps`, `options`,
/// `factorization`), or a report previously written by this tool, whose
/// symbol and factorization become a `verify` job.
pub fn parse_input(text: &str, overrides: &Overrides) -> Result<JobSpec, CliError> {
    let value: serde_json::Value = deserialize(text)?;
    let is_report = value.get("outcome").is_some();
    let mut job = if is_report {
        let report: Report = deserialize(text)?;
        JobSpec {
            command: Command::Verify,
            factorization: report.factorization().cloned(),
            symbol: report.symbol,
            options: report.options,
        }
    } else {
        let raw: RawJob = deserialize(text)?;
        let symbol = match raw.declared_gaps {
            Some(d) => TriangularSymbol::with_declarations(raw.lambda, raw.g, d),
            None => TriangularSymbol::new(raw.lambda, raw.g),
        }
        .map_err(|e| CliError::Validation(e.to_string()))?;
        let command =
            raw.command.or(overrides.command).ok_or_else(|| CliError::Validation("no command given".into()))?;
        JobSpec {
            command,
            symbol: Some(symbol),
            options: raw.options.unwrap_or_default(),
            factorization: raw.factorization,
        }
    };
    if let Some(c) = overrides.command {
        job.command = c;
    }
    overrides.apply(&mut job.options);
    job.validate()?;
    Ok(job)
}

/// Reads `path`, or standard input for `None` and `-`.
pub fn read_input(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) if p != Path::new("-") => {
            std::fs::read_to_string(p).map_err(|source| CliError::Io { path: p.display().to_string(), source })
        }
        _ => {
            std::io::read_to_string(std::io::stdin()).map_err(|source| CliError::Io { path: "<stdin>".into(), source })
        }
    }
}

impl JobSpec {
    /// A `suite` job, which needs no symbol.
    pub fn suite(options: JobOptions) -> Self {
        JobSpec { command: Command::Suite, symbol: None, options, factorization: None }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Validation(m));
        if !(self.options.tol.is_finite() && self.options.tol > 0.0) {
            return bad(format!("tol must be positive, got {}", self.options.tol));
        }
        if self.command == Command::Suite {
            return Ok(());
        }
        let Some(sym) = &self.symbol else {
            return bad(format!("{:?} needs a symbol", self.command));
        };
        if self.command == Command::Verify && self.factorization.is_none() {
            return bad("verify needs a factorization".into());
        }
        if let (Some(nu), Ok(Classification::Member(m))) = (self.options.nu_override, symbol::classify(sym)) {
            if nu < m.nu_min || nu > m.nu_max {
                return bad(format!("nu = {nu} lies outside [{}, {}]", m.nu_min, m.nu_max));
            }
        }
        Ok(())
    }
}
