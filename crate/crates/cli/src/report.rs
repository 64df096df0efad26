//! Running a job and the structured report it produces.

use apfact::factorize::{self, Factorization, FactorizationReport, FactorizeOptions, Verdict};
use apfact::rhsolve::{self, RhSolution};
use apfact::symbol::{self, ClassMembership, Classification, GapData};
use apfact::verify::{self, Check, VerificationReport};
use apfact::{Exec, TriangularSymbol};
use serde::{Deserialize, Serialize};

use crate::job::{Command, JobOptions, JobSpec};
use crate::suite::{self, SuiteRow};
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<TriangularSymbol>,
    pub options: JobOptions,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Classify(ClassifyOutcome),
    Solve(SolveOutcome),
    Factorize(Box<FactorizationReport>),
    Verify(VerifyOutcome),
    Suite(Vec<SuiteRow>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOutcome {
    pub gap: GapData,
    /// `None` when `g` has a zero-frequency term and no class applies.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOutcome {
    pub solution: RhSolution,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub membership: Option<ClassMembership>,
    pub verification: VerificationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub factorization: Factorization,
    pub residuals: VerificationReport,
}

impl Report {
    /// The factorization carried by a `factorize` or `verify` report.
    pub fn factorization(&self) -> Option<&Factorization> {
        match &self.outcome {
            Outcome::Factorize(r) => r.factorization.as_ref(),
            Outcome::Verify(v) => Some(&v.factorization),
            _ => None,
        }
    }

    /// 0 on success, 2 for an undecided verdict, 1 when a check failed.
    pub fn exit_code(&self) -> u8 {
        match &self.outcome {
            Outcome::Factorize(r) if r.verdict.verdict == Verdict::Unknown => 2,
            Outcome::Factorize(r) if r.residuals.as_ref().is_some_and(|v| !v.passed()) => 1,
            Outcome::Solve(s) if !s.verification.passed() => 1,
            Outcome::Verify(v) if !v.residuals.passed() => 1,
            Outcome::Suite(rows) if rows.iter().any(|r| !r.passed) => 1,
            _ => 0,
        }
    }
}

fn module_error(stage: &'static str, e: impl std::fmt::Display) -> CliError {
    CliError::Module { stage, message: e.to_string() }
}

pub fn run(job: &JobSpec) -> Result<Report, CliError> {
    let opts = job.options;
    let outcome = match (job.command, &job.symbol) {
        (Command::Suite, _) => Outcome::Suite(suite::run_suite(Exec::Parallel)),
        (_, None) => return Err(CliError::Validation(format!("{:?} needs a symbol", job.command))),
        (Command::Classify, Some(sym)) => Outcome::Classify(classify(sym)?),
        (Command::Solve, Some(sym)) => {
            let (solution, membership) =
                factorize::select_solution(sym, opts.nu_override).map_err(|e| module_error("solution", e))?;
            let verification = rhsolve::verify_solution(sym, &solution);
            Outcome::Solve(SolveOutcome { solution, membership, verification })
        }
        (Command::Factorize, Some(sym)) => {
            let fo = FactorizeOptions {
                tol: opts.tol,
                apw: opts.apw,
                nu_override: opts.nu_override,
                seed: opts.seed,
                ..FactorizeOptions::default()
            };
            Outcome::Factorize(Box::new(factorize::factorize_symbol(sym, &fo)))
        }
        (Command::Verify, Some(sym)) => {
            let fac =
                job.factorization.clone().ok_or_else(|| CliError::Validation("verify needs a factorization".into()))?;
            Outcome::Verify(recheck(sym, fac, &opts)?)
        }
    };
    Ok(Report { command: job.command, symbol: job.symbol.clone(), options: opts, outcome })
}

fn classify(sym: &TriangularSymbol) -> Result<ClassifyOutcome, CliError> {
    let gap = symbol::decompose(sym).map_err(|e| module_error("decomposition", e))?;
    let (classification, notes) = match symbol::classify(sym) {
        Ok(c) => (Some(c), Vec::new()),
        Err(e @ symbol::SymbolError::ZeroFrequencyPresent) => (None, vec![e.to_string()]),
        Err(e) => return Err(module_error("classification", e)),
    };
    Ok(ClassifyOutcome { gap, classification, notes })
}

fn recheck(sym: &TriangularSymbol, fac: Factorization, opts: &JobOptions) -> Result<VerifyOutcome, CliError> {
    let mut residuals = verify::grid_residual(sym, &fac, factorize::RECONSTRUCTION_POINTS, opts.seed, Exec::Parallel)
        .map_err(|e| module_error("reconstruction", e))?;
    let bound = opts.tol.max(fac.truncation_residual);
    residuals.checks.push(Check::new(
        "residual_within_tol",
        residuals.max_residual <= bound,
        format!("{:.3e} against {:.3e}", residuals.max_residual, bound),
    ));
    residuals.checks.extend(fac.audit(sym));
    Ok(VerifyOutcome { factorization: fac, residuals })
}
