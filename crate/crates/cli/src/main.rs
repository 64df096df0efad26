use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use apfact::Frequency;
use apfact_cli::{
    emit_report, parse_input, read_input, run, CliError, Command, JobOptions, JobSpec, OutputFormat, Overrides,
};
use clap::Parser;

/// Classify, solve and factorize triangular almost periodic symbols.
///
/// Exit status: 0 on success, 2 when the verdict is Unknown, 1 on errors
/// or failed checks.
#[derive(Parser, Debug)]
#[command(name = "apfact", version)]
struct Args {
    /// Job file (JSON); `-` or absent reads standard input. Not needed for `suite`.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    command: Option<Command>,
    /// Construction and verification tolerance [default: 1e-10]
    #[arg(long)]
    tol: Option<f64>,
    /// Treat the symbol as APW, so negative verdicts are "only if".
    #[arg(long)]
    apw: bool,
    /// Override the parameter nu, as NUM/DEN.
    #[arg(long, value_parser = parse_frequency)]
    nu: Option<Frequency>,
    #[arg(long, value_enum)]
    output: Option<OutputFormat>,
    /// Seed for residual sampling.
    #[arg(long)]
    seed: Option<u64>,
}

fn parse_frequency(s: &str) -> Result<Frequency, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn job(args: &Args) -> Result<JobSpec, CliError> {
    let overrides = Overrides {
        command: args.command,
        tol: args.tol,
        apw: args.apw,
        nu: args.nu,
        output: args.output,
        seed: args.seed,
    };
    if args.command == Some(Command::Suite) && args.input.is_none() {
        let mut options = JobOptions::default();
        options.output = args.output.unwrap_or_default();
        options.tol = args.tol.unwrap_or(options.tol);
        let job = JobSpec::suite(options);
        job.validate()?;
        return Ok(job);
    }
    parse_input(&read_input(args.input.as_deref())?, &overrides)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = job(&args).and_then(|job| Ok((run(&job)?, job.options.output)));
    match result {
        Ok((report, format)) => {
            let bytes = emit_report(&report, format);
            if let Err(e) = std::io::stdout().write_all(&bytes) {
                eprintln!("apfact: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            eprintln!("apfact: {e}");
            ExitCode::from(1)
        }
    }
}
