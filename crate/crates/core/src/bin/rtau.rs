use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rtau::problem::{OutputFormat, ProblemFile};
use rtau::report::{self, Report};

/// Exact recursive tau method for linear ODEs with polynomial coefficients.
#[derive(Parser)]
#[command(name = "rtau", version)]
struct Cli {
    /// Output format: `text` or `json`. Overrides the problem file's option.
    #[arg(long, global = true)]
    format: Option<OutputFormat>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Operator constants and the echelon reduction.
    Analyze { file: PathBuf },
    /// Canonical polynomials with residuals and classes up to a degree bound.
    Canonical {
        file: PathBuf,
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Solves the tau problem of the given order.
    Solve {
        file: PathBuf,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Runs the self-check suite; exits nonzero on any failure.
    Check {
        file: PathBuf,
        #[arg(long)]
        bound: Option<usize>,
    },
}

const DEFAULT_BOUND: usize = 10;

enum Failure {
    Parse(String),
    Domain(String),
}

fn load(path: &Path) -> Result<ProblemFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    ProblemFile::parse(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn domain(e: rtau::Error) -> Failure {
    Failure::Domain(e.to_string())
}

fn run(cli: &Cli) -> Result<(Report, Option<OutputFormat>), Failure> {
    let (file, report) = match &cli.command {
        Command::Analyze { file } => {
            let pf = load(file)?;
            let op = pf.diff_operator().map_err(domain)?;
            (pf, report::analyze(&op))
        }
        Command::Canonical { file, bound } => {
            let pf = load(file)?;
            let op = pf.diff_operator().map_err(domain)?;
            let bound = bound
                .or(pf.options.bound)
                .unwrap_or_else(|| DEFAULT_BOUND.max(op.profile().finite_width()));
            (pf, report::canonical(&op, bound))
        }
        Command::Solve { file, order } => {
            let pf = load(file)?;
            let problem = pf.to_problem().map_err(domain)?;
            let n = order
                .or(pf.options.order)
                .ok_or_else(|| Failure::Parse("no order given: pass --order or set `order` in [options]".into()))?;
            let r = report::solve(&problem, n).map_err(domain)?;
            (pf, r)
        }
        Command::Check { file, bound } => {
            let pf = load(file)?;
            let op = pf.diff_operator().map_err(domain)?;
            let bound = bound.or(pf.options.bound).unwrap_or(DEFAULT_BOUND);
            (pf, report::check(&op, bound))
        }
    };
    Ok((report, file.options.format))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, file_format)) => {
            let format = cli.format.or(file_format).unwrap_or_default();
            print!("{}", report.render(format));
            if report.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Parse(msg)) => {
            eprintln!("parse error: {msg}");
            ExitCode::from(2)
        }
    }
}
