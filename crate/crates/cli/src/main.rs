use std::fmt;
use std::fs;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;

use klr_core::{Field, Gf32003, Rational};

mod config;
mod report;
mod tasks;

use config::{FieldChoice, JobConfig, Task};
use report::{ErrorRecord, Report};
use tasks::Runner;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JobError {
    Parse(String),
    Precondition(String),
    Internal(String),
}

impl JobError {
    pub fn exit_code(&self) -> u8 {
        match self {
            JobError::Parse(_) => 2,
            JobError::Precondition(_) => 3,
            JobError::Internal(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            JobError::Parse(_) => "parse",
            JobError::Precondition(_) => "precondition",
            JobError::Internal(_) => "internal",
        }
    }

    fn message(&self) -> &str {
        match self {
            JobError::Parse(m) | JobError::Precondition(m) | JobError::Internal(m) => m,
        }
    }
}

/// A job error together with the task and instance it arose in, when known.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub error: JobError,
    pub witness: Option<serde_json::Value>,
}

impl From<JobError> for Failure {
    fn from(error: JobError) -> Self {
        Failure { error, witness: None }
    }
}

impl fmt::Display for JobError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind(), self.message())
    }
}

const DEFAULTS: &str = "Config defaults: lambda = 0, gamma = increasing support of beta, \
options.field = rational, options.max_height = 4 (at most 6), options.max_dimension = 4000, \
options.samples = 200, report to stdout. Sweep defaults: multiplicity_free = true, \
checks = [center-check, annihilator-check, iota-check].\n\
Exit status: 0 all claims hold, 1 some claim failed, 2 parse error, 3 precondition violated, 4 internal error.";

/// Run verification jobs on KLR algebras and their cyclotomic quotients.
#[derive(Parser, Debug)]
#[command(name = "klr-lab", version, after_help = DEFAULTS)]
struct Cli {
    /// JSON job description.
    #[arg(long)]
    config: PathBuf,
    /// Override the task named in the config.
    #[arg(long)]
    task: Option<Task>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_with<F: Field>(cfg: &JobConfig) -> Result<Vec<report::ClaimRecord>, Failure> {
    Runner::<F>::new(cfg)?.run()
}

fn execute(cfg: &JobConfig) -> Result<Vec<report::ClaimRecord>, Failure> {
    let res = catch_unwind(AssertUnwindSafe(|| match cfg.options.field {
        FieldChoice::Rational => run_with::<Rational>(cfg),
        FieldChoice::Gf32003 => run_with::<Gf32003>(cfg),
    }));
    res.unwrap_or_else(|_| Err(JobError::Internal("panic outside a task".into()).into()))
}

fn field_name(f: FieldChoice) -> &'static str {
    match f {
        FieldChoice::Rational => "rational",
        FieldChoice::Gf32003 => "gf32003",
    }
}

fn build_report(cli: &Cli) -> anyhow::Result<(Report, Option<PathBuf>)> {
    let text = fs::read_to_string(&cli.config).with_context(|| format!("reading {}", cli.config.display()))?;
    let parsed = config::parse_config(&text).map(|mut c| {
        if let Some(t) = cli.task {
            c.task = t;
        }
        c
    });
    let task_name = cli.task.map(|t| t.to_string());
    let report = match parsed {
        Ok(cfg) => {
            let out = cli.out.clone().or_else(|| cfg.options.output.clone().map(PathBuf::from));
            let field = field_name(cfg.options.field).to_string();
            let task = cfg.task.to_string();
            let r = match execute(&cfg) {
                Ok(claims) => Report::new(task, field, claims, None, None),
                Err(f) => error_report(task, field, &f.error, f.witness),
            };
            return Ok((r, out));
        }
        Err(e) => error_report(task_name.unwrap_or_else(|| "unknown".into()), "rational".into(), &e, None),
    };
    Ok((report, cli.out.clone()))
}

fn error_report(task: String, field: String, e: &JobError, witness: Option<serde_json::Value>) -> Report {
    eprintln!("klr-lab: {e}");
    let record = ErrorRecord { kind: e.kind(), message: e.message().to_string(), witness };
    Report::new(task, field, Vec::new(), Some(record), Some(e.exit_code()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, out) = match build_report(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("klr-lab: {e:#}");
            return ExitCode::from(2);
        }
    };
    let status = report.summary.exit_status;
    let value = serde_json::to_value(&report).expect("report serializes");
    if let Err(e) = config::validate_report(&value) {
        eprintln!("klr-lab: report does not match its schema: {e}");
        return ExitCode::from(4);
    }
    let text = serde_json::to_string_pretty(&value).expect("report serializes");
    let written = match &out {
        Some(path) => fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display())),
        None => writeln!(std::io::stdout(), "{text}").context("writing report to stdout"),
    };
    if let Err(e) = written {
        eprintln!("klr-lab: {e:#}");
        return ExitCode::from(4);
    }
    eprintln!("klr-lab: {} claims checked, {} failed", report.summary.checked, report.summary.failed);
    ExitCode::from(status)
}
