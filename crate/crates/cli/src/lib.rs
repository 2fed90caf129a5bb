//! The `slc` command line: configuration, cached reports and exit codes.

pub mod cache;
pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::time::Instant;

use clap::Parser;
use thiserror::Error;

pub use config::{Cli, Command, Options, OutputFormat, RunConfig};
pub use report::{Report, Status};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] slc_core::Error),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(slc_core::Error::Budget(_)) => 3,
            CliError::Io(_) => 4,
            _ => 2,
        }
    }
}

/// Everything an invocation produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn cacheable(command: &str) -> bool {
    command != "zoo-import"
}

fn produce(cli: &Cli, log: &mut Vec<String>) -> Result<(Report, RunConfig), CliError> {
    let config = RunConfig::new(&cli.command, &cli.opts);
    let conventions = slc_core::conventions::convention_hash();
    let cache = match (&cli.opts.cache_dir, cacheable(&config.command)) {
        (Some(dir), true) => Some(cache::Cache::new(dir)?),
        _ => None,
    };
    let key = cache::key(&config, &conventions)?;
    if let Some(c) = &cache {
        if let Some(r) = c.load(&key, &config, &conventions, log) {
            return Ok((r, config));
        }
    }
    let report = commands::execute(&config)?;
    if let Some(c) = &cache {
        c.store(&key, &report)?;
        log.push(format!("cache store: {key}"));
    }
    Ok((report, config))
}

fn run_parsed(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let mut log = Vec::new();
    let result = produce(cli, &mut log).and_then(|(mut report, _)| {
        if cli.opts.timing {
            report.timing_ms = Some(start.elapsed().as_millis() as u64);
        }
        let text = report.render(cli.opts.output)?;
        Ok((report.status.exit_code(), text))
    });
    let mut stderr: String = log.iter().map(|l| format!("{l}\n")).collect();
    match result {
        Ok((code, stdout)) => Outcome { code, stdout, stderr },
        Err(e) => {
            stderr.push_str(&format!("error: {e}\n"));
            Outcome {
                code: e.exit_code(),
                stdout: String::new(),
                stderr,
            }
        }
    }
}

/// Parse and run one invocation; `args[0]` is the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    match cli.opts.threads {
        Some(0) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: "error: invalid input: --threads must be positive\n".into(),
        },
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| run_parsed(&cli)),
            Err(e) => Outcome {
                code: 4,
                stdout: String::new(),
                stderr: format!("error: io: {e}\n"),
            },
        },
        None => run_parsed(&cli),
    }
}
