//! `covers`: the command-line front end of cover-core.
//!
//! Exit codes: 0 success, 1 invalid configuration, 2 hypothesis not met (including
//! flagged rows under `--strict`), 3 resource bound exceeded, 4 a verification failed.

mod args;
mod commands;
mod emit;
mod error;
mod job;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::error::{CliError, EXIT_VERIFICATION_FAILED};
use crate::job::{Job, JobFile};

fn load_jobs(path: &Path) -> Result<Vec<Job>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.into(),
        source,
    })?;
    let file: JobFile = serde_json::from_str(&text).map_err(|source| CliError::JobFile {
        path: path.into(),
        source,
    })?;
    Ok(file.jobs)
}

/// Runs one job, writes its artifact, and returns its exit code.
fn run_job(job: &Job) -> Result<u8, CliError> {
    let outcome = commands::execute(job)?;
    let text = emit::render(job, &outcome)?;
    match &job.output {
        Some(path) => std::fs::write(path, &text).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        })?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Write {
                    path: "<stdout>".into(),
                    source,
                })?;
        }
    }
    if outcome.passed == Some(false) {
        return Ok(EXIT_VERIFICATION_FAILED);
    }
    if job.strict && outcome.flagged > 0 {
        eprintln!(
            "{} rows lie outside the hypotheses (--strict)",
            outcome.flagged
        );
        return Ok(2);
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let jobs = match cli.command.into_job() {
        Ok(job) => vec![job],
        Err(path) => load_jobs(&path)?,
    };
    let mut code = 0;
    for mut job in jobs {
        // flags given on the command line override the job file
        if let Some(format) = cli.format {
            job.format = format;
        }
        if cli.output.is_some() {
            job.output = cli.output.clone();
        }
        job.strict |= cli.strict;
        match run_job(&job) {
            Ok(c) => code = code.max(c),
            Err(err) => {
                eprintln!("error: {} ({})", err, job.command.label());
                code = code.max(err.exit_code());
            }
        }
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help and version are not failures; every other parse error is bad configuration
            let _ = err.print();
            return ExitCode::from(u8::from(err.use_stderr()));
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
