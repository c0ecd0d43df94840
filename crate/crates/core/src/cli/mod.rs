//! Command-line front end. Results go to stdout, diagnostics to stderr.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage error,
//! 3 I/O or format error.

mod args;
mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::Cli;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_IO,
            message: message.into(),
        }
    }
}

/// Captured result of one invocation.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: u8,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

/// Output sinks handed to every command.
#[derive(Debug, Default)]
pub struct Sink {
    pub out: Vec<u8>,
    pub err: String,
}

impl Sink {
    pub fn warn(&mut self, message: impl AsRef<str>) {
        self.err.push_str("warning: ");
        self.err.push_str(message.as_ref());
        self.err.push('\n');
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: e.to_string().into_bytes(),
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: Vec::new(),
                    stderr: e.render().to_string(),
                },
            };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.map_or(0, usize::from))
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            return Outcome {
                code: EXIT_USAGE,
                stdout: Vec::new(),
                stderr: format!("error: cannot start worker threads: {e}\n"),
            }
        }
    };
    let mut sink = Sink::default();
    let result = pool.install(|| commands::dispatch(cli.command, &mut sink));
    let code = match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            sink.err.push_str("error: ");
            sink.err.push_str(&e.message);
            sink.err.push('\n');
            e.code
        }
    };
    Outcome {
        code,
        stdout: sink.out,
        stderr: sink.err,
    }
}

/// Runs the CLI and writes the captured streams to the process's own.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let outcome = run(args);
    let mut code = outcome.code;
    if std::io::stdout()
        .write_all(&outcome.stdout)
        .and_then(|_| std::io::stdout().flush())
        .is_err()
    {
        code = EXIT_IO;
    }
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(code)
}
