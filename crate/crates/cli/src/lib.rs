//! Command-line front end: problem files, subcommands and JSON reports.

pub mod app;
pub mod builtin;
pub mod grid;
pub mod parse;
pub mod report;

use std::io::Write;

use clap::Parser;

pub use parse::{parse_expr, parse_problem, render_expr, render_problem, ParseError};
pub use report::{replay, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Core(#[from] vecopt_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed report: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 1 for bad input, 2 for failures of the numerics.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => 2,
            CliError::Core(vecopt_core::Error::DegenerateConstraint(_)) => 2,
            _ => 1,
        }
    }
}

/// Parses `argv`, runs the command and writes its output. Returns the exit
/// code: 0 when a verdict was produced, 1 on usage or parse errors, 2 on
/// numerical failure (including a replay that does not reproduce).
pub fn run(argv: &[String], stdout: &mut impl Write, stderr: &mut impl Write) -> i32 {
    let cli = match app::Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = write!(if code == 0 { &mut *stdout as &mut dyn Write } else { stderr }, "{}", e.render());
            return code;
        }
    };
    if let Some(t) = cli.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let out = match app::execute(&cli, argv) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    let (text, code) = match out {
        app::Output::Report(r) => (r.to_json(), 0),
        app::Output::Text(t) => (t, 0),
        app::Output::Replay { json, ok } => (json, if ok { 0 } else { 2 }),
    };
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &text) {
            let _ = writeln!(stderr, "error: {}: {e}", path.display());
            return 1;
        }
    }
    let _ = writeln!(stdout, "{}", text.trim_end());
    code
}
