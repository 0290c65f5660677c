//! Command-line driver for the `bazykin` library.
//!
//! Every subcommand builds a [`output::Product`] that is rendered as CSV or
//! JSON. Exit codes: 0 success, 2 domain error, 3 not found or undetermined,
//! 64 malformed flags, 74 I/O failure.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod svg;
pub mod value;

use clap::Parser;

use crate::commands::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{Format, Status};

fn run_inner(argv: Vec<String>) -> CliResult<i32> {
    let argv = config::merge_argv(argv)?;
    let cfg = match RunConfig::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return Ok(code);
        }
    };
    let product = commands::execute(&cfg.command, cfg.svg.is_some())?;
    let text = match cfg.format.unwrap_or(product.default_format) {
        Format::Json => output::render_json(&product, !cfg.no_meta),
        Format::Csv => output::render_csv(&product, !cfg.no_meta)?,
    };
    output::emit(&text, cfg.output.as_deref())?;
    if let (Some(path), Some(svg)) = (&cfg.svg, &product.svg) {
        output::emit(svg, Some(path))?;
    }
    match product.status {
        Status::Ok => Ok(0),
        Status::Incomplete(msg) => Err(CliError::NotFound(msg)),
    }
}

/// Runs the driver on `argv` (program name first) and returns the exit code.
pub fn run(argv: Vec<String>) -> i32 {
    match run_inner(argv) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("bazykin: {e}");
            e.exit_code()
        }
    }
}
