//! Command-line front end: argument parsing, report assembly and the
//! example corpus. `main` only handles process I/O.

pub mod args;
pub mod commands;
pub mod examples;
pub mod render;

use std::ffi::OsString;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use porder::Budget;
use serde_json::{json, Value};

use args::{Cli, Command, ExamplesOp, Format};

pub const REPORT_SCHEMA: &str = "poisson-strata/1";

/// Rendered output of one invocation.
pub struct RunOutput {
    pub code: i32,
    pub body: String,
    pub output: Option<String>,
}

/// Runs a parsed command and returns `(exit code, report)`. Usage errors
/// are reported with code 2 and a bare error object.
pub fn report<I, T>(argv: I) -> (i32, Value)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => run_cli(&cli),
        Err(e) => (2, json!({ "schema": REPORT_SCHEMA, "error": { "code": "usage", "message": e.to_string() } })),
    }
}

fn run_cli(cli: &Cli) -> (i32, Value) {
    let g = &cli.global;
    Budget::set_global(Budget { max_reductions: g.budget.unwrap_or(Budget::STANDARD.max_reductions), ..Budget::STANDARD });
    let start = Instant::now();
    let result = match g.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| commands::execute(&cli.command, g)),
            Err(e) => Err(porder::Error::Unsupported(format!("thread pool: {e}"))),
        },
        None => commands::execute(&cli.command, g),
    };
    let mut rep = json!({
        "schema": REPORT_SCHEMA,
        "command": commands::command_name(&cli.command),
        "version": env!("CARGO_PKG_VERSION"),
        "seed": g.seed,
    });
    let code = match result {
        Ok(v) => {
            let failed_examples = matches!(&cli.command, Command::Examples { op: ExamplesOp::Run { .. } | ExamplesOp::RunAll })
                && v.get("pass") == Some(&Value::Bool(false));
            rep["result"] = v;
            i32::from(failed_examples)
        }
        Err(e) => {
            rep["error"] = json!({ "code": e.code(), "message": e.to_string() });
            1
        }
    };
    rep["timing"] = json!({ "elapsed_ms": start.elapsed().as_millis() as u64 });
    (code, rep)
}

pub fn run<I, T>(argv: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { 2 } else { 0 }
                }
                _ => 2,
            };
            return RunOutput { code, body: e.render().to_string(), output: None };
        }
    };
    let (code, rep) = run_cli(&cli);
    let body = match cli.global.format {
        Format::Json => serde_json::to_string_pretty(&rep).expect("serializable") + "\n",
        Format::Md => render::markdown(&rep),
        Format::Csv => render::csv(&rep),
    };
    RunOutput { code, body, output: cli.global.output.clone() }
}
