mod args;
mod commands;
mod error;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Outcome;
use error::CliError;

/// Environment variable capping the worker thread count.
const THREADS_VAR: &str = "SHRINKER_LAB_THREADS";

/// Everything a run produces, before it reaches the process streams.
struct Run {
    code: u8,
    stdout: String,
    stderr: String,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("{THREADS_VAR}: {e}")))
}

fn dispatch(cmd: &Command) -> Result<(Outcome, Option<&Path>), CliError> {
    Ok(match cmd {
        Command::VerifyQuadratic(a) => (commands::verify_quadratic(a)?, a.out.out.as_deref()),
        Command::BuildCounterexample(a) => (commands::build_counterexample(a)?, a.out.out.as_deref()),
        Command::Shoot(a) => (commands::shoot(a)?, a.out.out.as_deref()),
        Command::FlowCheck(a) => (commands::flow_check(a)?, a.out.out.as_deref()),
        Command::LegendreCheck(a) => (commands::legendre_check(a)?, a.out.out.as_deref()),
        Command::Defect(a) => (commands::defect(a)?, a.out.out.as_deref()),
    })
}

fn execute(cli: &Cli) -> Result<(String, bool), CliError> {
    let (outcome, out) = dispatch(&cli.command)?;
    let json = outcome.report.to_json()?;
    if let Some(dir) = out {
        report::write_outputs(dir, &json, &outcome.tables, &outcome.documents)?;
    }
    Ok((json, outcome.report.pass))
}

fn invoke<I, T>(argv: I) -> Run
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Run {
                    code: 64,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Run {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(&cli) {
        Ok((json, pass)) => Run {
            code: if pass { 0 } else { 2 },
            stdout: json,
            stderr: if pass {
                String::new()
            } else {
                "verification failed\n".into()
            },
        },
        Err(e) => Run {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("shrinker-lab: {e}\n"),
        },
    }
}

fn main() -> ExitCode {
    if let Err(e) = configure_threads() {
        eprintln!("shrinker-lab: {e}");
        return ExitCode::from(e.exit_code());
    }
    let run = invoke(std::env::args_os());
    // A closed stdout (e.g. `| head`) is not worth a panic.
    let _ = std::io::stdout().write_all(run.stdout.as_bytes());
    eprint!("{}", run.stderr);
    ExitCode::from(run.code)
}
