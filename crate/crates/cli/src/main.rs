use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use distgraph_core::Error;

mod args;
mod run;

use args::{Cli, Job};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_BUDGET: u8 = 4;

/// A failure reported as one JSON line on stderr.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            kind: "usage",
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let (code, kind) = match e {
            Error::InvalidN { .. } | Error::Precondition(_) => (EXIT_PRECONDITION, "precondition"),
            Error::Parse { .. } => (EXIT_PRECONDITION, "pattern"),
            Error::Budget(_) => (EXIT_BUDGET, "budget"),
            Error::Output(_) => (EXIT_FAILURE, "output"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

fn read_config(path: &Path) -> Result<Job, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("invalid config: {e}")))?;
    // accept a whole report as well as its config object
    if let Some(inner) = value.get_mut("config") {
        value = inner.take();
    }
    serde_json::from_value(value).map_err(|e| Failure::usage(format!("invalid config: {e}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let job = match (cli.command, &cli.config) {
        (Some(_), Some(_)) => return Err(Failure::usage("give either a subcommand or --config, not both")),
        (Some(c), None) => Job::from(c),
        (None, Some(path)) => read_config(path)?,
        (None, None) => return Err(Failure::usage("missing subcommand; see --help")),
    };
    run::validate(&job)?;

    let body = match cli.threads {
        Some(0) => return Err(Failure::usage("--threads must be positive")),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Failure::usage(format!("cannot start {k} threads: {e}")))?;
            pool.install(|| run::execute(&job, cli.format))?
        }
        None => run::execute(&job, cli.format)?,
    };

    let written = match &cli.out {
        Some(path) => std::fs::write(path, &body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    };
    written.map_err(|e| Failure::from(Error::Output(e.to_string())))
}

fn main() -> ExitCode {
    env_logger::Builder::new()
        .filter_level(log::LevelFilter::Info)
        .format_timestamp(None)
        .format_target(false)
        .init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            let first = first.trim_start_matches("error: ").to_string();
            return report(Failure::usage(first));
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => report(f),
    }
}

fn report(f: Failure) -> ExitCode {
    let line = serde_json::json!({ "error": f.kind, "message": f.message });
    eprintln!("{line}");
    ExitCode::from(f.code)
}
