mod cmd;
mod config;
mod error;
mod output;
mod records;

use clap::Parser;
use gauge_core::{Backend, Rational, Scalar};

use config::{Cli, Command, Settings};
use error::{CliError, CliResult, EXIT_OK, EXIT_VIOLATION};

/// Prints the errors and folds them with the run outcome into an exit code.
fn finish(violated: bool, errors: Vec<CliError>) -> i32 {
    let mut code = if violated { EXIT_VIOLATION } else { EXIT_OK };
    for e in errors {
        eprintln!("error: {e}");
        code = code.max(e.exit_code());
    }
    code
}

fn dispatch<S: Scalar>(cli: &Cli, s: &Settings) -> CliResult<i32> {
    Ok(match &cli.command {
        Command::Integrate(_) => finish(false, cmd::integrate::run::<S>(s)?),
        Command::Verify(_) => {
            let (reports, errors) = cmd::verify::run::<S>(s)?;
            finish(reports.iter().any(|r| r.violated && !r.negative_control), errors)
        }
        Command::Modulus(_) => {
            let (reports, errors) = cmd::modulus::run::<S>(s)?;
            finish(reports.iter().any(|r| r.violated), errors)
        }
        Command::Sweep(_) => finish(cmd::sweep::run::<S>(s)?.violated, Vec::new()),
        Command::Report(a) => {
            cmd::report::run(a.dir.as_deref().unwrap_or(&s.out))?;
            EXIT_OK
        }
    })
}

fn run(cli: &Cli) -> CliResult<i32> {
    let settings = Settings::resolve(cli)?;
    if let Some(jobs) = settings.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    match settings.backend {
        Backend::Rational => dispatch::<Rational>(cli, &settings),
        Backend::Float => dispatch::<f64>(cli, &settings),
    }
}

fn main() {
    let cli = Cli::parse();
    let code = run(&cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    });
    std::process::exit(code);
}
