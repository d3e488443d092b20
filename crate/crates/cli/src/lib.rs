//! Command-line front end for `facecap`.
//!
//! [`run`] executes a parsed [`Cli`]; the binary maps its error to an exit
//! status (1 usage, 2 data, 3 numerical) and a single `error kind=... code=...
//! message="..."` line on stderr.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use args::Cli;
use args::Command;
use config::RunConfig;
pub use error::{CliError, ErrorKind, Result};

/// Runs `f` on a pool of `threads` workers, or on the global pool.
fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match threads {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::ThreadPool(e.to_string()))?
            .install(f),
    }
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Estimate(a) => {
            let cfg = RunConfig::from_args(&a.input, &a.curve)?;
            let report = with_threads(cfg.threads, || commands::estimate(&cfg))?;
            commands::emit(&cfg, &report, stdout)
        }
        Command::Subgroup(a) => {
            let cfg = RunConfig::from_args(&a.input, &a.curve)?;
            let report = with_threads(cfg.threads, || commands::subgroup(&cfg, a))?;
            commands::emit(&cfg, &report, stdout)
        }
        Command::McValidate(a) => {
            let (text, pass) = with_threads(a.threads, || commands::mc(a))?;
            stdout.write_all(text.as_bytes()).map_err(|source| CliError::Output {
                path: "<stdout>".into(),
                source,
            })?;
            if pass {
                Ok(())
            } else {
                Err(CliError::ValidationFailed { sigmas: a.sigmas })
            }
        }
        Command::Synth(a) => with_threads(a.threads, || commands::synth(a)),
    }
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new().filter_level(level).format_timestamp(None).try_init();
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as K;
            if matches!(e.kind(), K::DisplayHelp | K::DisplayVersion | K::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = e.print();
                return 0;
            }
            let rendered = e.to_string();
            let message: Vec<&str> = rendered
                .lines()
                .take_while(|l| !l.starts_with("Usage:"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            let err = CliError::usage(message.join(" ").trim_start_matches("error: "));
            eprintln!("{}", err.diagnostic());
            return err.exit_code();
        }
    };
    init_logging(cli.verbose);
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(()) => 0,
        Err(err) => {
            let _ = lock.flush();
            eprintln!("{}", err.diagnostic());
            err.exit_code()
        }
    }
}
