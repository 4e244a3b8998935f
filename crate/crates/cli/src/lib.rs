//! Command-line pipeline: each subcommand runs one stage and persists its
//! artifacts in the output directory for the next.

pub mod args;
pub mod error;
pub mod stages;
pub mod workspace;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;
use stages::Context;
use workspace::Workspace;

/// Runs one parsed invocation and returns the summary line.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| CliError::Internal(format!("cannot start the thread pool: {e}")))?;
    }
    let ws = Workspace::open(&cli.out, cli.force)?;
    let ctx = Context {
        ws: &ws,
        manifest: cli.manifest.clone(),
        seed: cli.seed,
    };
    match &cli.command {
        Command::Ingest => stages::cmd_ingest(&ctx),
        Command::ClusterTopics(a) => stages::cmd_cluster_topics(&ctx, a),
        Command::Baseline(a) => stages::cmd_baseline(&ctx, a),
        Command::Sweep(a) => stages::cmd_sweep(&ctx, a),
        Command::Analyze(a) => stages::cmd_analyze(&ctx, a),
        Command::Label(a) => stages::cmd_label(&ctx, a),
        Command::CaseStudy(a) => stages::cmd_case_study(&ctx, a),
        Command::Synth(a) => stages::cmd_synth(&ctx, a),
    }
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .format_timestamp(None)
        .try_init();
}

/// Full entry point: parsing, logging, execution and exit status.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    init_logging(cli.verbose);
    match std::panic::catch_unwind(|| run(&cli)) {
        Ok(Ok(summary)) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
        Err(_) => {
            eprintln!("error: internal failure (see the panic message above)");
            ExitCode::from(3)
        }
    }
}
