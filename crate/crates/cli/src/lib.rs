//! Batch front end for the `cliffstring` binary.
//!
//! Every subcommand draws from one ChaCha8 stream seeded by `--seed` (or
//! `CLIFFSTRING_SEED`), so reports are byte-identical across runs.

pub mod args;
pub mod commands;
pub mod report;

use std::ffi::OsString;

use clap::Parser;

use args::{Cli, Command, RunConfig};
use commands::CliError;
pub use report::{Check, Report};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CHECK: i32 = 3;

/// Parses `argv`, runs the subcommand and returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let cli = match Cli::try_parse_from(args::preprocess_args(argv)) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_PASS
            };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Input(_) => EXIT_INPUT,
                CliError::Runtime(_) => EXIT_RUNTIME,
            }
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let cfg = RunConfig::from_args(&cli.common).map_err(CliError::Input)?;
    let report = match &cli.command {
        Command::OctonionCheck => commands::octonion_check(&cfg)?,
        Command::Resolve { tol, pivot, max_n } => commands::resolve(&cfg, *tol, *pivot, *max_n)?,
        Command::LorentzCheck { nest_depth } => commands::lorentz_check(&cfg, *nest_depth)?,
        Command::StringModes {
            grid,
            modes,
            csv,
            tau_samples,
        } => commands::string_modes(&cfg, *grid, *modes, csv.as_deref(), *tau_samples)?,
        Command::QuantumCheck {
            degree,
            hbar,
            jz_degree,
            closure_sign,
        } => commands::quantum(&cfg, *degree, *hbar, *jz_degree, *closure_sign)?,
        Command::Redshift {
            t_emit,
            t_obsv,
            p,
            z_obsv,
        } => commands::redshift_cmd(&cfg, *t_emit, *t_obsv, *p, *z_obsv)?,
        Command::GenFixture { kind, n, modes } => {
            commands::gen_fixture(&cfg, *kind, *n, *modes)?;
            return Ok(EXIT_PASS);
        }
    };
    commands::write_json(&report, cfg.output.as_deref())?;
    if cfg.output.is_some() {
        for (name, c) in &report.checks {
            eprintln!(
                "{} {name} {:e}",
                if c.pass { "PASS" } else { "FAIL" },
                c.max_residual
            );
        }
    }
    Ok(if report.pass { EXIT_PASS } else { EXIT_CHECK })
}
