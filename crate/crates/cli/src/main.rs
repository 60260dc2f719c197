mod args;
mod error;
mod output;
mod solve;
mod sweep;
mod trace;
mod verify;

use clap::error::ErrorKind;
use clap::Parser;
use rpr_core::{ManipulatorGeometry, Tolerances};
use std::process::ExitCode;

use args::{Cli, Command};
use error::{CliError, CliResult};
use solve::Context;

/// Geometry from the file named by `RPR_GEOMETRY`, the unit geometry
/// otherwise.
fn load_geometry() -> CliResult<ManipulatorGeometry> {
    match std::env::var_os("RPR_GEOMETRY") {
        Some(path) => ManipulatorGeometry::from_json_file(&path).map_err(|e| match e {
            rpr_core::Error::Io(io) => CliError::Io(format!("{}: {io}", path.to_string_lossy())),
            other => CliError::Usage(format!("{}: {other}", path.to_string_lossy())),
        }),
        None => Ok(ManipulatorGeometry::unit()),
    }
}

fn run(cli: Cli) -> CliResult {
    if !(cli.angle_tol > 0.) {
        return Err(CliError::Usage(format!(
            "--angle-tol must be positive, got {}",
            cli.angle_tol
        )));
    }
    let ctx = Context {
        geom: load_geometry()?,
        tol: Tolerances {
            angle: cli.angle_tol,
            ..Tolerances::default()
        },
        deg: cli.deg,
    };
    match &cli.command {
        Command::Ik(a) => solve::ik(a, &ctx),
        Command::Dk(a) => solve::dk(a, &ctx),
        Command::Sweep(a) => sweep::run(a, &ctx),
        Command::Trace(a) => trace::run(a, &ctx),
        Command::Verify(a) => verify::run(a, &ctx),
        Command::Singularity(a) => solve::singularity(a, &ctx),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rpr: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
