use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use solitonforge::cli::{configure_threads, run, Command, EXIT_CONFIG, EXIT_FAIL, EXIT_PASS};

/// Multi-soliton construction and verification for the nonlinear Schrödinger hierarchy.
#[derive(Parser)]
#[command(name = "solitonforge", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Solution CSV for `verify`, overriding `verify.input`.
    #[arg(long)]
    input: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::from(EXIT_PASS),
                _ => ExitCode::from(EXIT_CONFIG),
            };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_CONFIG);
    }
    match run(args.command, &args.config, &args.out, args.input) {
        Ok(report) => {
            for c in &report.checks {
                let d = c.max_defect.map_or("n/a".to_string(), |d| format!("{d:.3e}"));
                println!("{} {} max={} tol={:e}", if c.pass { "PASS" } else { "FAIL" }, c.name, d, c.tolerance);
            }
            if !report.singular_points.is_empty() {
                println!("singular points: {}", report.singular_points.len());
            }
            println!("{}", if report.pass { "overall PASS" } else { "overall FAIL" });
            ExitCode::from(if report.pass { EXIT_PASS } else { EXIT_FAIL })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
