//! Command-line surface: configuration, construction commands and reports.

pub mod commands;
pub mod config;
pub mod report;

use std::path::{Path, PathBuf};

pub use commands::{cmd_backlund, cmd_discrete, cmd_energy, cmd_sigma2, cmd_soliton, cmd_verify, Context};
pub use config::RunConfig;
pub use report::{Check, VerificationReport};

pub const THREADS_ENV: &str = "SOLITONFORGE_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("parse: {0}")]
    Parse(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Soliton,
    Discrete,
    Backlund,
    Sigma2,
    Verify,
    Energy,
}

/// Exit status of a finished run.
pub const EXIT_PASS: u8 = 0;
pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_FAIL: u8 = 2;

/// Caps the global rayon pool from `SOLITONFORGE_THREADS`, if set.
pub fn configure_threads() -> Result<Option<usize>, CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(Some(n))
}

/// Loads the config, runs `command` and writes its outputs into `out`.
pub fn run(command: Command, config: &Path, out: &Path, input: Option<PathBuf>) -> Result<VerificationReport, CliError> {
    let text = std::fs::read_to_string(config).map_err(|e| CliError::io(config, e))?;
    let raw: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?;
    let cfg = RunConfig::from_json(&text)?;
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let ctx = Context {
        config: cfg,
        raw,
        config_dir: config.parent().map(Path::to_path_buf).unwrap_or_default(),
        out: out.to_path_buf(),
        input,
    };
    match command {
        Command::Soliton => cmd_soliton(&ctx),
        Command::Discrete => cmd_discrete(&ctx),
        Command::Backlund => cmd_backlund(&ctx),
        Command::Sigma2 => cmd_sigma2(&ctx),
        Command::Verify => cmd_verify(&ctx),
        Command::Energy => cmd_energy(&ctx),
    }
}
