//! Experiment runner behind the `innergrowth` binary: config parsing,
//! dispatch to the library, CSV/JSON-lines output and SVG plots.

pub mod config;
pub mod experiments;
pub mod output;
pub mod plot;

use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error(transparent)]
    Compute(#[from] innergrowth::Error),
    #[error("plot error: {0}")]
    Plot(String),
}

/// Exit status when every asserted property holds.
pub const EXIT_PASS: u8 = 0;
/// Config, I/O or computation error; nothing is left on disk.
pub const EXIT_ERROR: u8 = 1;
/// The run completed but at least one asserted property failed.
pub const EXIT_ASSERTION: u8 = 2;

#[derive(Debug)]
pub struct RunSummary {
    pub all_pass: bool,
    pub files: Vec<PathBuf>,
}

/// Parses `config_path`, runs the experiment and writes its files into
/// `out_dir`. `seed` overrides the config's seed.
pub fn run(config_path: &Path, out_dir: &Path, seed: Option<u64>) -> Result<RunSummary, CliError> {
    let text = std::fs::read_to_string(config_path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", config_path.display())))?;
    let mut cfg = config::parse(&text)?;
    if let Some(s) = seed {
        cfg.seed = s;
        cfg.echo.insert("seed".into(), s.to_string());
    }
    let outcome = experiments::run(&cfg)?;
    let files = output::render(&cfg, &outcome)?;
    let written = output::write_all(out_dir, &files)?;
    Ok(RunSummary { all_pass: outcome.all_pass(), files: written })
}
