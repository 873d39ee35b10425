//! Dimension tables, verification sweeps and construction runs over exact finite element
//! systems, with JSON, CSV and plain-text output.

pub mod build;
pub mod config;
pub mod render;
pub mod table;
pub mod verify;

use thiserror::Error;

pub use build::{cmd_build, BuildReport, Built, Certificate, Target};
pub use config::{Format, RunConfig, Span};
pub use render::Render;
pub use table::{cmd_table1, Table1, TableEntry};
pub use verify::{cmd_verify, two_cell_mesh, Case, Suite, VerifyReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Fes(#[from] minfes::FesError),
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Writes the rendered result to `cfg.out` or stdout; returns whether every check passed.
pub fn emit(result: &impl Render, cfg: &RunConfig) -> Result<bool, CliError> {
    let text = result.render(cfg.format)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(result.passed())
}
