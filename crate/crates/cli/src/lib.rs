//! Sweeps, figure data and point reports for the quantum-illumination model.

pub mod config;
pub mod dataset;
pub mod report;
pub mod sweep;

pub use config::{parse, ConfigError, SweepConfig};
pub use dataset::Dataset;
pub use report::{report_point, Report};
pub use sweep::{run_figure3, run_sweep, SweepOutput};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("physics error: {0}")]
    Physics(#[from] qillum_core::Error),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Physics(_) => 2,
            CliError::Validation(_) => 3,
        }
    }
}

/// Hex SHA-256 of the configuration text, recorded in output metadata.
pub fn config_hash(text: &str) -> String {
    use sha2::{Digest, Sha256};
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
