//! Scan harness, report writers, and configuration plumbing behind the
//! `qccsd` binary.

pub mod config;
pub mod point;
pub mod report;
pub mod scan;

/// Input/configuration problems exit with code 1; runtime failures with 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error<T>(message: impl Into<String>) -> anyhow::Result<T> {
    Err(anyhow::Error::new(ConfigError(message.into())))
}
