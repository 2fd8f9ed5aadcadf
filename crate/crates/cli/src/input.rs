use std::io::Read;
use std::path::Path;
use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable or invalid configuration: exit code 2.
    #[error("{0}")]
    Usage(String),
    /// The input was read but could not be graded: exit code 1.
    #[error("{0}")]
    Record(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Record(_) => ExitCode::from(1),
            CliError::Usage(_) | CliError::Io(_) => ExitCode::from(2),
        }
    }
}

pub fn strip_bom(text: String) -> String {
    match text.strip_prefix('\u{feff}') {
        Some(rest) => rest.to_string(),
        None => text,
    }
}

/// Reads a UTF-8 file, dropping a leading byte-order mark.
pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map(strip_bom)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn read_stdin() -> Result<String, CliError> {
    let mut text = String::new();
    std::io::stdin().read_to_string(&mut text)?;
    Ok(strip_bom(text))
}
