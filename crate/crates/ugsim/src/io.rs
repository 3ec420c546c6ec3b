use std::fs;
use std::path::Path;

use thiserror::Error;
use ugsim_core::circuit::{CircuitError, ParseError};
use ugsim_core::{parse_circuit, serialize_circuit, Circuit};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Fs { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

pub fn read_circuit(path: &Path) -> Result<Circuit, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Fs { path: path.display().to_string(), source })?;
    parse_circuit(&text).map_err(|source| IoError::Parse { path: path.display().to_string(), source })
}

pub fn write_circuit(path: &Path, c: &Circuit) -> Result<(), IoError> {
    let text = serialize_circuit(c)?;
    fs::write(path, text).map_err(|source| IoError::Fs { path: path.display().to_string(), source })
}
