use std::io::Write;

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;

pub fn json<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn csv_err(e: csv::Error) -> CliError {
    CliError::Internal(format!("csv: {e}"))
}

pub fn csv_finish(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::Internal(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}

/// Writes to `--out` when given, else stdout.
pub fn emit(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}
