//! Data files and their JSON metadata sidecars.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::error::{CliError, CliResult};

/// Serializes `rows` as CSV (header from the row fields) or as a JSON array.
pub fn render_rows<T: Serialize>(rows: &[T], format: Format) -> CliResult<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.serialize(row).map_err(|e| CliError::Serialize(e.to_string()))?;
            }
            w.into_inner().map_err(|e| CliError::Serialize(e.to_string()))
        }
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(rows).map_err(|e| CliError::Serialize(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

/// Sidecar path for a data file: `<out>.meta.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_os_string();
    name.push(".meta.json");
    PathBuf::from(name)
}

#[derive(Serialize)]
struct Meta<'a, S: Serialize> {
    tool: &'static str,
    version: &'static str,
    subcommand: &'a str,
    rows: usize,
    generated_unix: u64,
    config: &'a RunConfig,
    summary: &'a S,
}

/// Writes `bytes` to the configured output (stdout when unset) and, for file
/// outputs, the metadata sidecar.
pub fn emit<S: Serialize>(
    config: &RunConfig,
    subcommand: &str,
    bytes: &[u8],
    rows: usize,
    summary: &S,
) -> CliResult<()> {
    let Some(path) = &config.output.path else {
        let mut stdout = io::stdout().lock();
        return stdout
            .write_all(bytes)
            .and_then(|_| stdout.flush())
            .map_err(|e| CliError::io("<stdout>", e));
    };
    write_file(path, bytes)?;
    let meta = Meta {
        tool: "dtc-probe",
        version: env!("CARGO_PKG_VERSION"),
        subcommand,
        rows,
        generated_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        config,
        summary,
    };
    let mut text = serde_json::to_vec_pretty(&meta).map_err(|e| CliError::Serialize(e.to_string()))?;
    text.push(b'\n');
    write_file(&sidecar_path(path), &text)
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(bytes)
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(path, e))
}
