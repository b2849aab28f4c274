//! CSV and JSON writers. CSV uses `\n` line endings and shortest round-trip
//! float formatting so identical runs give identical bytes.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Shortest representation that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

fn sink(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| CliError::output(Some(p), e))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes a header row and records to `path`, or stdout when `None`.
pub fn write_csv<I>(path: Option<&Path>, header: &[&str], rows: I) -> CliResult<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink(path)?);
    let fail = |e: csv::Error| CliError::output(path, e);
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(&row).map_err(fail)?;
    }
    w.flush().map_err(|e| CliError::output(path, e))
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> CliResult<()> {
    let mut w = sink(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::output(path, e))?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| CliError::output(path, e))
}

/// `explicit`, else `output` with its extension replaced by `.json`.
pub fn sidecar_path(explicit: Option<&Path>, output: Option<&Path>) -> Option<PathBuf> {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| output.map(|p| p.with_extension("json")))
}
