//! File formats, sweeps, calibration and reports around `adhop-core`.

pub mod calibrate;
pub mod kv;
pub mod report;
pub mod scenario;
pub mod sweep;

use std::io::Write;
use std::path::Path;

/// Writes trace lines, one per line.
pub fn write_trace(path: &Path, lines: &[String]) -> std::io::Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    for l in lines {
        writeln!(f, "{l}")?;
    }
    f.flush()
}
