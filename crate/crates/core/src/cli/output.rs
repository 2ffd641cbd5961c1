//! Number formatting and atomic file output.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use tempfile::NamedTempFile;

/// Formats `value` with 12 significant digits, plain notation where the
/// exponent is in `[-5, 12)`, scientific otherwise. Trailing zeros are dropped.
pub fn sig12(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return if value.is_nan() {
            "nan".to_string()
        } else if value > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let sci = format!("{value:.11e}");
    let (mantissa, exponent) = sci.split_once('e').expect("`e` formatting has an exponent");
    let exponent: i32 = exponent.parse().expect("exponent is an integer");
    if (-5..12).contains(&exponent) {
        let decimals = (11 - exponent).max(0) as usize;
        trim_zeros(format!("{value:.decimals$}"))
    } else {
        format!("{}e{exponent}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(text: String) -> String {
    if !text.contains('.') {
        return text;
    }
    let trimmed = text.trim_end_matches('0').trim_end_matches('.');
    if trimmed == "-0" {
        "0".to_string()
    } else {
        trimmed.to_string()
    }
}

/// Four decimals.
pub fn fixed4(value: f64) -> String {
    format!("{value:.4}")
}

/// Comma-separated text with a header row and LF line endings.
#[derive(Debug)]
pub struct CsvTable {
    writer: csv::Writer<Vec<u8>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        let writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let mut table = Self { writer };
        table.push_row(header.iter().map(|s| s.to_string()));
        table
    }

    pub fn push_row<I>(&mut self, fields: I)
    where
        I: IntoIterator<Item = String>,
    {
        self.writer
            .write_record(fields)
            .expect("writing to memory cannot fail");
    }

    pub fn into_string(self) -> String {
        let bytes = self
            .writer
            .into_inner()
            .expect("flushing to memory cannot fail");
        String::from_utf8(bytes).expect("fields are UTF-8")
    }
}

/// Writes `contents` to `path` through a temporary file in the same directory,
/// so a failed run never leaves a partial file behind.
///
/// Symlinks are resolved first so the link itself survives. Existing targets
/// that are not regular files (devices, pipes) are written in place.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let resolved;
    let path = match fs::symlink_metadata(path) {
        Ok(meta) if meta.file_type().is_symlink() => match fs::canonicalize(path) {
            Ok(target) => {
                resolved = target;
                resolved.as_path()
            }
            Err(_) => return write_in_place(path, contents),
        },
        _ => path,
    };
    if let Ok(meta) = fs::metadata(path) {
        if !meta.is_file() {
            return write_in_place(path, contents);
        }
    }
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn write_in_place(path: &Path, contents: &str) -> io::Result<()> {
    let mut file = fs::OpenOptions::new().write(true).open(path)?;
    file.write_all(contents.as_bytes())?;
    file.flush()
}
