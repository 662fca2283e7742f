//! Deterministic CSV text and atomic file writes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Number with 12 significant digits, positional for exponents in
/// [−5, 12), scientific otherwise; trailing zeros are dropped.
pub fn fmt12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa.to_string()))
    }
}

fn trim(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// In-memory CSV with a mandatory header and LF line endings.
#[derive(Debug, Clone, PartialEq)]
pub struct Csv {
    header: Vec<String>,
    text: String,
}

impl Csv {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        let header: Vec<String> = header.iter().map(|h| h.as_ref().to_string()).collect();
        let text = format!("{}\n", header.join(","));
        Self { header, text }
    }

    pub fn columns(&self) -> usize {
        self.header.len()
    }

    pub fn row(&mut self, cells: &[String]) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn numbers(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|&v| fmt12(v)).collect();
        self.row(&cells);
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

/// Writes through a temporary sibling and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let tmp = path.with_extension(match path.extension() {
        Some(e) => format!("{}.tmp", e.to_string_lossy()),
        None => "tmp".to_string(),
    });
    let mut f = fs::File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
    f.write_all(contents.as_bytes()).map_err(|e| CliError::io(&tmp, e))?;
    f.sync_all().map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

/// Output directory and the list of files written into it.
#[derive(Debug)]
pub struct OutputDir {
    pub root: PathBuf,
    pub files: Vec<String>,
}

impl OutputDir {
    pub fn create(root: impl Into<PathBuf>) -> Result<Self, CliError> {
        let root = root.into();
        fs::create_dir_all(&root).map_err(|e| CliError::io(&root, e))?;
        Ok(Self { root, files: Vec::new() })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        write_atomic(&self.root.join(name), contents)?;
        self.files.push(name.to_string());
        Ok(())
    }
}

/// Parses CSV text with a header row into (header, numeric rows).
pub fn read_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, head) = lines.next().ok_or_else(|| CliError::parse(1, "empty CSV"))?;
    let header: Vec<String> = head.split(',').map(|h| h.trim().to_string()).collect();
    let mut rows = Vec::new();
    for (i, line) in lines {
        let row: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::parse(i + 1, "non-numeric cell"))?;
        if row.len() != header.len() {
            return Err(CliError::parse(i + 1, "row length differs from the header"));
        }
        rows.push(row);
    }
    Ok((header, rows))
}
