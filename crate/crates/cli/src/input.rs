//! Loading matrices and triple files from disk.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use qmlines::format::{labels_in_triples, parse_matrix, parse_triples, ParseError};
use qmlines::{betweenness_of, validate_quasi_metric, Betweenness, Labels, RationalMatrix};

/// Anything that should end the process with exit code 2.
#[derive(Debug)]
pub enum InputError {
    Io(PathBuf, std::io::Error),
    Parse(PathBuf, ParseError),
    Invalid(String),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            InputError::Parse(p, e) => write!(f, "{}: {e}", p.display()),
            InputError::Invalid(msg) => f.write_str(msg),
        }
    }
}

impl From<qmlines::Error> for InputError {
    fn from(e: qmlines::Error) -> Self {
        InputError::Invalid(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError::Io(path.to_path_buf(), e))
}

pub fn load_matrix(path: &Path) -> Result<RationalMatrix, InputError> {
    parse_matrix(&read(path)?).map_err(|e| InputError::Parse(path.to_path_buf(), e))
}

/// A matrix that must be a quasi-metric; violations become input errors.
pub fn load_quasi_metric(path: &Path) -> Result<RationalMatrix, InputError> {
    let m = load_matrix(path)?;
    let v = validate_quasi_metric(&m);
    if !v.is_ok() {
        let first: Vec<String> = v
            .violations
            .iter()
            .take(5)
            .map(|x| x.describe(m.labels()))
            .collect();
        return Err(InputError::Invalid(format!(
            "{}: not a quasi-metric ({} violations): {}",
            path.display(),
            v.violations.len(),
            first.join("; ")
        )));
    }
    Ok(m)
}

pub fn parse_label_list(list: &str) -> Result<Labels, InputError> {
    let names: Vec<&str> = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    Ok(Labels::new(names)?)
}

/// Reads a triple file. Without explicit labels the points are the distinct
/// labels in the file, sorted.
pub fn load_triples(
    path: &Path,
    labels: Option<&str>,
) -> Result<(Betweenness, Labels), InputError> {
    let text = read(path)?;
    let labels = match labels {
        Some(list) => parse_label_list(list)?,
        None => Labels::new(labels_in_triples(&text))?,
    };
    qmlines::points::check_point_count(labels.len())?;
    let b = parse_triples(&text, &labels).map_err(|e| InputError::Parse(path.to_path_buf(), e))?;
    Ok((b, labels))
}

pub fn require_consistent(b: &Betweenness, labels: &Labels) -> Result<(), InputError> {
    match b.first_conflict() {
        None => Ok(()),
        Some((t, u)) => Err(InputError::Invalid(format!(
            "inconsistent relation: {} and {} cannot both hold",
            labels.format_triple(t),
            labels.format_triple(u)
        ))),
    }
}

/// A relation given either as a matrix file or as a triple file.
pub fn load_relation(
    matrix: Option<&Path>,
    triples: Option<&Path>,
    labels: Option<&str>,
) -> Result<(Betweenness, Labels), InputError> {
    match (matrix, triples) {
        (Some(m), None) => {
            let m = load_quasi_metric(m)?;
            Ok((betweenness_of(&m), m.labels().clone()))
        }
        (None, Some(t)) => load_triples(t, labels),
        _ => Err(InputError::Invalid(
            "give either a matrix file or --triples <file>".into(),
        )),
    }
}
