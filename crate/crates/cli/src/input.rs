//! Input vector files.
//!
//! Canonical form is `{"x": [[re, im], ...]}`. A bare array is accepted too,
//! and any entry may be a plain real number instead of a pair.

use std::path::Path;

use qba_core::{Complex64, ComplexVec};
use serde::Deserialize;

use crate::CliError;

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Pair([f64; 2]),
    Real(f64),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Document {
    Wrapped { x: Vec<Entry> },
    Bare(Vec<Entry>),
}

pub fn parse_vector(text: &str) -> Result<ComplexVec, CliError> {
    let doc: Document = serde_json::from_str(text)
        .map_err(|e| CliError::Input(format!("not a valid input vector document: {e}")))?;
    let entries = match doc {
        Document::Wrapped { x } | Document::Bare(x) => x,
    };
    let values = entries
        .into_iter()
        .map(|e| match e {
            Entry::Pair([re, im]) => Complex64::new(re, im),
            Entry::Real(re) => Complex64::new(re, 0.0),
        })
        .collect();
    ComplexVec::new(values).map_err(|e| CliError::Input(e.to_string()))
}

pub fn read_vector(path: &Path) -> Result<ComplexVec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_vector(&text)
}

/// Resolves the transform input from `--input`, `--basis` and `--n`.
pub fn resolve(
    n: Option<usize>,
    basis: Option<usize>,
    input: Option<&Path>,
) -> Result<ComplexVec, CliError> {
    match (input, basis) {
        (Some(_), Some(_)) => Err(CliError::Usage(
            "--input and --basis are mutually exclusive".into(),
        )),
        (Some(path), None) => {
            let x = read_vector(path)?;
            match n {
                Some(n) if n != x.len() => Err(CliError::Input(format!(
                    "--n {n} does not match the {} entries in {}",
                    x.len(),
                    path.display()
                ))),
                _ => Ok(x),
            }
        }
        (None, Some(j)) => {
            let n = n.ok_or_else(|| CliError::Usage("--basis needs --n".into()))?;
            if n == 0 {
                return Err(CliError::Usage("--n must be at least 1".into()));
            }
            if j >= n {
                return Err(CliError::Usage(format!("--basis {j} is outside 0..{n}")));
            }
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            v[j] = Complex64::new(1.0, 0.0);
            Ok(ComplexVec::new(v).expect("basis vector is valid"))
        }
        (None, None) => Err(CliError::Usage(
            "give either --input <file> or --n <N> --basis <j>".into(),
        )),
    }
}
