//! JSON file formats.
//!
//! Every matrix is an object `{"re": [[...]], "im": [[...]]}` of row-major
//! real and imaginary parts. Floats are written in shortest round-trip form
//! and parsed exactly, so values survive a write/read cycle bit for bit.

use std::fs;
use std::path::Path;

use dqds_core::synthesis::SynthesisResult;
use dqds_core::{completeness_residual, validate_kraus, ComplexMatrix, KrausMap, Tolerances};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self { re: m.real_part(), im: m.imag_part() }
    }

    /// Converts to a matrix, requiring `dim × dim` when `dim` is given.
    pub fn to_matrix(&self, dim: Option<usize>) -> Result<ComplexMatrix, String> {
        let rows = self.re.len();
        let cols = self.re.first().map_or(0, Vec::len);
        let square = dim.unwrap_or(rows);
        let shape_ok = |a: &Vec<Vec<f64>>| a.len() == square && a.iter().all(|r| r.len() == square);
        if !shape_ok(&self.re) || !shape_ok(&self.im) || cols != square {
            return Err(format!(
                "expected {square}x{square} re/im arrays, found re {rows}x{cols}, im {}x{}",
                self.im.len(),
                self.im.first().map_or(0, Vec::len)
            ));
        }
        ComplexMatrix::from_parts(&self.re, &self.im).map_err(|e| e.to_string())
    }
}

/// A Kraus map on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrausFile {
    pub dim: usize,
    pub ops: Vec<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<String>,
}

impl KrausFile {
    pub fn from_map(map: &KrausMap, name: Option<&str>, basis: Option<&str>) -> Self {
        Self {
            dim: map.dim(),
            ops: map.ops().iter().map(MatrixJson::from_matrix).collect(),
            name: name.map(str::to_owned),
            basis: basis.map(str::to_owned),
        }
    }

    /// The operators, shape-checked but not yet validated as a map.
    pub fn matrices(&self) -> Result<Vec<ComplexMatrix>, String> {
        if self.dim == 0 {
            return Err("dim must be positive".into());
        }
        if self.ops.is_empty() {
            return Err("ops must not be empty".into());
        }
        self.ops
            .iter()
            .enumerate()
            .map(|(k, m)| m.to_matrix(Some(self.dim)).map_err(|e| format!("ops[{k}]: {e}")))
            .collect()
    }
}

/// Synthesized controls: the Kraus-file matrix schema plus the run's
/// verdict and bookkeeping. Written for infeasible runs too, with no ops.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlsFile {
    pub dim: usize,
    pub ops: Vec<MatrixJson>,
    pub feasible: bool,
    pub iterations: usize,
    pub subspace_chain: Vec<[usize; 2]>,
    pub accumulated_basis: MatrixJson,
    pub diagnostics: String,
}

impl ControlsFile {
    pub fn from_result(dim: usize, res: &SynthesisResult) -> Self {
        Self {
            dim,
            ops: res.controls.iter().map(MatrixJson::from_matrix).collect(),
            feasible: res.feasible,
            iterations: res.iterations,
            subspace_chain: res.subspace_chain.iter().map(|&(s, r)| [s, r]).collect(),
            accumulated_basis: MatrixJson::from_matrix(&res.accumulated_basis),
            diagnostics: res.diagnostics.clone(),
        }
    }

    pub fn matrices(&self) -> Result<Vec<ComplexMatrix>, String> {
        self.ops
            .iter()
            .enumerate()
            .map(|(k, m)| m.to_matrix(Some(self.dim)).map_err(|e| format!("ops[{k}]: {e}")))
            .collect()
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::parse(path, e))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Reads the operators of a Kraus file and their completeness residual,
/// without validating the map.
pub fn read_operators(path: &Path) -> Result<(Vec<ComplexMatrix>, f64)> {
    let file: KrausFile = read_json(path)?;
    let ops = file.matrices().map_err(|e| CliError::parse(path, e))?;
    let residual = completeness_residual(&ops)?;
    Ok((ops, residual))
}

pub fn read_map(path: &Path, tol: &Tolerances) -> Result<KrausMap> {
    let (ops, _) = read_operators(path)?;
    Ok(validate_kraus(ops, tol)?)
}

/// A single square matrix file, e.g. a basis or a density matrix.
pub fn read_matrix(path: &Path, dim: usize) -> Result<ComplexMatrix> {
    let m: MatrixJson = read_json(path)?;
    m.to_matrix(Some(dim)).map_err(|e| CliError::parse(path, e))
}

pub fn read_controls(path: &Path) -> Result<ControlsFile> {
    read_json(path)
}
