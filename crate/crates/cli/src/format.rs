//! Determinant file format.
//!
//! A JSON document:
//!
//! ```json
//! {
//!   "basis_dim": 1,
//!   "n_electrons": 1,
//!   "coeff_alpha": [[1.0, 0.0]],
//!   "coeff_beta": [[0.0, 0.0]],
//!   "ao_overlap": [[1.0, 0.0]]
//! }
//! ```
//!
//! Matrices are row-major lists of `[re, im]` pairs (`M x Ne` for the
//! coefficients, `M x M` for the optional overlap). A list of rows, each a
//! list of pairs, is accepted on input as well.

use std::fs;
use std::path::Path;

use gchf_spin::{orthonormalize, CMatrix, SpinError, SpinorDeterminant, C64};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixData {
    Flat(Vec<[f64; 2]>),
    Rows(Vec<Vec<[f64; 2]>>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeterminantFile {
    pub basis_dim: usize,
    pub n_electrons: usize,
    pub coeff_alpha: MatrixData,
    pub coeff_beta: MatrixData,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ao_overlap: Option<MatrixData>,
}

/// A loaded determinant plus where it came from.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub det: SpinorDeterminant,
    pub path: String,
    pub sha256: String,
    pub orthonormalized: bool,
}

fn to_matrix(name: &str, data: &MatrixData, rows: usize, cols: usize) -> Result<CMatrix, CliError> {
    let pair = |p: &[f64; 2]| C64::new(p[0], p[1]);
    match data {
        MatrixData::Flat(v) => {
            if v.len() != rows * cols {
                return Err(CliError::Shape(format!("{name} has {} entries, expected {rows} x {cols}", v.len())));
            }
            Ok(CMatrix::from_row_iterator(rows, cols, v.iter().map(pair)))
        }
        MatrixData::Rows(r) => {
            if r.len() != rows || r.iter().any(|row| row.len() != cols) {
                return Err(CliError::Shape(format!("{name} is not {rows} x {cols}")));
            }
            Ok(CMatrix::from_fn(rows, cols, |i, j| pair(&r[i][j])))
        }
    }
}

fn from_matrix(m: &CMatrix) -> MatrixData {
    let mut out = Vec::with_capacity(m.len());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            out.push([z.re, z.im]);
        }
    }
    MatrixData::Flat(out)
}

impl DeterminantFile {
    pub fn from_determinant(det: &SpinorDeterminant) -> Self {
        Self {
            basis_dim: det.basis_dim(),
            n_electrons: det.n_electrons(),
            coeff_alpha: from_matrix(det.coeff_alpha()),
            coeff_beta: from_matrix(det.coeff_beta()),
            ao_overlap: det.ao_overlap().map(from_matrix),
        }
    }

    /// Checks shapes and builds the determinant; orthonormality is checked
    /// unless `orthonormalize` is set, in which case it is enforced.
    pub fn into_determinant(self, orthonormalize_first: bool) -> Result<SpinorDeterminant, CliError> {
        let m = self.basis_dim;
        let ne = self.n_electrons;
        if m == 0 || ne == 0 {
            return Err(CliError::Shape("basis_dim and n_electrons must be positive".into()));
        }
        if ne > 2 * m {
            return Err(CliError::Shape(format!("n_electrons = {ne} exceeds 2 * basis_dim = {}", 2 * m)));
        }
        let alpha = to_matrix("coeff_alpha", &self.coeff_alpha, m, ne)?;
        let beta = to_matrix("coeff_beta", &self.coeff_beta, m, ne)?;
        let metric = self.ao_overlap.as_ref().map(|s| to_matrix("ao_overlap", s, m, m)).transpose()?;
        let raw = SpinorDeterminant::from_parts(alpha, beta, metric).map_err(CliError::from_core)?;
        if orthonormalize_first {
            return orthonormalize(&raw).map_err(CliError::from_core);
        }
        let residual = raw.orthonormality_residual();
        if residual.is_nan() || residual > gchf_spin::determinant::INPUT_ORTHONORMALITY_TOL {
            return Err(CliError::from_core(SpinError::NotOrthonormal { residual }));
        }
        Ok(raw)
    }
}

pub fn parse_determinant(text: &str, orthonormalize_first: bool) -> Result<SpinorDeterminant, CliError> {
    let file: DeterminantFile = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    file.into_determinant(orthonormalize_first)
}

pub fn load_determinant(path: &Path, orthonormalize_first: bool) -> Result<Loaded, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| CliError::Parse(format!("not UTF-8: {e}")))?;
    let det = parse_determinant(text, orthonormalize_first)?;
    Ok(Loaded {
        det,
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
        orthonormalized: orthonormalize_first,
    })
}

pub fn to_json(det: &SpinorDeterminant) -> String {
    serde_json::to_string_pretty(&DeterminantFile::from_determinant(det)).expect("serializable")
}

pub fn save_determinant(det: &SpinorDeterminant, path: &Path) -> Result<(), CliError> {
    fs::write(path, to_json(det) + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
