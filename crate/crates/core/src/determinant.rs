//! Spinor determinants and their α/β overlap blocks.
//!
//! A determinant of `n_electrons` two-component spinors is stored as two
//! `M x Ne` coefficient matrices: column `i` of `coeff_alpha` expands the
//! α component of spinor `i` over the spatial basis, `coeff_beta` the β
//! component. Spatial inner products use the AO overlap matrix when one is
//! given and the identity otherwise.

use crate::error::{Result, SpinError};
use crate::linalg::{hermitian_eigen, hermitian_power, hermitize, max_abs, max_abs_from_identity, trace};
use crate::CMatrix;

/// Orthonormality residual accepted on construction. File data carries print
/// rounding, so this is looser than what [`orthonormalize`] delivers.
pub const INPUT_ORTHONORMALITY_TOL: f64 = 1e-8;
/// Allowed deviation of the AO overlap from Hermiticity.
pub const METRIC_HERMITIAN_TOL: f64 = 1e-12;
/// Smallest admissible AO overlap eigenvalue.
pub const METRIC_MIN_EIGENVALUE: f64 = 1e-10;
/// Gram matrices with a smaller eigenvalue are treated as singular.
pub const LINEAR_DEPENDENCE_TOL: f64 = 1e-12;

const BLOCK_HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SpinorDeterminant {
    alpha: CMatrix,
    beta: CMatrix,
    ao_overlap: Option<CMatrix>,
}

impl SpinorDeterminant {
    /// Builds a determinant and checks that its spinors are orthonormal to
    /// within [`INPUT_ORTHONORMALITY_TOL`].
    pub fn new(alpha: CMatrix, beta: CMatrix, ao_overlap: Option<CMatrix>) -> Result<Self> {
        let det = Self::from_parts(alpha, beta, ao_overlap)?;
        let residual = det.orthonormality_residual();
        if !(residual <= INPUT_ORTHONORMALITY_TOL) {
            return Err(SpinError::NotOrthonormal { residual });
        }
        Ok(det)
    }

    /// Builds a determinant without the orthonormality check. Shapes and the
    /// AO overlap are still validated. Use this for raw coefficients that are
    /// about to go through [`orthonormalize`].
    pub fn from_parts(alpha: CMatrix, beta: CMatrix, ao_overlap: Option<CMatrix>) -> Result<Self> {
        let (m, ne) = alpha.shape();
        if m == 0 || ne == 0 {
            return Err(SpinError::DimensionMismatch(format!(
                "need at least one basis function and one electron, got M = {m}, Ne = {ne}"
            )));
        }
        if beta.shape() != (m, ne) {
            return Err(SpinError::DimensionMismatch(format!(
                "coeff_alpha is {m}x{ne} but coeff_beta is {}x{}",
                beta.nrows(),
                beta.ncols()
            )));
        }
        if ne > 2 * m {
            return Err(SpinError::DimensionMismatch(format!(
                "{ne} electrons do not fit in {} spin-orbitals",
                2 * m
            )));
        }
        if alpha.iter().chain(beta.iter()).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SpinError::DimensionMismatch("non-finite coefficient".into()));
        }
        let ao_overlap = ao_overlap.map(|s| validate_metric(s, m)).transpose()?;
        Ok(Self { alpha, beta, ao_overlap })
    }

    pub fn basis_dim(&self) -> usize {
        self.alpha.nrows()
    }

    pub fn n_electrons(&self) -> usize {
        self.alpha.ncols()
    }

    pub fn coeff_alpha(&self) -> &CMatrix {
        &self.alpha
    }

    pub fn coeff_beta(&self) -> &CMatrix {
        &self.beta
    }

    /// The AO overlap, `None` meaning identity.
    pub fn ao_overlap(&self) -> Option<&CMatrix> {
        self.ao_overlap.as_ref()
    }

    /// Spinor Gram matrix `Ca^† S Ca + Cb^† S Cb`.
    pub fn gram(&self) -> CMatrix {
        let (aa, _, bb) = self.raw_blocks();
        aa + bb
    }

    /// Largest entry of `|gram - I|`.
    pub fn orthonormality_residual(&self) -> f64 {
        max_abs_from_identity(&self.gram())
    }

    /// `2M x Ne` coefficient matrix with the α rows on top of the β rows.
    pub fn stacked(&self) -> CMatrix {
        let (m, ne) = self.alpha.shape();
        let mut out = CMatrix::zeros(2 * m, ne);
        out.view_mut((0, 0), (m, ne)).copy_from(&self.alpha);
        out.view_mut((m, 0), (m, ne)).copy_from(&self.beta);
        out
    }

    pub(crate) fn with_coefficients(&self, alpha: CMatrix, beta: CMatrix) -> Self {
        debug_assert_eq!(alpha.shape(), self.alpha.shape());
        debug_assert_eq!(beta.shape(), self.beta.shape());
        Self { alpha, beta, ao_overlap: self.ao_overlap.clone() }
    }

    fn metric_times(&self, c: &CMatrix) -> CMatrix {
        match &self.ao_overlap {
            Some(s) => s * c,
            None => c.clone(),
        }
    }

    /// `(Ca^† S Ca, Ca^† S Cb, Cb^† S Cb)`.
    fn raw_blocks(&self) -> (CMatrix, CMatrix, CMatrix) {
        let s_alpha = self.metric_times(&self.alpha);
        let s_beta = self.metric_times(&self.beta);
        let aa = self.alpha.adjoint() * &s_alpha;
        let ab = self.alpha.adjoint() * &s_beta;
        let bb = self.beta.adjoint() * &s_beta;
        (aa, ab, bb)
    }
}

fn validate_metric(s: CMatrix, m: usize) -> Result<CMatrix> {
    if s.shape() != (m, m) {
        return Err(SpinError::DimensionMismatch(format!(
            "ao_overlap is {}x{}, expected {m}x{m}",
            s.nrows(),
            s.ncols()
        )));
    }
    let asym = max_abs(&(&s - s.adjoint()));
    if !(asym <= METRIC_HERMITIAN_TOL) {
        return Err(SpinError::InvalidMetric(format!("not Hermitian (max |S - S^†| = {asym:.3e})")));
    }
    let s = hermitize(&s);
    let (values, _) = hermitian_eigen(&s);
    if !(values[0] > METRIC_MIN_EIGENVALUE) {
        return Err(SpinError::InvalidMetric(format!(
            "not positive definite (smallest eigenvalue {:.3e})",
            values[0]
        )));
    }
    Ok(s)
}

/// The four spatial overlap blocks `o_st[i][j] = <phi_i,s | phi_j,t>`.
///
/// Every spin expectation value in [`crate::spin`] and
/// [`crate::collinearity`] is a function of these matrices alone.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapBlocks {
    aa: CMatrix,
    ab: CMatrix,
    ba: CMatrix,
    bb: CMatrix,
}

impl OverlapBlocks {
    /// Assembles blocks from `o_aa`, `o_ab` and `o_bb`; `o_ba` is taken as
    /// the adjoint of `o_ab`. Checks Hermiticity of the diagonal blocks and
    /// `o_aa + o_bb = I` to [`INPUT_ORTHONORMALITY_TOL`].
    pub fn new(aa: CMatrix, ab: CMatrix, bb: CMatrix) -> Result<Self> {
        let n = aa.nrows();
        for (name, m) in [("o_aa", &aa), ("o_ab", &ab), ("o_bb", &bb)] {
            if m.shape() != (n, n) {
                return Err(SpinError::DimensionMismatch(format!(
                    "{name} is {}x{}, expected {n}x{n}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        for (name, m) in [("o_aa", &aa), ("o_bb", &bb)] {
            let asym = max_abs(&(m - m.adjoint()));
            if !(asym <= BLOCK_HERMITIAN_TOL) {
                return Err(SpinError::NonHermitianResult { quantity: name, imag: asym });
            }
        }
        let residual = max_abs_from_identity(&(&aa + &bb));
        if !(residual <= INPUT_ORTHONORMALITY_TOL) {
            return Err(SpinError::NotOrthonormal { residual });
        }
        let ba = ab.adjoint();
        Ok(Self { aa, ab, ba, bb })
    }

    pub fn n_electrons(&self) -> usize {
        self.aa.nrows()
    }

    pub fn o_aa(&self) -> &CMatrix {
        &self.aa
    }

    pub fn o_ab(&self) -> &CMatrix {
        &self.ab
    }

    pub fn o_ba(&self) -> &CMatrix {
        &self.ba
    }

    pub fn o_bb(&self) -> &CMatrix {
        &self.bb
    }
}

/// `o_st = C_s^† S C_t` for a determinant whose spinors are orthonormal to
/// within [`INPUT_ORTHONORMALITY_TOL`].
pub fn build_overlap_blocks(det: &SpinorDeterminant) -> Result<OverlapBlocks> {
    let (aa, ab, bb) = det.raw_blocks();
    OverlapBlocks::new(aa, ab, bb)
}

/// Symmetric (Löwdin) orthonormalization of the spinors under the combined
/// α+β metric: `C -> C G^{-1/2}`. The span of the stacked coefficient
/// columns is unchanged.
pub fn orthonormalize(det: &SpinorDeterminant) -> Result<SpinorDeterminant> {
    let gram = det.gram();
    let (values, _) = hermitian_eigen(&gram);
    if !(values[0] > LINEAR_DEPENDENCE_TOL) {
        return Err(SpinError::LinearlyDependent { min_eigenvalue: values[0] });
    }
    let x = hermitian_power(&gram, -0.5);
    Ok(det.with_coefficients(&det.alpha * &x, &det.beta * &x))
}

/// `(N_alpha, N_beta)`, the traces of `o_aa` and `o_bb`.
pub fn electron_counts(blocks: &OverlapBlocks) -> (f64, f64) {
    (trace(&blocks.aa).re, trace(&blocks.bb).re)
}
