//! Spin vector, collinearity matrix and the minimal-collinearity axis.
//!
//! For a unit vector `u`, `col(u) = <(u.S)^2> - <u.S>^2 = u^T A u` with
//!
//! ```text
//! A_mn = Re<S_m S_n> - <S_m><S_n>
//!      = delta_mn Ne/4 - Re sum_ij <S_m phi_i|phi_j> <phi_j|S_n phi_i>
//! ```
//!
//! The smallest eigenvalue of `A` is the noncollinearity measure and its
//! eigenvector the quantization axis along which the spin density is most
//! collinear.

use nalgebra::{Matrix3, Vector3};

use crate::determinant::OverlapBlocks;
use crate::eigen3::symmetric_eigen;
use crate::error::{Result, SpinError};
use crate::linalg::frobenius_dot;
use crate::spin::{expect_splus, expect_sz};
use crate::{CMatrix, C64};

pub const UNIT_VECTOR_TOL: f64 = 1e-10;
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Eigenvalues closer than this are treated as one degenerate level.
pub const DEGENERACY_GAP: f64 = 1e-10;

/// `(<S_x>, <S_y>, <S_z>)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinVector {
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
}

impl SpinVector {
    pub fn to_vector(self) -> Vector3<f64> {
        Vector3::new(self.sx, self.sy, self.sz)
    }

    pub fn norm_squared(self) -> f64 {
        self.to_vector().norm_squared()
    }
}

pub fn spin_vector(blocks: &OverlapBlocks) -> Result<SpinVector> {
    let splus = expect_splus(blocks);
    Ok(SpinVector { sx: splus.re, sy: splus.im, sz: expect_sz(blocks)? })
}

/// Overlaps `<S_m phi_i | phi_j>` for `m = x, y, z`, written through the α/β
/// blocks:
///
/// * `S_x phi = 1/2 (phi_b, phi_a)`
/// * `S_y phi = 1/2 (-i phi_b, i phi_a)`
/// * `S_z phi = 1/2 (phi_a, -phi_b)`
fn tilde_overlaps(blocks: &OverlapBlocks) -> [CMatrix; 3] {
    let half = C64::new(0.5, 0.0);
    let half_i = C64::new(0.0, 0.5);
    let x = (blocks.o_ba() + blocks.o_ab()) * half;
    let y = (blocks.o_ba() - blocks.o_ab()) * half_i;
    let z = (blocks.o_aa() - blocks.o_bb()) * half;
    [x, y, z]
}

/// The real symmetric collinearity matrix `A`.
pub fn a_matrix(blocks: &OverlapBlocks) -> Result<Matrix3<f64>> {
    let tilde = tilde_overlaps(blocks);
    let quarter_ne = blocks.n_electrons() as f64 / 4.0;
    let mut b = Matrix3::zeros();
    for mu in 0..3 {
        for nu in 0..3 {
            // sum_ij <~mu_i|j> <j|~nu_i>
            b[(mu, nu)] = frobenius_dot(&tilde[mu], &tilde[nu]).re;
        }
    }
    let b = (b + b.transpose()) * 0.5;
    Ok(Matrix3::identity() * quarter_ne - b)
}

fn check_unit(u: &Vector3<f64>) -> Result<()> {
    let norm = u.norm();
    if (norm - 1.0).abs() <= UNIT_VECTOR_TOL {
        Ok(())
    } else {
        Err(SpinError::NotUnitVector { norm })
    }
}

/// `u^T A u` for a precomputed collinearity matrix.
pub fn col_along_matrix(a: &Matrix3<f64>, u: &Vector3<f64>) -> Result<f64> {
    check_unit(u)?;
    Ok(u.dot(&(a * u)))
}

/// Variance of `u.S`.
pub fn col_along(blocks: &OverlapBlocks, u: &Vector3<f64>) -> Result<f64> {
    check_unit(u)?;
    col_along_matrix(&a_matrix(blocks)?, u)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollinearityResult {
    pub a_matrix: Matrix3<f64>,
    /// Ascending.
    pub eigenvalues: [f64; 3],
    pub eigenvectors: [Vector3<f64>; 3],
    /// Smallest eigenvalue.
    pub col: f64,
    pub optimal_axis: Vector3<f64>,
    /// The smallest eigenvalue is degenerate and `optimal_axis` was picked
    /// by the tie-break rule.
    pub degenerate: bool,
}

/// Diagonalizes `A` and returns the minimal-collinearity axis.
///
/// Eigenvectors are sign-normalized so their largest-magnitude component is
/// positive. Inside a degenerate level the basis is rebuilt by projecting
/// `z`, then `x`, then `y` onto the eigenspace, so the reported axis is the
/// one closest to `z` (failing that, to `x`).
pub fn min_collinearity(a: &Matrix3<f64>) -> Result<CollinearityResult> {
    let asymmetry = (a - a.transpose()).abs().max();
    if !(asymmetry <= SYMMETRY_TOL) {
        return Err(SpinError::NotSymmetric { asymmetry });
    }
    let sym = (a + a.transpose()) * 0.5;
    let (values, vectors) = symmetric_eigen(&sym);
    let mut eigenvectors: [Vector3<f64>; 3] = [vectors.column(0).into(), vectors.column(1).into(), vectors.column(2).into()];

    let mut start = 0;
    let mut degenerate = false;
    while start < 3 {
        let mut end = start + 1;
        while end < 3 && values[end] - values[end - 1] < DEGENERACY_GAP {
            end += 1;
        }
        if end - start > 1 {
            canonical_basis(&mut eigenvectors[start..end]);
            if start == 0 {
                degenerate = true;
            }
        }
        start = end;
    }
    for v in eigenvectors.iter_mut() {
        sign_normalize(v);
    }

    Ok(CollinearityResult {
        a_matrix: sym,
        eigenvalues: [values[0], values[1], values[2]],
        eigenvectors,
        col: values[0],
        optimal_axis: eigenvectors[0],
        degenerate,
    })
}

/// Replaces an orthonormal basis of a subspace by the Gram-Schmidt basis of
/// the projections of `z`, `x`, `y` (in that order).
fn canonical_basis(basis: &mut [Vector3<f64>]) {
    let dim = basis.len();
    let project = |w: &Vector3<f64>| basis.iter().map(|b| b * b.dot(w)).sum::<Vector3<f64>>();
    let mut out: Vec<Vector3<f64>> = Vec::with_capacity(dim);
    for probe in [Vector3::z(), Vector3::x(), Vector3::y()] {
        if out.len() == dim {
            break;
        }
        let mut w = project(&probe);
        for prev in &out {
            w -= prev * prev.dot(&w);
        }
        let n = w.norm();
        if n > 1e-6 {
            out.push(w / n);
        }
    }
    basis.copy_from_slice(&out);
}

fn sign_normalize(v: &mut Vector3<f64>) {
    let k = v.iamax();
    if v[k] < 0.0 {
        *v = -*v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::determinant::{build_overlap_blocks, SpinorDeterminant};
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn blocks(alpha: &[C64], beta: &[C64], m: usize) -> OverlapBlocks {
        let ne = alpha.len() / m;
        let det = SpinorDeterminant::new(
            CMatrix::from_row_slice(m, ne, alpha),
            CMatrix::from_row_slice(m, ne, beta),
            None,
        )
        .unwrap();
        build_overlap_blocks(&det).unwrap()
    }

    fn x_polarized() -> OverlapBlocks {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        blocks(&[c(h)], &[c(h)], 1)
    }

    #[test]
    fn x_polarized_matrix() {
        let b = x_polarized();
        let sv = spin_vector(&b).unwrap();
        assert_abs_diff_eq!(sv.sx, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(sv.sy, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sv.sz, 0.0, epsilon = 1e-15);
        let a = a_matrix(&b).unwrap();
        let expected = Matrix3::from_diagonal(&Vector3::new(0.0, 0.25, 0.25));
        assert!((a - expected).abs().max() < 1e-15);
        assert_abs_diff_eq!(col_along(&b, &Vector3::x()).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(col_along(&b, &Vector3::z()).unwrap(), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn pure_alpha_vector() {
        let sv = spin_vector(&blocks(&[c(1.0)], &[c(0.0)], 1)).unwrap();
        assert_eq!((sv.sx, sv.sy, sv.sz), (0.0, 0.0, 0.5));
    }

    #[test]
    fn y_polarized_has_positive_sy() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let sv = spin_vector(&blocks(&[c(h)], &[C64::new(0.0, h)], 1)).unwrap();
        assert_abs_diff_eq!(sv.sy, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn singlet_matrix_vanishes() {
        let b = blocks(&[c(1.0), c(0.0)], &[c(0.0), c(1.0)], 1);
        assert!(a_matrix(&b).unwrap().abs().max() < 1e-15);
    }

    #[test]
    fn rejects_non_unit_axis() {
        let err = col_along(&x_polarized(), &Vector3::new(1.0, 1.0, 0.0)).unwrap_err();
        assert!(matches!(err, SpinError::NotUnitVector { .. }));
    }

    #[test]
    fn rejects_asymmetric_matrix() {
        let mut a = Matrix3::identity();
        a[(0, 1)] = 1e-6;
        assert!(matches!(min_collinearity(&a), Err(SpinError::NotSymmetric { .. })));
    }

    #[test]
    fn diagonal_minimum_along_x() {
        let r = min_collinearity(&Matrix3::from_diagonal(&Vector3::new(0.0, 0.25, 0.25))).unwrap();
        assert_eq!(r.col, 0.0);
        assert_eq!(r.optimal_axis, Vector3::x());
        assert!(!r.degenerate);
        assert_eq!(r.eigenvalues, [0.0, 0.25, 0.25]);
    }

    #[test]
    fn isotropic_picks_z() {
        let r = min_collinearity(&Matrix3::zeros()).unwrap();
        assert_eq!(r.col, 0.0);
        assert!(r.degenerate);
        assert_eq!(r.optimal_axis, Vector3::z());
        assert_eq!(r.eigenvectors[1], Vector3::x());
        assert_eq!(r.eigenvectors[2], Vector3::y());

        // Degenerate xy level with z excluded falls back to x.
        let r = min_collinearity(&Matrix3::from_diagonal(&Vector3::new(0.1, 0.1, 0.3))).unwrap();
        assert!(r.degenerate);
        assert_abs_diff_eq!(r.optimal_axis, Vector3::x(), epsilon = 1e-15);
    }

    #[test]
    fn degenerate_plane_containing_z() {
        // Eigenspace of 0 is span{(1,1,0)/sqrt2, z}; the axis must be z.
        let n = Vector3::new(1.0, -1.0, 0.0) / 2f64.sqrt();
        let a = n * n.transpose() * 0.3;
        let r = min_collinearity(&a).unwrap();
        assert!(r.degenerate);
        assert_abs_diff_eq!(r.optimal_axis, Vector3::z(), epsilon = 1e-14);
        assert_abs_diff_eq!(r.eigenvectors[1], Vector3::new(1.0, 1.0, 0.0) / 2f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(r.eigenvectors[2], n, epsilon = 1e-14);
    }
}
