//! Closed-form spin expectation values of a spinor determinant.
//!
//! All quantities are in units of ħ and are evaluated from [`OverlapBlocks`]
//! only. With `o_st[i][j] = <phi_i,s|phi_j,t>`:
//!
//! ```text
//! <S_z>     = (Na - Nb) / 2
//! <S_z^2>   = <S_z>^2 + 1/4 (Ne - sum_ij |o_aa - o_bb|_ij^2)
//! <S^- S^+> = Nb + tr(o_ba) tr(o_ab) - sum_ij o_ba[i][j] o_ab[j][i]
//! <S^+ S^-> = Na + tr(o_ab) tr(o_ba) - sum_ij o_ab[i][j] o_ba[j][i]
//! <S^+>     = tr(o_ab)
//! <S^2>     = <S_z^2> + 1/2 (<S^+ S^-> + <S^- S^+>)
//! ```

use crate::determinant::{electron_counts, OverlapBlocks};
use crate::error::{Result, SpinError};
use crate::linalg::trace;
use crate::{CMatrix, C64};

/// Largest imaginary residue tolerated on a quantity that must be real.
pub const REAL_RESIDUE_TOL: f64 = 1e-10;

pub(crate) fn real_part(z: C64, quantity: &'static str) -> Result<f64> {
    if z.im.abs() < REAL_RESIDUE_TOL {
        Ok(z.re)
    } else {
        Err(SpinError::NonHermitianResult { quantity, imag: z.im })
    }
}

/// `sum_ij x[i][j] * y[j][i]`, i.e. `tr(x y)`.
fn trace_of_product(x: &CMatrix, y: &CMatrix) -> C64 {
    let n = x.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += x[(i, j)] * y[(j, i)];
        }
    }
    acc
}

fn z_noncollinearity(blocks: &OverlapBlocks) -> f64 {
    let diff = blocks.o_aa() - blocks.o_bb();
    0.25 * (blocks.n_electrons() as f64 - diff.norm_squared())
}

pub fn expect_sz(blocks: &OverlapBlocks) -> Result<f64> {
    let z = (trace(blocks.o_aa()) - trace(blocks.o_bb())) * 0.5;
    real_part(z, "<S_z>")
}

pub fn expect_sz2(blocks: &OverlapBlocks) -> Result<f64> {
    let sz = expect_sz(blocks)?;
    Ok(sz * sz + z_noncollinearity(blocks))
}

pub fn expect_sminus_splus(blocks: &OverlapBlocks) -> Result<f64> {
    let (_, n_beta) = electron_counts(blocks);
    let z = trace(blocks.o_ba()) * trace(blocks.o_ab()) - trace_of_product(blocks.o_ba(), blocks.o_ab());
    Ok(n_beta + real_part(z, "<S^- S^+>")?)
}

pub fn expect_splus_sminus(blocks: &OverlapBlocks) -> Result<f64> {
    let (n_alpha, _) = electron_counts(blocks);
    let z = trace(blocks.o_ab()) * trace(blocks.o_ba()) - trace_of_product(blocks.o_ab(), blocks.o_ba());
    Ok(n_alpha + real_part(z, "<S^+ S^->")?)
}

/// `<S^+> = <S_x> + i <S_y> = sum_i <phi_i,a|phi_i,b>`. Its squared modulus
/// is the xy-perpendicularity term of [`decompose_s2`].
pub fn expect_splus(blocks: &OverlapBlocks) -> C64 {
    trace(blocks.o_ab())
}

pub fn expect_s2(blocks: &OverlapBlocks) -> Result<f64> {
    Ok(expect_sz2(blocks)? + 0.5 * (expect_splus_sminus(blocks)? + expect_sminus_splus(blocks)?))
}

/// Four-term split of `<S^2>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct S2Decomposition {
    /// `|Na - Nb| / 2`; not an `S_z` eigenvalue in general.
    pub s_effective: f64,
    /// `s (s + 1)`, formally the open-shell reference value.
    pub rohf_term: f64,
    /// Variance of `S_z`.
    pub z_noncollinearity: f64,
    /// `min(Na, Nb) - sum_ij |o_ab[i][j]|^2`.
    pub spin_contamination: f64,
    /// `|<S^+>|^2`.
    pub xy_perpendicularity: f64,
    pub total: f64,
}

impl S2Decomposition {
    pub fn component_sum(&self) -> f64 {
        self.rohf_term + self.z_noncollinearity + self.spin_contamination + self.xy_perpendicularity
    }
}

/// Splits `<S^2>` into reference, z-noncollinearity, spin contamination and
/// xy-perpendicularity terms. The larger of `Na`, `Nb` plays the role of the
/// majority spin, so the split is defined for either ordering.
pub fn decompose_s2(blocks: &OverlapBlocks) -> Result<S2Decomposition> {
    let (n_alpha, n_beta) = electron_counts(blocks);
    let n_min = n_alpha.min(n_beta);
    let s = (n_alpha - n_beta).abs() / 2.0;
    let rohf_term = s * (s + 1.0);
    let z_noncollinearity = z_noncollinearity(blocks);
    let spin_contamination = n_min - blocks.o_ab().norm_squared();
    let xy_perpendicularity = expect_splus(blocks).norm_sqr();
    let total = rohf_term + z_noncollinearity + spin_contamination + xy_perpendicularity;
    Ok(S2Decomposition {
        s_effective: s,
        rohf_term,
        z_noncollinearity,
        spin_contamination,
        xy_perpendicularity,
        total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::determinant::{build_overlap_blocks, SpinorDeterminant};
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn blocks_of(alpha: &[&[f64]], beta: &[&[f64]]) -> OverlapBlocks {
        let m = alpha.len();
        let ne = alpha[0].len();
        let a = CMatrix::from_fn(m, ne, |r, k| c(alpha[r][k]));
        let b = CMatrix::from_fn(m, ne, |r, k| c(beta[r][k]));
        build_overlap_blocks(&SpinorDeterminant::new(a, b, None).unwrap()).unwrap()
    }

    fn pure_alpha() -> OverlapBlocks {
        blocks_of(&[&[1.0]], &[&[0.0]])
    }

    fn pure_beta() -> OverlapBlocks {
        blocks_of(&[&[0.0]], &[&[1.0]])
    }

    fn x_polarized() -> OverlapBlocks {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        blocks_of(&[&[h]], &[&[h]])
    }

    #[test]
    fn one_electron_values() {
        let a = pure_alpha();
        assert_eq!(expect_sz(&a).unwrap(), 0.5);
        assert_eq!(expect_sz2(&a).unwrap(), 0.25);
        assert_eq!(expect_sminus_splus(&a).unwrap(), 0.0);
        assert_eq!(expect_splus_sminus(&a).unwrap(), 1.0);
        assert_eq!(expect_splus(&a), c(0.0));
        assert_eq!(expect_s2(&a).unwrap(), 0.75);

        let b = pure_beta();
        assert_eq!(expect_sminus_splus(&b).unwrap(), 1.0);
        assert_eq!(expect_splus_sminus(&b).unwrap(), 0.0);

        let x = x_polarized();
        assert_abs_diff_eq!(expect_sz(&x).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(expect_sz2(&x).unwrap(), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(expect_sminus_splus(&x).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(expect_splus_sminus(&x).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(expect_splus(&x).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(expect_s2(&x).unwrap(), 0.75, epsilon = 1e-15);
    }

    #[test]
    fn x_polarized_decomposition() {
        let d = decompose_s2(&x_polarized()).unwrap();
        assert_abs_diff_eq!(d.rohf_term, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.z_noncollinearity, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(d.spin_contamination, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(d.xy_perpendicularity, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(d.total, 0.75, epsilon = 1e-15);
    }

    #[test]
    fn singlet_and_triplet() {
        // one spatial orbital, alpha and beta
        let singlet = blocks_of(&[&[1.0, 0.0]], &[&[0.0, 1.0]]);
        assert_abs_diff_eq!(expect_s2(&singlet).unwrap(), 0.0, epsilon = 1e-15);
        let triplet = blocks_of(&[&[1.0, 0.0], &[0.0, 1.0]], &[&[0.0, 0.0], &[0.0, 0.0]]);
        assert_abs_diff_eq!(expect_s2(&triplet).unwrap(), 2.0, epsilon = 1e-15);
        let d = decompose_s2(&triplet).unwrap();
        assert_abs_diff_eq!(d.s_effective, 1.0);
        assert_abs_diff_eq!(d.rohf_term, 2.0);
    }

    #[test]
    fn beta_majority_uses_max_min() {
        let d = decompose_s2(&pure_beta()).unwrap();
        assert_eq!(d.s_effective, 0.5);
        assert_eq!(d.rohf_term, 0.75);
        assert_eq!(d.spin_contamination, 0.0);
        assert_eq!(d.total, 0.75);
    }

    #[test]
    fn imaginary_residue_is_an_error() {
        assert!(real_part(C64::new(1.0, 1e-11), "x").is_ok());
        assert!(matches!(
            real_part(C64::new(1.0, 1e-9), "x"),
            Err(SpinError::NonHermitianResult { quantity: "x", .. })
        ));
    }
}
