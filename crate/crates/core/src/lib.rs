//! Spin analysis of general complex spinor determinants.
//!
//! A determinant built from two-component spinors need not be an eigenfunction
//! of `S_z` or `S^2`. This crate evaluates the spin expectation values of such a
//! determinant from the overlaps of its α and β spinor components, splits
//! `<S^2>` into a reference open-shell term plus z-noncollinearity, spin
//! contamination and xy-perpendicularity contributions, and finds the
//! quantization axis along which the spin density is most collinear.
//!
//! Every closed-form expression is cross-checked by [`oracle`], which expands
//! the determinant over elementary Slater determinants and applies the spin
//! operators in second quantization.
//!
//! ```
//! use gchf_spin::{build_overlap_blocks, decompose_s2, SpinorDeterminant, CMatrix, C64};
//!
//! let h = std::f64::consts::FRAC_1_SQRT_2;
//! let alpha = CMatrix::from_element(1, 1, C64::new(h, 0.0));
//! let beta = CMatrix::from_element(1, 1, C64::new(h, 0.0));
//! let det = SpinorDeterminant::new(alpha, beta, None).unwrap();
//! let blocks = build_overlap_blocks(&det).unwrap();
//! let d = decompose_s2(&blocks).unwrap();
//! assert!((d.total - 0.75).abs() < 1e-12);
//! ```

// `!(x <= tol)` is deliberate: NaN has to fail every validation check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod collinearity;
pub mod determinant;
pub mod eigen3;
pub mod error;
pub mod frame;
pub mod generate;
mod linalg;
pub mod oracle;
pub mod spin;

pub use collinearity::{a_matrix, col_along, min_collinearity, spin_vector, CollinearityResult, SpinVector};
pub use determinant::{build_overlap_blocks, electron_counts, orthonormalize, OverlapBlocks, SpinorDeterminant};
pub use error::{Result, SpinError};
pub use frame::{align_to_axis, su2_rotate, SpinRotation};
pub use generate::{gen_dods, gen_random_gchf, gen_rhf, gen_rohf};
pub use spin::{
    decompose_s2, expect_s2, expect_sminus_splus, expect_splus, expect_splus_sminus, expect_sz,
    expect_sz2, S2Decomposition,
};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
