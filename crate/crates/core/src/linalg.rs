use nalgebra::{DMatrix, SymmetricEigen};

use crate::{CMatrix, C64};

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub(crate) fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(hermitize(m));
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// `m^p` for a Hermitian positive-definite matrix.
pub(crate) fn hermitian_power(m: &CMatrix, p: f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let n = m.nrows();
    let scaled = DMatrix::from_fn(n, n, |r, c| vectors[(r, c)] * values[c].powf(p));
    hermitize(&(scaled * vectors.adjoint()))
}

pub(crate) fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn max_abs_from_identity(m: &CMatrix) -> f64 {
    let n = m.nrows();
    max_abs(&(m - CMatrix::identity(n, n)))
}

pub(crate) fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Frobenius inner product `sum_ij a_ij * conj(b_ij)`.
pub(crate) fn frobenius_dot(a: &CMatrix, b: &CMatrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum()
}
