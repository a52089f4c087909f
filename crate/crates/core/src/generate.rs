//! Canonical test determinants: closed-shell, restricted open-shell,
//! different-orbitals-for-different-spins and random general complex.

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::determinant::{SpinorDeterminant, LINEAR_DEPENDENCE_TOL};
use crate::error::{Result, SpinError};
use crate::linalg::{hermitian_eigen, hermitian_power};
use crate::{CMatrix, C64};

/// Seeded generator used by every random routine in this crate.
pub fn seeded_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Matrix of independent standard complex Gaussians (`E|z|^2 = 1`).
pub fn random_complex_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * scale, im * scale)
    })
}

/// Haar-distributed `n x n` unitary: QR of a complex Gaussian matrix with
/// the phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let qr = random_complex_matrix(n, n, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        let mut col = q.column_mut(k);
        col *= phase;
    }
    q
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::new(rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal));
        let n: f64 = v.norm();
        if n > 1e-8 {
            return v / n;
        }
    }
}

/// Löwdin-orthonormalizes the columns of a spatial orbital matrix.
fn orthonormal_orbitals(orbitals: &CMatrix) -> Result<CMatrix> {
    if orbitals.ncols() == 0 {
        return Ok(orbitals.clone());
    }
    if orbitals.ncols() > orbitals.nrows() {
        return Err(SpinError::LinearlyDependent { min_eigenvalue: 0.0 });
    }
    let gram = orbitals.adjoint() * orbitals;
    let (values, _) = hermitian_eigen(&gram);
    if !(values[0] > LINEAR_DEPENDENCE_TOL) {
        return Err(SpinError::LinearlyDependent { min_eigenvalue: values[0] });
    }
    Ok(orbitals * hermitian_power(&gram, -0.5))
}

/// Builds a determinant from pure-α orbitals followed by pure-β orbitals.
fn collinear_determinant(alpha_orbitals: &CMatrix, beta_orbitals: &CMatrix) -> Result<SpinorDeterminant> {
    let m = alpha_orbitals.nrows().max(beta_orbitals.nrows());
    if alpha_orbitals.ncols() > 0 && beta_orbitals.ncols() > 0 && alpha_orbitals.nrows() != beta_orbitals.nrows() {
        return Err(SpinError::DimensionMismatch(format!(
            "alpha orbitals have {} rows, beta orbitals {}",
            alpha_orbitals.nrows(),
            beta_orbitals.nrows()
        )));
    }
    let p = alpha_orbitals.ncols();
    let q = beta_orbitals.ncols();
    let mut alpha = CMatrix::zeros(m, p + q);
    let mut beta = CMatrix::zeros(m, p + q);
    if p > 0 {
        alpha.view_mut((0, 0), (m, p)).copy_from(alpha_orbitals);
    }
    if q > 0 {
        beta.view_mut((0, p), (m, q)).copy_from(beta_orbitals);
    }
    SpinorDeterminant::new(alpha, beta, None)
}

/// Closed shell: every orbital occupied once with α and once with β spin.
pub fn gen_rhf(orbitals: &CMatrix) -> Result<SpinorDeterminant> {
    let phi = orthonormal_orbitals(orbitals)?;
    collinear_determinant(&phi, &phi)
}

/// Restricted open shell: `closed` doubly occupied, `open` singly occupied
/// with α spin. The two sets are orthonormalized together so paired α and β
/// spin-orbitals share their spatial parts exactly.
pub fn gen_rohf(closed: &CMatrix, open: &CMatrix) -> Result<SpinorDeterminant> {
    let k = closed.ncols();
    let p = open.ncols();
    if k > 0 && p > 0 && closed.nrows() != open.nrows() {
        return Err(SpinError::DimensionMismatch(format!(
            "closed orbitals have {} rows, open orbitals {}",
            closed.nrows(),
            open.nrows()
        )));
    }
    let m = closed.nrows().max(open.nrows());
    let mut all = CMatrix::zeros(m, k + p);
    if k > 0 {
        all.view_mut((0, 0), (m, k)).copy_from(closed);
    }
    if p > 0 {
        all.view_mut((0, k), (m, p)).copy_from(open);
    }
    let phi = orthonormal_orbitals(&all)?;
    let paired = phi.columns(0, k).into_owned();
    collinear_determinant(&phi, &paired)
}

/// Different orbitals for different spins: independent α and β sets.
pub fn gen_dods(alpha_orbitals: &CMatrix, beta_orbitals: &CMatrix) -> Result<SpinorDeterminant> {
    collinear_determinant(&orthonormal_orbitals(alpha_orbitals)?, &orthonormal_orbitals(beta_orbitals)?)
}

/// First `n_electrons` columns of a seeded Haar-random `2M x 2M` unitary,
/// rows `0..M` as α components and `M..2M` as β components.
pub fn gen_random_gchf(basis_dim: usize, n_electrons: usize, seed: u64) -> Result<SpinorDeterminant> {
    if basis_dim == 0 || n_electrons == 0 || n_electrons > 2 * basis_dim {
        return Err(SpinError::DimensionMismatch(format!(
            "cannot place {n_electrons} electrons in {basis_dim} spatial functions"
        )));
    }
    let mut rng = seeded_rng(seed);
    let u = haar_unitary(2 * basis_dim, &mut rng);
    let alpha = u.view((0, 0), (basis_dim, n_electrons)).into_owned();
    let beta = u.view((basis_dim, 0), (basis_dim, n_electrons)).into_owned();
    SpinorDeterminant::new(alpha, beta, None)
}
