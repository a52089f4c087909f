//! Brute-force reference values from the full `Ne`-electron Fock space.
//!
//! Spin-orbitals are ordered `1a < 2a < ... < Ma < 1b < ... < Mb` and an
//! occupation pattern is a bitmask over these `2M` positions. The determinant
//! `phi_1 ^ ... ^ phi_Ne` has amplitude `det(C[P, :])` on pattern `P`, where
//! `C` is the stacked `2M x Ne` coefficient matrix and the rows of `P` are
//! taken in ascending order. Spin operators act as one-body second-quantized
//! operators with fermionic signs from that ordering.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use crate::determinant::SpinorDeterminant;
use crate::error::{Result, SpinError};
use crate::linalg::hermitian_power;
use crate::{CMatrix, C64};

pub const MAX_SPATIAL: usize = 6;
pub const MAX_STATES: u128 = 10_000;

pub type Pattern = u64;

/// Expansion coefficients over every occupation pattern with `n_electrons`
/// particles in `2 * m_spatial` spin-orbitals.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    m_spatial: usize,
    n_electrons: usize,
    amplitudes: BTreeMap<Pattern, C64>,
}

/// All `n`-subsets of `2m` spin-orbitals in ascending bitmask order.
pub fn patterns(m_spatial: usize, n_electrons: usize) -> Vec<Pattern> {
    let n_orb = 2 * m_spatial;
    (0u64..(1u64 << n_orb)).filter(|p| p.count_ones() as usize == n_electrons).collect()
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn guard(m_spatial: usize, n_electrons: usize) -> Result<()> {
    let states = binomial(2 * m_spatial as u64, n_electrons as u64);
    if m_spatial > MAX_SPATIAL || states > MAX_STATES {
        return Err(SpinError::TooLarge { m_spatial, states });
    }
    Ok(())
}

impl FockVector {
    pub fn zeros(m_spatial: usize, n_electrons: usize) -> Self {
        let amplitudes = patterns(m_spatial, n_electrons).into_iter().map(|p| (p, C64::new(0.0, 0.0))).collect();
        Self { m_spatial, n_electrons, amplitudes }
    }

    /// Builds a vector from amplitudes listed in [`patterns`] order.
    pub fn from_amplitudes(m_spatial: usize, n_electrons: usize, values: &[C64]) -> Result<Self> {
        let pats = patterns(m_spatial, n_electrons);
        if pats.len() != values.len() {
            return Err(SpinError::DimensionMismatch(format!(
                "{} amplitudes for {} patterns",
                values.len(),
                pats.len()
            )));
        }
        Ok(Self { m_spatial, n_electrons, amplitudes: pats.into_iter().zip(values.iter().copied()).collect() })
    }

    pub fn m_spatial(&self) -> usize {
        self.m_spatial
    }

    pub fn n_electrons(&self) -> usize {
        self.n_electrons
    }

    pub fn amplitudes(&self) -> &BTreeMap<Pattern, C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, pattern: Pattern) -> C64 {
        self.amplitudes.get(&pattern).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &FockVector) -> C64 {
        self.amplitudes.iter().map(|(p, a)| a.conj() * other.amplitude(*p)).sum()
    }

    fn combine(&self, other: &FockVector, f: impl Fn(C64, C64) -> C64) -> FockVector {
        assert_eq!((self.m_spatial, self.n_electrons), (other.m_spatial, other.n_electrons));
        let amplitudes = self.amplitudes.iter().map(|(p, a)| (*p, f(*a, other.amplitude(*p)))).collect();
        FockVector { m_spatial: self.m_spatial, n_electrons: self.n_electrons, amplitudes }
    }
}

impl Add for &FockVector {
    type Output = FockVector;
    fn add(self, rhs: &FockVector) -> FockVector {
        self.combine(rhs, |a, b| a + b)
    }
}

impl Sub for &FockVector {
    type Output = FockVector;
    fn sub(self, rhs: &FockVector) -> FockVector {
        self.combine(rhs, |a, b| a - b)
    }
}

impl Mul<C64> for &FockVector {
    type Output = FockVector;
    fn mul(self, rhs: C64) -> FockVector {
        let amplitudes = self.amplitudes.iter().map(|(p, a)| (*p, a * rhs)).collect();
        FockVector { m_spatial: self.m_spatial, n_electrons: self.n_electrons, amplitudes }
    }
}

/// Re-expresses a determinant over an orthonormal spatial basis by
/// multiplying its coefficients with the square root of the AO overlap.
pub fn to_orthonormal_basis(det: &SpinorDeterminant) -> Result<SpinorDeterminant> {
    match det.ao_overlap() {
        None => Ok(det.clone()),
        Some(s) => {
            let root = hermitian_power(s, 0.5);
            SpinorDeterminant::from_parts(&root * det.coeff_alpha(), &root * det.coeff_beta(), None)
        }
    }
}

/// Amplitudes of the determinant on every occupation pattern.
pub fn expand(det: &SpinorDeterminant) -> Result<FockVector> {
    if det.ao_overlap().is_some() {
        return Err(SpinError::MetricNotIdentity);
    }
    let m = det.basis_dim();
    let ne = det.n_electrons();
    guard(m, ne)?;
    let stacked = det.stacked();
    let amplitudes = patterns(m, ne)
        .into_iter()
        .map(|p| {
            let rows: Vec<usize> = (0..2 * m).filter(|&r| p >> r & 1 == 1).collect();
            let minor = CMatrix::from_fn(ne, ne, |i, j| stacked[(rows[i], j)]);
            (p, minor.determinant())
        })
        .collect();
    Ok(FockVector { m_spatial: m, n_electrons: ne, amplitudes })
}

/// `a_p^† a_q` on a pattern: the resulting pattern and sign, or `None` if the
/// result vanishes.
fn excite(pattern: Pattern, p: usize, q: usize) -> Option<(Pattern, f64)> {
    if pattern >> q & 1 == 0 {
        return None;
    }
    let below = |bits: Pattern, k: usize| (bits & ((1u64 << k) - 1)).count_ones();
    let removed = pattern & !(1u64 << q);
    if removed >> p & 1 == 1 {
        return None;
    }
    let parity = below(pattern, q) + below(removed, p);
    let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
    Some((removed | (1u64 << p), sign))
}

/// `sum_p coeff * a_{to(p)}^† a_{from(p)}` over spatial functions `p`.
fn one_body(vec: &FockVector, coeff: C64, to_beta: bool, from_beta: bool) -> FockVector {
    let m = vec.m_spatial;
    let mut out = FockVector::zeros(m, vec.n_electrons);
    for (&pat, &amp) in &vec.amplitudes {
        if amp == C64::new(0.0, 0.0) {
            continue;
        }
        for k in 0..m {
            let to = k + if to_beta { m } else { 0 };
            let from = k + if from_beta { m } else { 0 };
            if let Some((target, sign)) = excite(pat, to, from) {
                *out.amplitudes.get_mut(&target).expect("particle number conserved") += amp * coeff * sign;
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinOp {
    Sz,
    Splus,
    Sminus,
    Sx,
    Sy,
}

impl SpinOp {
    pub fn cartesian(axis: usize) -> SpinOp {
        [SpinOp::Sx, SpinOp::Sy, SpinOp::Sz][axis]
    }
}

pub fn apply_spin(vec: &FockVector, op: SpinOp) -> FockVector {
    let one = C64::new(1.0, 0.0);
    match op {
        SpinOp::Sz => {
            let up = one_body(vec, C64::new(0.5, 0.0), false, false);
            let down = one_body(vec, C64::new(0.5, 0.0), true, true);
            &up - &down
        }
        SpinOp::Splus => one_body(vec, one, false, true),
        SpinOp::Sminus => one_body(vec, one, true, false),
        SpinOp::Sx => &(&apply_spin(vec, SpinOp::Splus) + &apply_spin(vec, SpinOp::Sminus)) * C64::new(0.5, 0.0),
        SpinOp::Sy => &(&apply_spin(vec, SpinOp::Splus) - &apply_spin(vec, SpinOp::Sminus)) * C64::new(0.0, -0.5),
    }
}

/// Operators whose expectation value the oracle can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Observable {
    Sz,
    Sz2,
    SminusSplus,
    SplusSminus,
    S2,
    Splus,
    /// `S_mu`, `0, 1, 2 = x, y, z`.
    Component(usize),
    /// `S_mu S_nu`.
    Product(usize, usize),
}

impl Observable {
    /// Operator string, rightmost factor applied first.
    fn factors(self) -> Vec<Vec<SpinOp>> {
        use SpinOp::*;
        match self {
            Observable::Sz => vec![vec![Sz]],
            Observable::Sz2 => vec![vec![Sz, Sz]],
            Observable::SminusSplus => vec![vec![Sminus, Splus]],
            Observable::SplusSminus => vec![vec![Splus, Sminus]],
            Observable::S2 => vec![vec![Sx, Sx], vec![Sy, Sy], vec![Sz, Sz]],
            Observable::Splus => vec![vec![Splus]],
            Observable::Component(mu) => vec![vec![SpinOp::cartesian(mu)]],
            Observable::Product(mu, nu) => vec![vec![SpinOp::cartesian(mu), SpinOp::cartesian(nu)]],
        }
    }
}

/// `<v| op_1 ... op_k |v>`.
pub fn expectation_of(vec: &FockVector, ops: &[SpinOp]) -> C64 {
    let mut w = vec.clone();
    for op in ops.iter().rev() {
        w = apply_spin(&w, *op);
    }
    vec.inner(&w)
}

/// Expectation value of `which` in the expanded determinant.
pub fn oracle_expectation(det: &SpinorDeterminant, which: Observable) -> Result<C64> {
    guard(det.basis_dim(), det.n_electrons())?;
    let vec = expand(&to_orthonormal_basis(det)?)?;
    Ok(expectation_on(&vec, which))
}

/// Same as [`oracle_expectation`] on an already expanded vector.
pub fn expectation_on(vec: &FockVector, which: Observable) -> C64 {
    which.factors().iter().map(|ops| expectation_of(vec, ops)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_random_gchf, random_complex_matrix, seeded_rng};
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn det1(a: f64, b: f64) -> SpinorDeterminant {
        SpinorDeterminant::new(CMatrix::from_element(1, 1, c(a)), CMatrix::from_element(1, 1, c(b)), None).unwrap()
    }

    const A1: Pattern = 0b01;
    const B1: Pattern = 0b10;

    #[test]
    fn expands_one_electron() {
        let v = expand(&det1(1.0, 0.0)).unwrap();
        assert_eq!(v.amplitude(A1), c(1.0));
        assert_eq!(v.amplitude(B1), c(0.0));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = expand(&det1(h, h)).unwrap();
        assert_abs_diff_eq!(v.amplitude(A1).re, h);
        assert_abs_diff_eq!(v.amplitude(B1).re, h);
    }

    #[test]
    fn elementary_actions() {
        let up = FockVector::from_amplitudes(1, 1, &[c(1.0), c(0.0)]).unwrap();
        let down = FockVector::from_amplitudes(1, 1, &[c(0.0), c(1.0)]).unwrap();
        assert_eq!(apply_spin(&up, SpinOp::Sz), &up * c(0.5));
        assert_eq!(apply_spin(&down, SpinOp::Splus), up);
        assert_eq!(apply_spin(&up, SpinOp::Splus).norm_sqr(), 0.0);

        let singlet = expand(&crate::generate::gen_rhf(&CMatrix::from_element(1, 1, c(1.0))).unwrap()).unwrap();
        assert_eq!(apply_spin(&singlet, SpinOp::Splus).norm_sqr(), 0.0);
        assert_eq!(apply_spin(&singlet, SpinOp::Sminus).norm_sqr(), 0.0);
    }

    #[test]
    fn signs_follow_ordering() {
        // Bits: 0 = 1a, 1 = 2a, 2 = 1b, 3 = 2b.
        // a_{1a}^† a_{1b} a_{2a}^† a_{1b}^† |0> = -a_{1a}^† a_{2a}^† |0>.
        assert_eq!(excite(0b0110, 0, 2), Some((0b0011, -1.0)));
        assert_eq!(excite(0b1010, 0, 3), Some((0b0011, -1.0)));
        assert_eq!(excite(0b1100, 0, 2), Some((0b1001, 1.0)));
        assert_eq!(excite(0b0101, 3, 0), Some((0b1100, -1.0)));
        assert_eq!(excite(0b1010, 1, 3), None);
        assert_eq!(excite(0b0001, 0, 2), None);
        assert_eq!(excite(0b0101, 0, 0), Some((0b0101, 1.0)));

        let m = 2;
        let values: Vec<C64> = patterns(m, 2).iter().map(|&p| if p == 0b0110 { c(1.0) } else { c(0.0) }).collect();
        let v = FockVector::from_amplitudes(m, 2, &values).unwrap();
        let w = apply_spin(&v, SpinOp::Splus);
        assert_eq!(w.amplitude(0b0011), c(-1.0));
        assert_abs_diff_eq!(w.norm_sqr(), 1.0);
    }

    #[test]
    fn random_expansion_is_normalized() {
        let v = expand(&gen_random_gchf(3, 2, 1).unwrap()).unwrap();
        assert_eq!(v.len(), 15);
        assert_abs_diff_eq!(v.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn small_expectations() {
        let s2 = oracle_expectation(&det1(1.0, 0.0), Observable::S2).unwrap();
        assert_abs_diff_eq!(s2.re, 0.75, epsilon = 1e-15);
        let triplet = SpinorDeterminant::new(CMatrix::identity(2, 2), CMatrix::zeros(2, 2), None).unwrap();
        assert_abs_diff_eq!(oracle_expectation(&triplet, Observable::S2).unwrap().re, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn metric_requires_transform() {
        let s = CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.2), c(0.2), c(1.0)]);
        let n = (2.0f64 + 0.4).sqrt();
        let det = SpinorDeterminant::new(
            CMatrix::from_row_slice(2, 1, &[c(1.0 / n), c(1.0 / n)]),
            CMatrix::zeros(2, 1),
            Some(s),
        )
        .unwrap();
        assert_eq!(expand(&det), Err(SpinError::MetricNotIdentity));
        let sz = oracle_expectation(&det, Observable::Sz).unwrap();
        assert_abs_diff_eq!(sz.re, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn guard_rail() {
        let det = SpinorDeterminant::from_parts(CMatrix::zeros(7, 1), CMatrix::zeros(7, 1), None).unwrap();
        assert!(matches!(oracle_expectation(&det, Observable::Sz), Err(SpinError::TooLarge { .. })));
        assert_eq!(binomial(12, 6), 924);
        assert_eq!(binomial(3, 5), 0);
    }

    fn random_vector(m: usize, n: usize, seed: u64) -> FockVector {
        let mut rng = seeded_rng(seed);
        let len = patterns(m, n).len();
        let values: Vec<C64> = random_complex_matrix(len, 1, &mut rng).iter().copied().collect();
        FockVector::from_amplitudes(m, n, &values).unwrap()
    }

    #[test]
    fn commutation_relations() {
        use SpinOp::*;
        for seed in 0..50u64 {
            let m = 2 + (seed % 2) as usize;
            let n = 1 + (seed % 4) as usize;
            let v = random_vector(m, n, seed);
            let pm = apply_spin(&apply_spin(&v, Sminus), Splus);
            let mp = apply_spin(&apply_spin(&v, Splus), Sminus);
            let lhs = &pm - &mp;
            let rhs = &apply_spin(&v, Sz) * c(2.0);
            assert!((&lhs - &rhs).norm_sqr().sqrt() < 1e-12);
            for (op, sign) in [(Splus, 1.0), (Sminus, -1.0)] {
                let a = apply_spin(&apply_spin(&v, op), Sz);
                let b = apply_spin(&apply_spin(&v, Sz), op);
                let comm = &a - &b;
                let expected = &apply_spin(&v, op) * c(sign);
                assert!((&comm - &expected).norm_sqr().sqrt() < 1e-12);
            }
        }
    }

    #[test]
    fn cartesian_components_are_hermitian() {
        for seed in 0..20u64 {
            let v = random_vector(2, 2, 100 + seed);
            let w = random_vector(2, 2, 200 + seed);
            for op in [SpinOp::Sx, SpinOp::Sy, SpinOp::Sz] {
                let lhs = v.inner(&apply_spin(&w, op));
                let rhs = w.inner(&apply_spin(&v, op)).conj();
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }
}
