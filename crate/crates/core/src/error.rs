use thiserror::Error;

pub type Result<T> = std::result::Result<T, SpinError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpinError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("spinors are not orthonormal (max |G - I| = {residual:.3e})")]
    NotOrthonormal { residual: f64 },

    #[error("invalid AO overlap matrix: {0}")]
    InvalidMetric(String),

    #[error("spinors are linearly dependent (smallest Gram eigenvalue {min_eigenvalue:.3e})")]
    LinearlyDependent { min_eigenvalue: f64 },

    #[error("{quantity} should be real but has imaginary part {imag:.3e}")]
    NonHermitianResult { quantity: &'static str, imag: f64 },

    #[error("expected a unit vector, got norm {norm}")]
    NotUnitVector { norm: f64 },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:.3e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("Fock-space expansion requires an orthonormal spatial basis")]
    MetricNotIdentity,

    #[error("Fock space too large: M = {m_spatial}, {states} determinants")]
    TooLarge { m_spatial: usize, states: u128 },
}
