//! Global SU(2) rotations of the spin frame.

use nalgebra::{Matrix2, Matrix3, Vector3};

use crate::determinant::SpinorDeterminant;
use crate::error::{Result, SpinError};
use crate::{CMatrix, C64};

const UNIT_TOL: f64 = 1e-10;
/// Below this angle from `+-z` the rotation axis `u x z` is undefined.
const POLE_ANGLE: f64 = 1e-15;

/// Rotation by `angle` radians about the unit vector `axis`, acting on each
/// spinor as `U = cos(angle/2) I - i sin(angle/2) (axis . sigma)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinRotation {
    axis: Vector3<f64>,
    angle: f64,
}

impl SpinRotation {
    pub fn new(axis: Vector3<f64>, angle: f64) -> Result<Self> {
        let norm = axis.norm();
        if (norm - 1.0).abs() > UNIT_TOL || !angle.is_finite() {
            return Err(SpinError::NotUnitVector { norm });
        }
        Ok(Self { axis: axis / norm, angle })
    }

    pub fn identity() -> Self {
        Self { axis: Vector3::z(), angle: 0.0 }
    }

    /// Rotation that carries the unit vector `u` onto `+z`.
    pub fn to_z(u: &Vector3<f64>) -> Result<Self> {
        let norm = u.norm();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(SpinError::NotUnitVector { norm });
        }
        let u = u / norm;
        let cos = u.z;
        let cross = u.cross(&Vector3::z());
        let sin = cross.norm();
        if sin < POLE_ANGLE {
            return Ok(if cos > 0.0 {
                Self::identity()
            } else {
                Self { axis: Vector3::x(), angle: std::f64::consts::PI }
            });
        }
        Ok(Self { axis: cross / sin, angle: sin.atan2(cos) })
    }

    pub fn axis(&self) -> Vector3<f64> {
        self.axis
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// The 2x2 spinor matrix in the `(alpha, beta)` basis.
    pub fn unitary(&self) -> Matrix2<C64> {
        let (s, c) = (self.angle / 2.0).sin_cos();
        let [nx, ny, nz] = [self.axis.x, self.axis.y, self.axis.z];
        // c I - i s (nx sx + ny sy + nz sz)
        Matrix2::new(
            C64::new(c, -s * nz),
            C64::new(-s * ny, -s * nx),
            C64::new(s * ny, -s * nx),
            C64::new(c, s * nz),
        )
    }

    /// The SO(3) image: `<S>` of the rotated determinant is `R <S>`.
    pub fn rotation_matrix(&self) -> Matrix3<f64> {
        let (s, c) = self.angle.sin_cos();
        let n = self.axis;
        let k = n.cross_matrix();
        Matrix3::identity() * c + k * s + n * n.transpose() * (1.0 - c)
    }
}

/// Multiplies the `(alpha, beta)` pair of every spinor by `rot.unitary()`.
/// Spatial parts and the metric are untouched.
pub fn su2_rotate(det: &SpinorDeterminant, rot: &SpinRotation) -> SpinorDeterminant {
    let u = rot.unitary();
    let a = det.coeff_alpha();
    let b = det.coeff_beta();
    let alpha: CMatrix = a * u[(0, 0)] + b * u[(0, 1)];
    let beta: CMatrix = a * u[(1, 0)] + b * u[(1, 1)];
    det.with_coefficients(alpha, beta)
}

/// Rotates the determinant so that `u` becomes the new quantization axis.
pub fn align_to_axis(det: &SpinorDeterminant, u: &Vector3<f64>) -> Result<SpinorDeterminant> {
    Ok(su2_rotate(det, &SpinRotation::to_z(u)?))
}
