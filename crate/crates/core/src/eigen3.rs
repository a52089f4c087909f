//! Cyclic Jacobi eigensolver for real symmetric 3x3 matrices.

use nalgebra::{Matrix3, Vector3};

const MAX_SWEEPS: usize = 64;

/// Eigenvalues (ascending) and the matching orthonormal eigenvectors as
/// columns.
pub fn symmetric_eigen(a: &Matrix3<f64>) -> (Vector3<f64>, Matrix3<f64>) {
    let mut m = *a;
    let mut v = Matrix3::<f64>::identity();
    let scale = a.abs().max();
    if scale == 0.0 {
        return (Vector3::zeros(), v);
    }

    for _ in 0..MAX_SWEEPS {
        let off = m[(0, 1)].powi(2) + m[(0, 2)].powi(2) + m[(1, 2)].powi(2);
        if off.sqrt() <= f64::EPSILON * 1e-3 * scale {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = m[(p, q)];
            if apq == 0.0 {
                continue;
            }
            let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            rotate(&mut m, &mut v, p, q, c, s);
        }
    }

    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let values = Vector3::new(m[(order[0], order[0])], m[(order[1], order[1])], m[(order[2], order[2])]);
    let vectors = Matrix3::from_fn(|r, c| v[(r, order[c])]);
    (values, vectors)
}

/// Applies `m <- J^T m J`, `v <- v J` for the plane rotation in `(p, q)`.
fn rotate(m: &mut Matrix3<f64>, v: &mut Matrix3<f64>, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..3 {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = c * mkp - s * mkq;
        m[(k, q)] = s * mkp + c * mkq;
    }
    for k in 0..3 {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = c * mpk - s * mqk;
        m[(q, k)] = s * mpk + c * mqk;
    }
    m[(p, q)] = 0.0;
    m[(q, p)] = 0.0;
    for k in 0..3 {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;
    use proptest::prelude::*;

    fn check(a: &Matrix3<f64>) {
        let (w, v) = symmetric_eigen(a);
        let scale = a.abs().max().max(1.0);
        for k in 0..3 {
            let col = v.column(k);
            let res = (a * col - col * w[k]).norm();
            assert!(res <= 1e-13 * scale, "residual {res} for pair {k}");
        }
        assert!((v.transpose() * v - Matrix3::identity()).abs().max() < 1e-13);
        assert!(w[0] <= w[1] && w[1] <= w[2]);
        let mut reference: Vec<f64> = SymmetricEigen::new(*a).eigenvalues.iter().copied().collect();
        reference.sort_by(f64::total_cmp);
        for k in 0..3 {
            assert!((w[k] - reference[k]).abs() <= 1e-13 * scale);
        }
    }

    #[test]
    fn diagonal_and_zero() {
        let (w, v) = symmetric_eigen(&Matrix3::from_diagonal(&Vector3::new(0.25, 0.0, 0.25)));
        assert_eq!(w, Vector3::new(0.0, 0.25, 0.25));
        assert_eq!(v.column(0).abs(), Vector3::y());
        let (w, v) = symmetric_eigen(&Matrix3::zeros());
        assert_eq!(w, Vector3::zeros());
        assert_eq!(v, Matrix3::identity());
    }

    #[test]
    fn ill_conditioned() {
        check(&Matrix3::new(1e8, 1.0, 0.0, 1.0, 1e-8, 1e-9, 0.0, 1e-9, 1e-8));
        check(&Matrix3::new(1.0, 1e-14, 0.0, 1e-14, 1.0, 0.0, 0.0, 0.0, 1.0));
    }

    proptest! {
        #[test]
        fn matches_reference(e in proptest::array::uniform6(-2.0f64..2.0)) {
            let a = Matrix3::new(e[0], e[3], e[4], e[3], e[1], e[5], e[4], e[5], e[2]);
            check(&a);
        }
    }
}
