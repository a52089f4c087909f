//! Published H2O+ reference values and the regression checks built on them.
//!
//! The wave function itself is not available; these checks only exercise
//! the 3x3 eigenproblem on the published collinearity matrix and the
//! internal consistency of the published `<S^2>` breakdown.

use gchf_spin::collinearity::col_along_matrix;
use gchf_spin::min_collinearity;
use nalgebra::{Matrix3, Vector3};

/// Collinearity matrix of the H2O+ determinant (z perpendicular to the
/// molecular plane).
pub fn h2o_plus_a_matrix() -> Matrix3<f64> {
    Matrix3::new(
        0.253128, 0.000145, -0.009774, //
        0.000145, 0.253451, 0.003745, //
        -0.009774, 0.003745, 0.000461,
    )
}

pub const H2O_PLUS_COL: f64 = 0.000028;
pub const H2O_PLUS_AXIS: [f64; 3] = [0.0385908, -0.014789, 0.999146];
pub const COL_TOL: f64 = 5e-6;
pub const AXIS_TOL: f64 = 1e-3;

pub const N_ALPHA: f64 = 4.999546;
pub const N_BETA: f64 = 4.000454;
pub const ROHF_TERM: f64 = 0.749091;
pub const Z_NONCOLLINEARITY: f64 = 0.000461;
pub const XY_PERPENDICULARITY: f64 = 0.000427;
pub const SPIN_CONTAMINATION: f64 = 0.007033;
pub const S2_TOTAL: f64 = 0.757013;
/// Tolerance on the component sum against the printed total.
pub const SUM_TOL: f64 = 2e-6;

#[derive(Debug, Clone)]
pub struct FixtureCheck {
    pub name: &'static str,
    pub value: String,
    pub expected: String,
    pub passed: bool,
}

/// `(N_alpha/2 - N_beta/2)(N_alpha/2 - N_beta/2 + 1)` from the printed counts.
pub fn rohf_term_from_counts(n_alpha: f64, n_beta: f64) -> f64 {
    let s = n_alpha / 2.0 - n_beta / 2.0;
    s * (s + 1.0)
}

pub fn axis_deviation(axis: &Vector3<f64>) -> f64 {
    let reference = Vector3::from(H2O_PLUS_AXIS);
    (axis - reference).amax().min((axis + reference).amax())
}

pub fn run_fixtures() -> Vec<FixtureCheck> {
    let a = h2o_plus_a_matrix();
    let mut checks = Vec::new();
    match min_collinearity(&a) {
        Ok(res) => {
            checks.push(FixtureCheck {
                name: "col of published A",
                value: format!("{:.6}", res.col),
                expected: format!("{H2O_PLUS_COL:.6} +- {COL_TOL:e}"),
                passed: (res.col - H2O_PLUS_COL).abs() <= COL_TOL,
            });
            let dev = axis_deviation(&res.optimal_axis);
            checks.push(FixtureCheck {
                name: "optimal axis u0",
                value: format!("({:+.7}, {:+.7}, {:+.7})", res.optimal_axis.x, res.optimal_axis.y, res.optimal_axis.z),
                expected: format!(
                    "({:+.7}, {:+.7}, {:+.7}) +- {AXIS_TOL:e} up to sign",
                    H2O_PLUS_AXIS[0], H2O_PLUS_AXIS[1], H2O_PLUS_AXIS[2]
                ),
                passed: dev <= AXIS_TOL,
            });
        }
        Err(e) => checks.push(FixtureCheck {
            name: "col of published A",
            value: e.to_string(),
            expected: "a decomposition".into(),
            passed: false,
        }),
    }
    let col_z = col_along_matrix(&a, &Vector3::z()).unwrap_or(f64::NAN);
    checks.push(FixtureCheck {
        name: "col(z) equals z-noncollinearity",
        value: format!("{col_z:.6}"),
        expected: format!("{Z_NONCOLLINEARITY:.6}"),
        passed: (col_z - Z_NONCOLLINEARITY).abs() <= 5e-7,
    });
    let sum = ROHF_TERM + Z_NONCOLLINEARITY + SPIN_CONTAMINATION + XY_PERPENDICULARITY;
    checks.push(FixtureCheck {
        name: "component sum equals <S^2>",
        value: format!("{sum:.6}"),
        expected: format!("{S2_TOTAL:.6} +- {SUM_TOL:e}"),
        passed: (sum - S2_TOTAL).abs() <= SUM_TOL,
    });
    checks
}
