//! Analysis report: assembled from the library, re-checked, then rendered
//! as text (6 decimals) or JSON (full precision).

use std::fmt::Write as _;

use gchf_spin::collinearity::{col_along_matrix, CollinearityResult};
use gchf_spin::{
    a_matrix, align_to_axis, build_overlap_blocks, decompose_s2, electron_counts, expect_s2, expect_sminus_splus,
    expect_splus, expect_splus_sminus, expect_sz, expect_sz2, min_collinearity, spin_vector, S2Decomposition,
    SpinorDeterminant,
};
use nalgebra::Vector3;
use serde::Serialize;

use crate::format::Loaded;
use crate::CliError;

/// Tolerance for the cross-quantity identities re-checked before emission.
pub const IDENTITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub path: String,
    pub sha256: String,
    pub orthonormalized: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ElectronCounts {
    pub n_alpha: f64,
    pub n_beta: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Expectations {
    pub sz: f64,
    pub sz2: f64,
    pub sminus_splus: f64,
    pub splus_sminus: f64,
    pub splus: [f64; 2],
    pub s2: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Decomposition {
    pub s_effective: f64,
    pub rohf_term: f64,
    pub z_noncollinearity: f64,
    pub spin_contamination: f64,
    pub xy_perpendicularity: f64,
    pub total: f64,
}

impl From<S2Decomposition> for Decomposition {
    fn from(d: S2Decomposition) -> Self {
        Self {
            s_effective: d.s_effective,
            rohf_term: d.rohf_term,
            z_noncollinearity: d.z_noncollinearity,
            spin_contamination: d.spin_contamination,
            xy_perpendicularity: d.xy_perpendicularity,
            total: d.total,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Collinearity {
    pub a_matrix: [[f64; 3]; 3],
    pub eigenvalues: [f64; 3],
    pub eigenvectors: [[f64; 3]; 3],
    pub col: f64,
    pub optimal_axis: [f64; 3],
    pub degenerate: bool,
}

fn arr(v: &Vector3<f64>) -> [f64; 3] {
    [v.x, v.y, v.z]
}

impl From<&CollinearityResult> for Collinearity {
    fn from(r: &CollinearityResult) -> Self {
        let a = &r.a_matrix;
        Self {
            a_matrix: [0, 1, 2].map(|i| [a[(i, 0)], a[(i, 1)], a[(i, 2)]]),
            eigenvalues: r.eigenvalues,
            eigenvectors: r.eigenvectors.each_ref().map(arr),
            col: r.col,
            optimal_axis: arr(&r.optimal_axis),
            degenerate: r.degenerate,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxisCollinearity {
    pub axis: [f64; 3],
    pub col: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Aligned {
    pub axis: [f64; 3],
    pub decomposition: Decomposition,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub tool: String,
    pub version: String,
    pub input: Provenance,
    pub basis_dim: usize,
    pub n_electrons: usize,
    pub electron_counts: ElectronCounts,
    pub expectations: Expectations,
    pub decomposition: Decomposition,
    pub spin_vector: [f64; 3],
    pub collinearity: Collinearity,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis_collinearity: Option<AxisCollinearity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aligned: Option<Aligned>,
}

fn check(name: &str, lhs: f64, rhs: f64) -> Result<(), CliError> {
    let diff = (lhs - rhs).abs();
    if diff <= IDENTITY_TOL {
        Ok(())
    } else {
        Err(CliError::Identity(format!("{name}: {lhs} vs {rhs} (diff {diff:.3e})")))
    }
}

pub fn collinearity_of(det: &SpinorDeterminant) -> Result<CollinearityResult, CliError> {
    let blocks = build_overlap_blocks(det).map_err(CliError::from_core)?;
    let a = a_matrix(&blocks).map_err(CliError::from_core)?;
    min_collinearity(&a).map_err(CliError::from_core)
}

pub fn analyze(loaded: &Loaded, axis: Option<Vector3<f64>>, align_optimal: bool) -> Result<AnalysisReport, CliError> {
    let core = CliError::from_core;
    let det = &loaded.det;
    let blocks = build_overlap_blocks(det).map_err(core)?;
    let (n_alpha, n_beta) = electron_counts(&blocks);
    let s2 = expect_s2(&blocks).map_err(core)?;
    let splus = expect_splus(&blocks);
    let expectations = Expectations {
        sz: expect_sz(&blocks).map_err(core)?,
        sz2: expect_sz2(&blocks).map_err(core)?,
        sminus_splus: expect_sminus_splus(&blocks).map_err(core)?,
        splus_sminus: expect_splus_sminus(&blocks).map_err(core)?,
        splus: [splus.re, splus.im],
        s2,
    };
    let decomposition = decompose_s2(&blocks).map_err(core)?;
    let sv = spin_vector(&blocks).map_err(core)?;
    let a = a_matrix(&blocks).map_err(core)?;
    let col = min_collinearity(&a).map_err(core)?;

    check("electron count", n_alpha + n_beta, det.n_electrons() as f64)?;
    check("decomposition sum", decomposition.component_sum(), s2)?;
    check("trace identity", a.trace() + sv.norm_squared(), s2)?;

    let axis_collinearity = axis
        .map(|u| {
            let u = u.normalize();
            col_along_matrix(&a, &u).map(|c| AxisCollinearity { axis: arr(&u), col: c })
        })
        .transpose()
        .map_err(core)?;

    let aligned = if align_optimal {
        let rotated = align_to_axis(det, &col.optimal_axis).map_err(core)?;
        let d = decompose_s2(&build_overlap_blocks(&rotated).map_err(core)?).map_err(core)?;
        check("aligned z-noncollinearity", d.z_noncollinearity, col.col)?;
        check("aligned total", d.total, s2)?;
        Some(Aligned { axis: arr(&col.optimal_axis), decomposition: d.into() })
    } else {
        None
    };

    Ok(AnalysisReport {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        input: Provenance {
            path: loaded.path.clone(),
            sha256: loaded.sha256.clone(),
            orthonormalized: loaded.orthonormalized,
        },
        basis_dim: det.basis_dim(),
        n_electrons: det.n_electrons(),
        electron_counts: ElectronCounts { n_alpha, n_beta },
        expectations,
        decomposition: decomposition.into(),
        spin_vector: arr(&sv.to_vector()),
        collinearity: (&col).into(),
        axis_collinearity,
        aligned,
    })
}

fn line(out: &mut String, label: &str, value: f64) {
    let _ = writeln!(out, "{label:<32}{value:+.6}");
}

fn vec_line(out: &mut String, label: &str, v: &[f64; 3]) {
    let _ = writeln!(out, "{label:<32}{:+.6} {:+.6} {:+.6}", v[0], v[1], v[2]);
}

fn decomposition_text(out: &mut String, d: &Decomposition) {
    line(out, "s = |Na - Nb| / 2", d.s_effective);
    line(out, "s(s+1)", d.rohf_term);
    line(out, "z-noncollinearity", d.z_noncollinearity);
    line(out, "x,y-nonperpendicularity", d.xy_perpendicularity);
    line(out, "spin contamination", d.spin_contamination);
    line(out, "<S^2>", d.total);
}

pub fn collinearity_text(out: &mut String, c: &Collinearity) {
    let _ = writeln!(out, "collinearity matrix A");
    for row in &c.a_matrix {
        let _ = writeln!(out, "    {:+.6} {:+.6} {:+.6}", row[0], row[1], row[2]);
    }
    vec_line(out, "eigenvalues", &c.eigenvalues);
    line(out, "col", c.col);
    vec_line(out, "optimal axis u0", &c.optimal_axis);
    if c.degenerate {
        let _ = writeln!(out, "(lowest eigenvalue degenerate; axis chosen by tie-break)");
    }
}

pub fn render_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", r.tool, r.version);
    let _ = writeln!(out, "input {} (sha256 {})", r.input.path, r.input.sha256);
    if r.input.orthonormalized {
        let _ = writeln!(out, "spinors orthonormalized on load");
    }
    let _ = writeln!(out, "M = {}, Ne = {}", r.basis_dim, r.n_electrons);
    let _ = writeln!(out);
    line(&mut out, "N_alpha", r.electron_counts.n_alpha);
    line(&mut out, "N_beta", r.electron_counts.n_beta);
    line(&mut out, "<S_z>", r.expectations.sz);
    line(&mut out, "<S_z^2>", r.expectations.sz2);
    line(&mut out, "<S^- S^+>", r.expectations.sminus_splus);
    line(&mut out, "<S^+ S^->", r.expectations.splus_sminus);
    line(&mut out, "Re <S^+>", r.expectations.splus[0]);
    line(&mut out, "Im <S^+>", r.expectations.splus[1]);
    let _ = writeln!(out);
    decomposition_text(&mut out, &r.decomposition);
    let _ = writeln!(out);
    vec_line(&mut out, "<S> (x, y, z)", &r.spin_vector);
    collinearity_text(&mut out, &r.collinearity);
    if let Some(ac) = &r.axis_collinearity {
        vec_line(&mut out, "requested axis", &ac.axis);
        line(&mut out, "col(axis)", ac.col);
    }
    if let Some(al) = &r.aligned {
        let _ = writeln!(out);
        vec_line(&mut out, "aligned to", &al.axis);
        decomposition_text(&mut out, &al.decomposition);
    }
    out
}
