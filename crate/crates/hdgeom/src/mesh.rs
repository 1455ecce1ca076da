//! Grid sampling of ruled surfaces and deterministic artifact export:
//! ASCII OBJ meshes, CSV curve tables, and developability reports.
//!
//! All emitted files are byte-stable: identical inputs produce identical
//! bytes. Floating-point values print through Rust's shortest round-trip
//! formatting, so a reparse recovers every coordinate exactly.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::curve::{linspace, Curve3, CurveError};
use crate::study::{is_developable_r3, RuledSurface3};
use crate::vector::Vec3;
use crate::HyperDualCurve;

#[derive(Debug)]
pub enum MeshError {
    /// Curve evaluation failed at grid node `(i, j)`.
    Eval {
        i: usize,
        j: usize,
        source: CurveError,
    },
    Io(std::io::Error),
}

impl fmt::Display for MeshError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeshError::Eval { i, j, source } => {
                write!(
                    f,
                    "surface evaluation failed at grid node ({i}, {j}): {source}"
                )
            }
            MeshError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for MeshError {}

impl From<std::io::Error> for MeshError {
    fn from(e: std::io::Error) -> Self {
        MeshError::Io(e)
    }
}

/// A sampled surface grid: `nt × nu` vertices in row-major order (the `t`
/// index is the row).
#[derive(Debug, Clone, PartialEq)]
pub struct MeshGrid {
    pub nt: usize,
    pub nu: usize,
    pub vertices: Vec<Vec3>,
    pub t_range: (f64, f64),
    pub u_range: (f64, f64),
}

impl MeshGrid {
    pub fn vertex(&self, i: usize, j: usize) -> Vec3 {
        self.vertices[i * self.nu + j]
    }

    pub fn face_count(&self) -> usize {
        2 * (self.nt - 1) * (self.nu - 1)
    }
}

/// Sample `Φ(t, u) = β(t) + u·α(t)` on uniform `nt × nu` grids over the
/// given ranges.
pub fn sample_mesh(
    surface: &RuledSurface3,
    t_range: (f64, f64),
    u_range: (f64, f64),
    nt: usize,
    nu: usize,
) -> Result<MeshGrid, MeshError> {
    assert!(nt >= 2 && nu >= 2, "mesh grids need nt, nu >= 2");
    assert!(t_range.0 < t_range.1, "degenerate t range");
    let ts = linspace(t_range.0, t_range.1, nt);
    let us = linspace(u_range.0, u_range.1, nu);
    let mut vertices = Vec::with_capacity(nt * nu);
    for (i, &t) in ts.iter().enumerate() {
        let beta =
            surface
                .base
                .position(t)
                .map_err(|source| MeshError::Eval { i, j: 0, source })?;
        let alpha = surface
            .director
            .position(t)
            .map_err(|source| MeshError::Eval { i, j: 0, source })?;
        for (j, &u) in us.iter().enumerate() {
            let p = beta + alpha.scale(u);
            if !p.is_finite() {
                return Err(MeshError::Eval {
                    i,
                    j,
                    source: CurveError::Degenerate {
                        what: "non-finite surface point",
                        t,
                        magnitude: f64::NAN,
                    },
                });
            }
            vertices.push(p);
        }
    }
    Ok(MeshGrid {
        nt,
        nu,
        vertices,
        t_range,
        u_range,
    })
}

/// Write the grid as ASCII OBJ: one `v x y z` line per vertex in row-major
/// order, then two triangles per grid quad with 1-based indices. Quad
/// `(i, j)` emits `(v(i,j), v(i+1,j), v(i+1,j+1))` and
/// `(v(i,j), v(i+1,j+1), v(i,j+1))`.
pub fn write_obj(grid: &MeshGrid, path: &Path) -> Result<(), MeshError> {
    let mut out = BufWriter::new(File::create(path)?);
    for v in &grid.vertices {
        writeln!(out, "v {} {} {}", v.x, v.y, v.z)?;
    }
    let idx = |i: usize, j: usize| i * grid.nu + j + 1;
    for i in 0..grid.nt - 1 {
        for j in 0..grid.nu - 1 {
            writeln!(
                out,
                "f {} {} {}",
                idx(i, j),
                idx(i + 1, j),
                idx(i + 1, j + 1)
            )?;
            writeln!(
                out,
                "f {} {} {}",
                idx(i, j),
                idx(i + 1, j + 1),
                idx(i, j + 1)
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Write `n` uniform samples of a space curve as CSV with header `t,x,y,z`.
pub fn write_curve_csv(
    curve: &Curve3,
    t_range: (f64, f64),
    n: usize,
    path: &Path,
) -> Result<(), MeshError> {
    assert!(n >= 2, "curve CSV needs n >= 2");
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "t,x,y,z")?;
    for &t in &linspace(t_range.0, t_range.1, n) {
        let p = curve
            .position(t)
            .map_err(|source| MeshError::Eval { i: 0, j: 0, source })?;
        writeln!(out, "{},{},{},{}", t, p.x, p.y, p.z)?;
    }
    out.flush()?;
    Ok(())
}

/// Write `n` uniform samples of a hyper-dual curve as CSV with the
/// lane-expanded header `t,a0x,..,a3z` (12 lane columns).
pub fn write_gamma_csv(
    gamma: &HyperDualCurve,
    t_range: (f64, f64),
    n: usize,
    path: &Path,
) -> Result<(), MeshError> {
    assert!(n >= 2, "curve CSV needs n >= 2");
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "t,a0x,a0y,a0z,a1x,a1y,a1z,a2x,a2y,a2z,a3x,a3y,a3z")?;
    for &t in &linspace(t_range.0, t_range.1, n) {
        let v = gamma
            .eval(t)
            .map_err(|source| MeshError::Eval { i: 0, j: 0, source })?;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            t,
            v.a0.x,
            v.a0.y,
            v.a0.z,
            v.a1.x,
            v.a1.y,
            v.a1.z,
            v.a2.x,
            v.a2.y,
            v.a2.z,
            v.a3.x,
            v.a3.y,
            v.a3.z
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Developability residuals sampled along the parameter range.
#[derive(Debug, Clone, PartialEq)]
pub struct DevelopabilityReport {
    pub samples: Vec<(f64, f64)>,
    pub max_abs_residual: f64,
    pub tol: f64,
    pub verdict: bool,
}

impl fmt::Display for DevelopabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "developable: {} (max |det(beta', alpha, alpha')| = {:.6e}, tol = {:.1e}, {} samples)",
            if self.verdict { "yes" } else { "no" },
            self.max_abs_residual,
            self.tol,
            self.samples.len()
        )
    }
}

/// Evaluate the developability determinant at `n` uniform parameters.
pub fn developability_report(
    surface: &RuledSurface3,
    t_range: (f64, f64),
    n: usize,
    tol: f64,
) -> Result<DevelopabilityReport, CurveError> {
    assert!(n >= 2, "reports need n >= 2");
    let mut samples = Vec::with_capacity(n);
    let mut max_abs: f64 = 0.0;
    for &t in &linspace(t_range.0, t_range.1, n) {
        let check = is_developable_r3(surface, t, tol)?;
        max_abs = max_abs.max(check.residual.abs());
        samples.push((t, check.residual));
    }
    Ok(DevelopabilityReport {
        samples,
        max_abs_residual: max_abs,
        tol,
        verdict: max_abs <= tol,
    })
}
