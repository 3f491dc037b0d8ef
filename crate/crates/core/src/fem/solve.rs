use serde::Serialize;

use crate::beltrami::CoefficientField;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::Domain;

use super::assemble::assemble;
use super::eigen::solve_smallest;
use super::mesh::{nested_meshes, Mesh};

/// Discretization settings for [`solve_on_domain`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FemOptions {
    pub target_h: f64,
    /// Number of nested meshes (`h, h/2, ...`), at least 2.
    pub refinements: usize,
    pub eigen_count: usize,
}

impl Default for FemOptions {
    fn default() -> Self {
        Self { target_h: 0.1, refinements: 3, eigen_count: 1 }
    }
}

/// One mesh of a refinement sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeshLevel {
    pub h: f64,
    pub vertices: usize,
    pub triangles: usize,
    pub eigenvalues: Vec<f64>,
    pub iterations: usize,
}

impl MeshLevel {
    pub fn lambda1(&self) -> f64 {
        self.eigenvalues[0]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult {
    /// Eigenvalues on the finest mesh, ascending.
    pub eigenvalues: Vec<f64>,
    pub mesh_h: f64,
    /// Richardson extrapolation of `lambda_1` with exponent 2.
    pub extrapolated: f64,
    pub error_estimate: f64,
    /// Rate `log2` of successive differences, when three or more levels exist.
    pub observed_rate: Option<f64>,
    pub iterations: usize,
    pub meshes: Vec<MeshLevel>,
}

impl EigenResult {
    /// Smallest `lambda_1` over the meshes.
    pub fn min_lambda1(&self) -> f64 {
        self.meshes.iter().map(MeshLevel::lambda1).fold(f64::INFINITY, f64::min)
    }

    /// Relative discretization margin `error_estimate / extrapolated`.
    pub fn relative_error(&self) -> f64 {
        self.error_estimate / self.extrapolated
    }
}

/// Eigenvalues of `-div(A grad u)` with Dirichlet conditions on one mesh.
pub fn solve_on_mesh(mesh: &Mesh, field: &CoefficientField, count: usize, exec: Execution) -> Result<MeshLevel> {
    let sys = assemble(mesh, field, exec)?;
    let pairs = solve_smallest(&sys.stiffness, &sys.mass, count)?;
    Ok(MeshLevel {
        h: mesh.h,
        vertices: mesh.num_vertices(),
        triangles: mesh.num_triangles(),
        eigenvalues: pairs.values,
        iterations: pairs.iterations,
    })
}

/// Richardson extrapolation over a refinement sequence with ratio 2.
pub fn extrapolate(lambdas: &[f64]) -> Result<(f64, f64, Option<f64>)> {
    let n = lambdas.len();
    if n < 2 {
        return Err(Error::domain("extrapolation needs at least two meshes"));
    }
    let (coarse, fine) = (lambdas[n - 2], lambdas[n - 1]);
    let ext = (4.0 * fine - coarse) / 3.0;
    let mut err = (fine - ext).abs();
    let mut rate = None;
    if n >= 3 {
        let (d1, d2) = (lambdas[n - 3] - coarse, coarse - fine);
        if d1 != 0.0 && d2 != 0.0 && d1.signum() == d2.signum() {
            let p = (d1 / d2).log2();
            rate = Some(p);
            if p.is_finite() && p > 0.0 {
                let ext_obs = fine - d2 / (2f64.powf(p) - 1.0);
                err = err.max((ext - ext_obs).abs());
            }
        }
    }
    Ok((ext, err, rate))
}

/// Solves on nested meshes `h, h/2, ...` and extrapolates `lambda_1`.
pub fn solve_on_domain(domain: &Domain, field: &CoefficientField, opts: FemOptions, exec: Execution) -> Result<EigenResult> {
    if opts.refinements < 2 {
        return Err(Error::domain(format!("refinements = {} must be >= 2", opts.refinements)));
    }
    if opts.eigen_count == 0 {
        return Err(Error::domain("eigen_count must be >= 1"));
    }
    field.validate()?;
    let meshes = nested_meshes(domain, opts.target_h, opts.refinements)?;
    let mut levels = Vec::with_capacity(meshes.len());
    for m in &meshes {
        levels.push(solve_on_mesh(m, field, opts.eigen_count, exec)?);
    }
    let lambdas: Vec<f64> = levels.iter().map(MeshLevel::lambda1).collect();
    let (extrapolated, error_estimate, observed_rate) = extrapolate(&lambdas)?;
    let last = levels.last().expect("at least two levels");
    Ok(EigenResult {
        eigenvalues: last.eigenvalues.clone(),
        mesh_h: last.h,
        extrapolated,
        error_estimate,
        observed_rate,
        iterations: levels.iter().map(|l| l.iterations).sum(),
        meshes: levels,
    })
}
