use crate::beltrami::{CoefficientField, CoefficientMatrix, SINGULAR_RADIUS};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::Point;

use super::mesh::Mesh;
use super::sparse::CsrMatrix;

/// Barycentric coordinates of the three interior quadrature points.
const QUAD: [[f64; 3]; 3] = [
    [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0],
    [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
    [1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0],
];

/// Stiffness and mass matrices restricted to the interior vertices.
#[derive(Debug, Clone)]
pub struct Assembled {
    pub stiffness: CsrMatrix,
    pub mass: CsrMatrix,
    /// Mesh vertex of each unknown.
    pub dofs: Vec<usize>,
}

type Local = ([[f64; 3]; 3], [[f64; 3]; 3]);

fn local_matrices(mesh: &Mesh, t: usize, field: &CoefficientField) -> Result<Local> {
    let [i0, i1, i2] = mesh.triangles[t];
    let [p0, p1, p2] = [mesh.vertices[i0], mesh.vertices[i1], mesh.vertices[i2]];
    let area = mesh.signed_area(t);
    let two_a = 2.0 * area;
    let grads = [
        [(p1[1] - p2[1]) / two_a, (p2[0] - p1[0]) / two_a],
        [(p2[1] - p0[1]) / two_a, (p0[0] - p2[0]) / two_a],
        [(p0[1] - p1[1]) / two_a, (p1[0] - p0[0]) / two_a],
    ];
    let mut abar = [0.0; 3];
    for b in QUAD {
        let mut z = Point::new(
            b[0] * p0[0] + b[1] * p1[0] + b[2] * p2[0],
            b[0] * p0[1] + b[1] * p1[1] + b[2] * p2[1],
        );
        if z.norm() < SINGULAR_RADIUS {
            z += Point::new(1e-12 * mesh.h, 0.0);
        }
        let a: CoefficientMatrix = field.eval(z).map_err(|e| Error::Assembly {
            triangle: t,
            x: z.re,
            y: z.im,
            reason: e.to_string(),
        })?;
        abar[0] += a.a11 / 3.0;
        abar[1] += a.a12 / 3.0;
        abar[2] += a.a22 / 3.0;
    }
    let mut k = [[0.0; 3]; 3];
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        let ag = [abar[0] * grads[i][0] + abar[1] * grads[i][1], abar[1] * grads[i][0] + abar[2] * grads[i][1]];
        for j in i..3 {
            k[i][j] = area * (ag[0] * grads[j][0] + ag[1] * grads[j][1]);
            k[j][i] = k[i][j];
            m[i][j] = area / 12.0 * if i == j { 2.0 } else { 1.0 };
            m[j][i] = m[i][j];
        }
    }
    Ok((k, m))
}

fn scatter(mesh: &Mesh, locals: &[Local], dof_of: impl Fn(usize) -> Option<usize>, n: usize) -> (CsrMatrix, CsrMatrix) {
    let mut ks = Vec::with_capacity(9 * locals.len());
    let mut ms = Vec::with_capacity(9 * locals.len());
    for (t, (k, m)) in locals.iter().enumerate() {
        let tri = mesh.triangles[t];
        for a in 0..3 {
            let Some(r) = dof_of(tri[a]) else { continue };
            for b in 0..3 {
                let Some(c) = dof_of(tri[b]) else { continue };
                ks.push((r, c, k[a][b]));
                ms.push((r, c, m[a][b]));
            }
        }
    }
    (CsrMatrix::from_triplets(n, ks), CsrMatrix::from_triplets(n, ms))
}

fn locals(mesh: &Mesh, field: &CoefficientField, exec: Execution) -> Result<Vec<Local>> {
    field.validate()?;
    exec.try_map_range(mesh.triangles.len(), |t| local_matrices(mesh, t, field))
}

/// Stiffness and mass over all vertices, without boundary conditions.
pub fn assemble_full(mesh: &Mesh, field: &CoefficientField, exec: Execution) -> Result<(CsrMatrix, CsrMatrix)> {
    let l = locals(mesh, field, exec)?;
    Ok(scatter(mesh, &l, Some, mesh.vertices.len()))
}

/// Dirichlet problem: boundary vertices are eliminated.
pub fn assemble(mesh: &Mesh, field: &CoefficientField, exec: Execution) -> Result<Assembled> {
    let l = locals(mesh, field, exec)?;
    let mut index = vec![None; mesh.vertices.len()];
    let mut dofs = Vec::new();
    for v in 0..mesh.vertices.len() {
        if !mesh.boundary[v] {
            index[v] = Some(dofs.len());
            dofs.push(v);
        }
    }
    if dofs.is_empty() {
        return Err(Error::Mesh("mesh has no interior vertices".into()));
    }
    let (stiffness, mass) = scatter(mesh, &l, |v| index[v], dofs.len());
    Ok(Assembled { stiffness, mass, dofs })
}
