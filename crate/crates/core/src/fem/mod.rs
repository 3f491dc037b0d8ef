//! Conforming P1 finite elements for the Dirichlet eigenvalue problem
//! `-div(A grad u) = lambda u`, and quadrature of inverse-map Jacobian norms.

mod assemble;
mod eigen;
mod export;
mod jacobian;
mod mesh;
mod solve;
mod sparse;

pub use assemble::{assemble, assemble_full, Assembled};
pub use eigen::{solve_smallest, EigenPairs, EIGEN_TOLERANCE, MAX_ITERATIONS};
pub use export::{convergence_csv, mesh_to_text};
pub use jacobian::{jacobian_norms, jacobian_norms_of, JacobianNorms};
pub use mesh::{mesh_domain, nested_meshes, refine, Mesh, MIN_TRIANGLE_AREA};
pub use solve::{extrapolate, solve_on_domain, solve_on_mesh, EigenResult, FemOptions, MeshLevel};
pub use sparse::CsrMatrix;
