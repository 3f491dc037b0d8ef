//! Eigenvalue bounds for the Dirichlet problem of `-div(A grad f)` on planar
//! domains, built from quasiconformal maps agreed with the coefficient matrix
//! `A`, together with a conforming P1 finite-element solver that checks them.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: Bessel `J0`, `J1`, the zero `j0,1`, and `Gamma`.
//! * [`beltrami`]: the `A <-> mu` correspondence and ellipticity constants.
//! * [`geometry`]: domains, the built-in quasiconformal maps, isometry checks.
//! * [`constants`]: Sobolev-Poincare and quasidisc constants (log space where needed).
//! * [`bounds`]: every eigenvalue bound as an evaluator returning a [`bounds::BoundResult`].
//! * [`fem`]: meshing, assembly, the shift-invert eigensolver, Jacobian norms.
//!
//! Data-parallel loops go through [`exec::Execution`]; with the default
//! `parallel` feature they run on rayon, otherwise sequentially. Reductions are
//! always performed in a fixed order, so results do not depend on thread count.

pub mod beltrami;
pub mod bounds;
pub mod constants;
pub mod error;
pub mod exec;
pub mod fem;
pub mod geometry;
pub mod optimize;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
pub use exec::Execution;
pub use num_complex::Complex64;

/// Points of the plane are complex numbers `z = x + iy`.
pub type Point = Complex64;
