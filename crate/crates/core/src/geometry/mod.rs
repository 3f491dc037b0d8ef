//! Planar domains, the built-in quasiconformal maps onto the unit disc, a
//! small catalog of test functions, and quadrature checks of the Sobolev
//! isometry induced by an agreed map.

mod domain;
mod maps;
mod testfn;

pub use domain::{Domain, DomainStar};
pub use maps::{dirichlet_energy, isometry_check, weighted_lr_norm, IsometryCheck, QcMap};
pub use testfn::TestFunction;

use crate::error::Result;
use crate::Point;

pub fn map_eval(map: &QcMap, z: Point) -> Result<Point> {
    map.eval(z)
}

pub fn map_jacobian(map: &QcMap, z: Point) -> Result<f64> {
    map.jacobian(z)
}

pub fn domain_area(d: &Domain) -> Result<f64> {
    d.area()
}

pub fn domain_perimeter(d: &Domain) -> Result<f64> {
    d.perimeter()
}

pub fn inscribed_radius(d: &Domain) -> Result<f64> {
    d.inscribed_radius()
}
