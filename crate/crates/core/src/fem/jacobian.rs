use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::QcMap;
use crate::quadrature::{integrate_star, PolarRule, UnitDisc};
use crate::Point;

/// `||J | L^beta(D)||` and `||1 - J^{1/2} | L^2(D)||` for an inverse-map Jacobian.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct JacobianNorms {
    pub norm_beta: f64,
    pub dev_norm: f64,
}

/// Both norms of a Jacobian given pointwise on the unit disc.
pub fn jacobian_norms_of<F>(jac: F, beta: f64, rule: PolarRule, exec: Execution) -> Result<JacobianNorms>
where
    F: Fn(Point) -> Result<f64> + Sync + Send,
{
    if !(beta.is_finite() && beta >= 1.0) {
        return Err(Error::domain(format!("beta = {beta} must be >= 1")));
    }
    let lb = integrate_star(&UnitDisc, rule, exec, |x, y| Ok(jac(Point::new(x, y))?.abs().powf(beta)))?;
    let dev = integrate_star(&UnitDisc, rule, exec, |x, y| {
        let j = jac(Point::new(x, y))?;
        Ok((1.0 - j.abs().sqrt()).powi(2))
    })?;
    Ok(JacobianNorms { norm_beta: lb.powf(1.0 / beta), dev_norm: dev.sqrt() })
}

/// Norms of `J(w, phi^{-1})` for a built-in map.
pub fn jacobian_norms(map: &QcMap, beta: f64, rule: PolarRule, exec: Execution) -> Result<JacobianNorms> {
    map.validate()?;
    jacobian_norms_of(|w| map.inverse_jacobian(w), beta, rule, exec)
}
