use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Domain, TestFunction};
use crate::beltrami::{CoefficientField, SINGULAR_RADIUS};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::quadrature::{integrate_star, PolarRule, UnitDisc};
use crate::Point;

/// Relative slack allowed when checking that a point lies in the source domain.
const DOMAIN_SLACK: f64 = 1e-9;

/// The built-in volume-preserving maps onto the unit disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum QcMap {
    Identity,
    /// `z exp(2i log|z|)` on the unit disc.
    Spiral,
    /// `sqrt(a^2+1) z - a conj(z)` on `Domain::Ellipse { a }`.
    EllipseAffine { a: f64 },
    /// `z^{3/2} / (sqrt 2 conj(z)^{1/2}) - 1` on the petal.
    Petal,
}

impl QcMap {
    pub fn name(&self) -> &'static str {
        match self {
            QcMap::Identity => "identity",
            QcMap::Spiral => "spiral",
            QcMap::EllipseAffine { .. } => "ellipse_affine",
            QcMap::Petal => "petal",
        }
    }

    pub fn source_domain(&self) -> Domain {
        match *self {
            QcMap::Identity | QcMap::Spiral => Domain::unit_disc(),
            QcMap::EllipseAffine { a } => Domain::Ellipse { a },
            QcMap::Petal => Domain::Petal,
        }
    }

    pub fn coefficient_field(&self) -> CoefficientField {
        match *self {
            QcMap::Identity => CoefficientField::Identity,
            QcMap::Spiral => CoefficientField::Spiral,
            QcMap::EllipseAffine { a } => CoefficientField::EllipseAffine { a },
            QcMap::Petal => CoefficientField::Petal,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.coefficient_field().validate()
    }

    /// Quasiconformality coefficient `K`.
    pub fn k(&self) -> Result<f64> {
        self.coefficient_field().ellipticity()
    }

    fn singular(&self, z: Point) -> bool {
        matches!(self, QcMap::Spiral | QcMap::Petal) && z.norm() < SINGULAR_RADIUS
    }

    fn check_source(&self, z: Point) -> Result<()> {
        if !(z.re.is_finite() && z.im.is_finite()) || !self.source_domain().contains_with_slack(z, DOMAIN_SLACK) {
            return Err(Error::OutsideDomain { x: z.re, y: z.im });
        }
        Ok(())
    }

    pub fn eval(&self, z: Point) -> Result<Point> {
        self.validate()?;
        self.check_source(z)?;
        Ok(match *self {
            QcMap::Identity => z,
            QcMap::Spiral => {
                let r = z.norm();
                if r == 0.0 {
                    return Ok(Point::new(0.0, 0.0));
                }
                z * Complex64::from_polar(1.0, 2.0 * r.ln())
            }
            QcMap::EllipseAffine { a } => (a * a + 1.0).sqrt() * z - a * z.conj(),
            QcMap::Petal => {
                let (r, theta) = z.to_polar();
                Complex64::from_polar(r / SQRT_2, 2.0 * theta) - 1.0
            }
        })
    }

    /// Preimage of a point of the closed unit disc.
    pub fn inverse(&self, w: Point) -> Result<Point> {
        self.validate()?;
        if !(w.norm() <= 1.0 + DOMAIN_SLACK) {
            return Err(Error::OutsideDomain { x: w.re, y: w.im });
        }
        Ok(match *self {
            QcMap::Identity => w,
            QcMap::Spiral => {
                let (r, theta) = w.to_polar();
                if r == 0.0 {
                    return Ok(w);
                }
                Complex64::from_polar(r, theta - 2.0 * r.ln())
            }
            QcMap::EllipseAffine { a } => {
                let s = (a * a + 1.0).sqrt();
                Point::new(w.re * (s + a), w.im * (s - a))
            }
            QcMap::Petal => {
                let (r, theta) = (w + 1.0).to_polar();
                Complex64::from_polar(SQRT_2 * r, theta / 2.0)
            }
        })
    }

    /// Wirtinger derivatives `(phi_z, phi_zbar)`.
    pub fn wirtinger(&self, z: Point) -> Result<(Complex64, Complex64)> {
        self.validate()?;
        self.check_source(z)?;
        if self.singular(z) {
            return Err(Error::SingularPoint { x: z.re, y: z.im });
        }
        let i = Complex64::i();
        Ok(match *self {
            QcMap::Identity => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
            QcMap::Spiral => {
                let (r, theta) = z.to_polar();
                let spin = Complex64::from_polar(1.0, 2.0 * r.ln());
                ((1.0 + i) * spin, i * Complex64::from_polar(1.0, 2.0 * theta) * spin)
            }
            QcMap::EllipseAffine { a } => (Complex64::new((a * a + 1.0).sqrt(), 0.0), Complex64::new(-a, 0.0)),
            QcMap::Petal => {
                let theta = z.arg();
                let c = 1.0 / (2.0 * SQRT_2);
                (Complex64::from_polar(3.0 * c, theta), Complex64::from_polar(-c, 3.0 * theta))
            }
        })
    }

    /// Real Jacobian matrix `[[du/dx, du/dy], [dv/dx, dv/dy]]`.
    pub fn differential(&self, z: Point) -> Result<[[f64; 2]; 2]> {
        let (pz, pzb) = self.wirtinger(z)?;
        let px = pz + pzb;
        let py = Complex64::i() * (pz - pzb);
        Ok([[px.re, py.re], [px.im, py.im]])
    }

    /// `J(z, phi) = |phi_z|^2 - |phi_zbar|^2`.
    pub fn jacobian(&self, z: Point) -> Result<f64> {
        let (pz, pzb) = self.wirtinger(z)?;
        Ok(pz.norm_sqr() - pzb.norm_sqr())
    }

    /// `J(w, phi^{-1}) = 1 / J(phi^{-1}(w), phi)`.
    pub fn inverse_jacobian(&self, w: Point) -> Result<f64> {
        let z = self.inverse(w)?;
        let j = self.jacobian(z)?;
        if j == 0.0 {
            return Err(Error::SingularPoint { x: z.re, y: z.im });
        }
        Ok(1.0 / j)
    }

    /// `f o phi` and its gradient at `z`.
    fn pullback(&self, f: TestFunction, z: Point) -> Result<(f64, [f64; 2])> {
        let w = self.eval(z)?;
        let g = f.gradient(w);
        let d = self.differential(z)?;
        Ok((f.value(w), [d[0][0] * g[0] + d[1][0] * g[1], d[0][1] * g[0] + d[1][1] * g[1]]))
    }

    /// `int_Omega <A grad(f o phi), grad(f o phi)>`.
    pub fn pullback_energy(&self, f: TestFunction, rule: PolarRule, exec: Execution) -> Result<f64> {
        let domain = self.source_domain();
        let field = self.coefficient_field();
        integrate_star(&domain.as_star()?, rule, exec, |x, y| {
            let z = Point::new(x, y);
            let (_, g) = self.pullback(f, z)?;
            Ok(field.eval(z)?.quadratic_form(g))
        })
    }
}

/// `int_D |grad f|^2` over the unit disc.
pub fn dirichlet_energy(f: TestFunction, rule: PolarRule, exec: Execution) -> Result<f64> {
    integrate_star(&UnitDisc, rule, exec, |x, y| {
        let g = f.gradient(Point::new(x, y));
        Ok(g[0] * g[0] + g[1] * g[1])
    })
}

/// `(int_Omega |f o phi|^r |J(z, phi)|)^{1/r}`.
pub fn weighted_lr_norm(map: &QcMap, f: TestFunction, r: f64, rule: PolarRule, exec: Execution) -> Result<f64> {
    if !(r.is_finite() && r >= 1.0) {
        return Err(Error::domain(format!("exponent r = {r} must be >= 1")));
    }
    let domain = map.source_domain();
    let total = integrate_star(&domain.as_star()?, rule, exec, |x, y| {
        let z = Point::new(x, y);
        let v = f.value(map.eval(z)?);
        Ok(v.abs().powf(r) * map.jacobian(z)?.abs())
    })?;
    Ok(total.powf(1.0 / r))
}

/// Both sides of the Sobolev isometry `||f o phi||_{L^1_2(A, Omega)} = ||f||_{L^1_2(D)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsometryCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub relative_gap: f64,
}

pub fn isometry_check(map: &QcMap, f: TestFunction, rule: PolarRule, exec: Execution) -> Result<IsometryCheck> {
    let lhs = map.pullback_energy(f, rule, exec)?.sqrt();
    let rhs = dirichlet_energy(f, rule, exec)?.sqrt();
    let relative_gap = if rhs > 0.0 { (lhs - rhs).abs() / rhs } else { (lhs - rhs).abs() };
    Ok(IsometryCheck { lhs, rhs, relative_gap })
}
