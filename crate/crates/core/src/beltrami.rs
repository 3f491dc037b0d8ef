//! Correspondence between symmetric unit-determinant coefficient matrices and
//! complex dilatations, plus the quasiconformality coefficient `K`.
//!
//! `mu = (a22 - a11 - 2i a12) / det(I + A)` and conversely
//! `A = [[|1-mu|^2, -2 Im mu], [-2 Im mu, |1+mu|^2]] / (1 - |mu|^2)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::exec::Execution;
use crate::geometry::Domain;
use crate::Point;

/// Absolute tolerance on `det A = 1`.
pub const DET_TOLERANCE: f64 = 1e-10;
/// Dilatations with `|mu| >= 1 - MU_MARGIN` are rejected.
pub const MU_MARGIN: f64 = 1e-12;
/// Fields built on `z / conj(z)` are undefined below this radius.
pub const SINGULAR_RADIUS: f64 = 1e-14;

/// Symmetric 2x2 matrix `[[a11, a12], [a12, a22]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientMatrix {
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
}

impl CoefficientMatrix {
    pub const IDENTITY: Self = Self {
        a11: 1.0,
        a12: 0.0,
        a22: 1.0,
    };

    /// Checked constructor: finite entries, `a11 > 0`, `det = 1` within [`DET_TOLERANCE`].
    pub fn new(a11: f64, a12: f64, a22: f64) -> Result<Self> {
        for (v, name) in [(a11, "a11"), (a12, "a12"), (a22, "a22")] {
            if !v.is_finite() {
                return Err(Error::InvalidMatrix(format!("{name} is not finite")));
            }
        }
        let m = Self { a11, a12, a22 };
        if a11 <= 0.0 {
            return Err(Error::InvalidMatrix(format!("a11 = {a11} must be positive")));
        }
        let det = m.det();
        if (det - 1.0).abs() > DET_TOLERANCE {
            return Err(Error::InvalidMatrix(format!("det = {det} differs from 1")));
        }
        Ok(m)
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a12
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.a11 + self.a22);
        let radius = (0.25 * (self.a11 - self.a22).powi(2) + self.a12 * self.a12).sqrt();
        (mean - radius, mean + radius)
    }

    /// `<A xi, xi>`.
    pub fn quadratic_form(&self, xi: [f64; 2]) -> f64 {
        self.a11 * xi[0] * xi[0] + 2.0 * self.a12 * xi[0] * xi[1] + self.a22 * xi[1] * xi[1]
    }

    pub fn apply(&self, xi: [f64; 2]) -> [f64; 2] {
        [
            self.a11 * xi[0] + self.a12 * xi[1],
            self.a12 * xi[0] + self.a22 * xi[1],
        ]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.a11 - other.a11)
            .abs()
            .max((self.a12 - other.a12).abs())
            .max((self.a22 - other.a22).abs())
    }
}

/// Value of a complex dilatation at one point, `|mu| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dilatation {
    pub re: f64,
    pub im: f64,
}

impl Dilatation {
    pub const ZERO: Self = Self { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Result<Self> {
        ensure_finite(re, "Re mu")?;
        ensure_finite(im, "Im mu")?;
        let d = Self { re, im };
        let abs = d.abs();
        if abs >= 1.0 - MU_MARGIN {
            return Err(Error::EllipticityViolation { mu_abs: abs });
        }
        Ok(d)
    }

    pub fn from_complex(mu: Complex64) -> Result<Self> {
        Self::new(mu.re, mu.im)
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

pub fn dilatation_from_matrix(a: &CoefficientMatrix) -> Result<Dilatation> {
    let a = CoefficientMatrix::new(a.a11, a.a12, a.a22)?;
    let denom = (1.0 + a.a11) * (1.0 + a.a22) - a.a12 * a.a12;
    Dilatation::new((a.a22 - a.a11) / denom, -2.0 * a.a12 / denom)
}

pub fn matrix_from_dilatation(mu: &Dilatation) -> Result<CoefficientMatrix> {
    let mu = Dilatation::new(mu.re, mu.im)?;
    let m = mu.as_complex();
    let denom = 1.0 - m.norm_sqr();
    Ok(CoefficientMatrix {
        a11: (Complex64::new(1.0, 0.0) - m).norm_sqr() / denom,
        a12: -2.0 * mu.im / denom,
        a22: (Complex64::new(1.0, 0.0) + m).norm_sqr() / denom,
    })
}

/// `K = (1 + ||mu||_inf) / (1 - ||mu||_inf)`.
pub fn ellipticity_constant(mu_sup: f64) -> Result<f64> {
    ensure_finite(mu_sup, "mu_sup")?;
    if mu_sup < 0.0 {
        return Err(Error::domain(format!("mu_sup = {mu_sup} must be nonnegative")));
    }
    if mu_sup >= 1.0 {
        return Err(Error::EllipticityViolation { mu_abs: mu_sup });
    }
    Ok((1.0 + mu_sup) / (1.0 - mu_sup))
}

/// Dilatation fields given by a closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DilatationSpec {
    /// `mu(z) = c`.
    Constant { re: f64, im: f64 },
    /// `mu(z) = c z / conj(z)`, undefined at the origin.
    Rotating { re: f64, im: f64 },
}

impl DilatationSpec {
    fn coefficient(&self) -> Complex64 {
        match *self {
            DilatationSpec::Constant { re, im } | DilatationSpec::Rotating { re, im } => {
                Complex64::new(re, im)
            }
        }
    }
}

/// A coefficient field `A(z)` on the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoefficientField {
    Identity,
    /// Agreed with `z exp(2i log|z|)`: `mu = (1+i)/2 * z/conj(z)`.
    Spiral,
    /// Agreed with `sqrt(a^2+1) z - a conj(z)`: `mu = -a / sqrt(a^2+1)`.
    EllipseAffine { a: f64 },
    /// Agreed with `z^{3/2} / (sqrt 2 conj(z)^{1/2}) - 1`: `mu = -1/3 * z/conj(z)`.
    Petal,
    FromDilatation { mu: DilatationSpec },
}

fn rotation(z: Point) -> Result<Complex64> {
    let r = z.norm();
    if r < SINGULAR_RADIUS {
        return Err(Error::SingularPoint { x: z.re, y: z.im });
    }
    // z / conj(z) = e^{2 i theta}
    let u = z / r;
    Ok(u * u)
}

impl CoefficientField {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CoefficientField::EllipseAffine { a } if !(a.is_finite() && a >= 0.0) => {
                Err(Error::domain(format!("ellipse parameter a = {a} must be finite and >= 0")))
            }
            CoefficientField::FromDilatation { mu } => {
                let c = mu.coefficient();
                Dilatation::new(c.re, c.im).map(|_| ())
            }
            _ => Ok(()),
        }
    }

    pub fn dilatation_at(&self, z: Point) -> Result<Dilatation> {
        let mu = match *self {
            CoefficientField::Identity => return Ok(Dilatation::ZERO),
            CoefficientField::Spiral => Complex64::new(0.5, 0.5) * rotation(z)?,
            CoefficientField::EllipseAffine { a } => Complex64::new(-a / (a * a + 1.0).sqrt(), 0.0),
            CoefficientField::Petal => -rotation(z)? / 3.0,
            CoefficientField::FromDilatation { mu } => match mu {
                DilatationSpec::Constant { .. } => mu.coefficient(),
                DilatationSpec::Rotating { .. } => mu.coefficient() * rotation(z)?,
            },
        };
        Dilatation::from_complex(mu)
    }

    pub fn eval(&self, z: Point) -> Result<CoefficientMatrix> {
        match *self {
            CoefficientField::Identity => Ok(CoefficientMatrix::IDENTITY),
            CoefficientField::EllipseAffine { a } => {
                let s = (a * a + 1.0).sqrt();
                Ok(CoefficientMatrix {
                    a11: (s + a) * (s + a),
                    a12: 0.0,
                    a22: (s - a) * (s - a),
                })
            }
            _ => matrix_from_dilatation(&self.dilatation_at(z)?),
        }
    }

    /// `||mu||_inf`, known in closed form for every field kind.
    pub fn mu_sup(&self) -> f64 {
        match *self {
            CoefficientField::Identity => 0.0,
            CoefficientField::Spiral => std::f64::consts::FRAC_1_SQRT_2,
            CoefficientField::EllipseAffine { a } => a / (a * a + 1.0).sqrt(),
            CoefficientField::Petal => 1.0 / 3.0,
            CoefficientField::FromDilatation { mu } => mu.coefficient().norm(),
        }
    }

    pub fn ellipticity(&self) -> Result<f64> {
        ellipticity_constant(self.mu_sup())
    }

    /// Whether the field has a singular point at the origin.
    pub fn singular_at_origin(&self) -> bool {
        matches!(
            self,
            CoefficientField::Spiral
                | CoefficientField::Petal
                | CoefficientField::FromDilatation {
                    mu: DilatationSpec::Rotating { .. }
                }
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            CoefficientField::Identity => "identity",
            CoefficientField::Spiral => "spiral",
            CoefficientField::EllipseAffine { .. } => "ellipse_affine",
            CoefficientField::Petal => "petal",
            CoefficientField::FromDilatation { .. } => "from_dilatation",
        }
    }
}

/// Outcome of sampling a field against the uniform ellipticity condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldValidation {
    pub passed: bool,
    pub samples: usize,
    pub ellipticity: f64,
    pub max_det_error: f64,
    /// Largest amount by which an eigenvalue leaves `[1/K, K]` (0 if none).
    pub max_eigen_violation: f64,
    /// Sample with the largest violation, if any failed.
    pub worst_point: Option<[f64; 2]>,
    pub failures: usize,
}

/// Checks `det A = 1`, `a11 > 0` and `1/K <= eig(A) <= K` at `samples`
/// quasi-random points of `domain`, skipping the singular set.
pub fn validate_field(
    field: &CoefficientField,
    domain: &Domain,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<FieldValidation> {
    if samples == 0 {
        return Err(Error::domain("validate_field needs at least one sample"));
    }
    field.validate()?;
    domain.validate()?;
    let k = field.ellipticity()?;
    let points = domain.sample_points(samples, seed, field.singular_at_origin());
    let slack = 1e-10 * k;
    let checks = exec.map_slice(&points, |&z| match field.eval(z) {
        Ok(a) => {
            let det_err = (a.det() - 1.0).abs();
            let (lo, hi) = a.eigenvalues();
            let viol = (1.0 / k - lo).max(hi - k).max(0.0);
            let bad = det_err > DET_TOLERANCE || viol > slack || a.a11 <= 0.0;
            (det_err, viol, bad)
        }
        Err(_) => (f64::INFINITY, f64::INFINITY, true),
    });
    let mut report = FieldValidation {
        passed: true,
        samples,
        ellipticity: k,
        max_det_error: 0.0,
        max_eigen_violation: 0.0,
        worst_point: None,
        failures: 0,
    };
    let mut worst = 0.0;
    for (z, (det_err, viol, bad)) in points.iter().zip(checks) {
        report.max_det_error = report.max_det_error.max(det_err);
        report.max_eigen_violation = report.max_eigen_violation.max(viol);
        if bad {
            report.passed = false;
            report.failures += 1;
            let severity = det_err.max(viol);
            if report.worst_point.is_none() || severity > worst {
                worst = severity;
                report.worst_point = Some([z.re, z.im]);
            }
        }
    }
    Ok(report)
}
