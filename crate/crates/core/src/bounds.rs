//! Eigenvalue bounds, each returned as a [`BoundResult`] carrying its inputs
//! and hypotheses.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::{m_beta, poincare_constant_upper, stability_constant, Beta, LogValue};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::{weighted_lr_norm, QcMap, TestFunction};
use crate::quadrature::PolarRule;
use crate::specfun::{bessel_j0_first_zero, bessel_j1};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BoundValue {
    #[serde(rename = "value")]
    Linear(f64),
    #[serde(rename = "log10_value")]
    Log10(LogValue),
}

impl BoundValue {
    pub fn log10(self) -> f64 {
        match self {
            BoundValue::Linear(v) => v.log10(),
            BoundValue::Log10(l) => l.log10(),
        }
    }

    /// Linear value, if representable.
    pub fn linear(self) -> Option<f64> {
        match self {
            BoundValue::Linear(v) => Some(v),
            BoundValue::Log10(l) => l.to_linear(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult {
    pub name: String,
    pub kind: BoundKind,
    #[serde(flatten)]
    pub value: BoundValue,
    #[serde(serialize_with = "pairs_as_map")]
    pub inputs: Vec<(String, f64)>,
    pub assumptions: Vec<String>,
}

fn pairs_as_map<S: serde::Serializer>(pairs: &[(String, f64)], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(pairs.len()))?;
    for (k, v) in pairs {
        m.serialize_entry(k, v)?;
    }
    m.end()
}

impl BoundResult {
    fn new(name: &str, kind: BoundKind, value: BoundValue, inputs: &[(&str, f64)], assumptions: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            kind,
            value,
            inputs: inputs.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            assumptions: assumptions.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// The value on a linear scale (`None` for astronomically large log values).
    pub fn linear(&self) -> Option<f64> {
        self.value.linear()
    }

    fn warn_area(mut self, area: f64) -> Self {
        if (area - PI).abs() > 1e-12 * PI {
            self.assumptions.push(format!("warning: theorem assumes area pi, got {area}"));
        }
        self
    }
}

fn positive(x: f64, what: &str) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} = {x} must be positive and finite")))
    }
}

fn nonnegative(x: f64, what: &str) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} = {x} must be >= 0 and finite")))
    }
}

fn k_at_least_one(k: f64) -> Result<()> {
    if k.is_finite() && k >= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("K = {k} must be >= 1")))
    }
}

fn j01_sq() -> f64 {
    bessel_j0_first_zero().squared()
}

pub fn payne_weinberger_upper(area: f64, perimeter: f64) -> Result<BoundResult> {
    positive(area, "area")?;
    positive(perimeter, "perimeter")?;
    let iso = perimeter * perimeter / (4.0 * PI * area);
    if iso < 1.0 - 1e-12 {
        return Err(Error::domain(format!(
            "perimeter {perimeter} and area {area} violate the isoperimetric inequality"
        )));
    }
    let j = bessel_j0_first_zero();
    let j1 = bessel_j1(j.value())?;
    let value = PI * j.squared() / area * (1.0 + (1.0 / (j1 * j1) - 1.0) * (iso - 1.0).max(0.0));
    Ok(BoundResult::new(
        "payne_weinberger",
        BoundKind::Upper,
        BoundValue::Linear(value),
        &[("area", area), ("perimeter", perimeter)],
        &["simply connected domain", "rectifiable boundary", "Laplacian (A = I)"],
    ))
}

pub fn rfk_lower(area: f64) -> Result<BoundResult> {
    positive(area, "area")?;
    let r2 = area / PI;
    Ok(BoundResult::new(
        "rayleigh_faber_krahn",
        BoundKind::Lower,
        BoundValue::Linear(j01_sq() / r2),
        &[("area", area)],
        &["Laplacian (A = I)"],
    ))
}

pub fn makai_hayman_lower(rho: f64, alpha: f64) -> Result<BoundResult> {
    positive(rho, "rho")?;
    positive(alpha, "alpha")?;
    Ok(BoundResult::new(
        "makai_hayman",
        BoundKind::Lower,
        BoundValue::Linear(alpha / (rho * rho)),
        &[("rho", rho), ("alpha", alpha)],
        &["simply connected domain", "Laplacian (A = I)", "alpha supplied externally; no value is fixed by the theory"],
    ))
}

pub fn monotonicity_upper(rho: f64) -> Result<BoundResult> {
    positive(rho, "rho")?;
    Ok(BoundResult::new(
        "monotonicity",
        BoundKind::Upper,
        BoundValue::Linear(j01_sq() / (rho * rho)),
        &[("rho", rho)],
        &["rho is the radius of the largest inscribed disc", "Laplacian (A = I)"],
    ))
}

/// `lambda_1(D) <= lambda_1(A, Omega) <= K lambda_1(D)` for volume-preserving maps.
pub fn sandwich_volume_preserving(k: f64) -> Result<(BoundResult, BoundResult)> {
    k_at_least_one(k)?;
    let j2 = j01_sq();
    let notes = ["A-quasiconformal volume-preserving map onto the unit disc", "beta-regular domain"];
    Ok((
        BoundResult::new("sandwich_lower", BoundKind::Lower, BoundValue::Linear(j2), &[("K", k)], &notes),
        BoundResult::new("sandwich_upper", BoundKind::Upper, BoundValue::Linear(k * j2), &[("K", k)], &notes),
    ))
}

/// Inputs of the general Jacobian-based upper bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thm52Inputs {
    pub k: f64,
    pub beta: Beta,
    pub rho: f64,
    /// `||J_{phi^{-1}} | L^beta(D)||`
    pub jac_norm_beta: f64,
    /// `||1 - J_{phi^{-1}}^{1/2} | L^2(D)||`
    pub jac_dev_norm: f64,
    pub area: f64,
}

pub fn thm52_upper(inp: Thm52Inputs) -> Result<BoundResult> {
    k_at_least_one(inp.k)?;
    positive(inp.rho, "rho")?;
    nonnegative(inp.jac_norm_beta, "jac_norm_beta")?;
    nonnegative(inp.jac_dev_norm, "jac_dev_norm")?;
    positive(inp.area, "area")?;
    let j2 = j01_sq();
    let b = inp.beta.value();
    let a = stability_constant(inp.beta, PI)?.value;
    let lam_rho = j2 / (inp.rho * inp.rho);
    let second = a * a * inp.k * inp.k * lam_rho * lam_rho
        * (PI.powf(1.0 / (2.0 * b)) + inp.jac_norm_beta.sqrt())
        * inp.jac_dev_norm;
    Ok(BoundResult::new(
        "jacobian_upper",
        BoundKind::Upper,
        BoundValue::Linear(inp.k * j2 + second),
        &[
            ("K", inp.k),
            ("beta", b),
            ("rho", inp.rho),
            ("jac_norm_beta", inp.jac_norm_beta),
            ("jac_dev_norm", inp.jac_dev_norm),
            ("area", inp.area),
        ],
        &["A-quasiconformal beta-regular domain", "rho is the radius of the largest inscribed disc"],
    )
    .warn_area(inp.area))
}

pub fn stability_gap_bound(c_n: f64, beta: Beta, jac_norm_beta: f64, jac_dev_norm: f64, area: f64) -> Result<BoundResult> {
    nonnegative(c_n, "c_n")?;
    nonnegative(jac_norm_beta, "jac_norm_beta")?;
    nonnegative(jac_dev_norm, "jac_dev_norm")?;
    positive(area, "area")?;
    let b = beta.value();
    let a = stability_constant(beta, area)?.value;
    let value = c_n * a * a * (area.powf(1.0 / (2.0 * b)) + jac_norm_beta.sqrt()) * jac_dev_norm;
    Ok(BoundResult::new(
        "stability_gap",
        BoundKind::Upper,
        BoundValue::Linear(value),
        &[("c_n", c_n), ("beta", b), ("jac_norm_beta", jac_norm_beta), ("jac_dev_norm", jac_dev_norm), ("area", area)],
        &["A-quasiconformal beta-regular domain", "c_n = max of squared n-th eigenvalues, supplied by the caller"],
    ))
}

pub fn quasidisc_upper(k: f64, rho: f64, jac_dev_norm: f64, area: f64) -> Result<BoundResult> {
    if !(k.is_finite() && k > 1.0) {
        return Err(Error::domain(format!("K = {k}: the quasidisc bound needs K > 1")));
    }
    positive(rho, "rho")?;
    nonnegative(jac_dev_norm, "jac_dev_norm")?;
    positive(area, "area")?;
    let j2 = j01_sq();
    let base = k * j2;
    let value = if jac_dev_norm == 0.0 {
        BoundValue::Linear(base)
    } else {
        let m = m_beta(k, area)?.value;
        let lam_rho = j2 / (rho * rho);
        let term = m.mul(LogValue::from_linear(k * k * lam_rho * lam_rho * jac_dev_norm)?);
        BoundValue::Log10(term.add(LogValue::from_linear(base)?))
    };
    Ok(BoundResult::new(
        "quasidisc_upper",
        BoundKind::Upper,
        value,
        &[("K", k), ("rho", rho), ("jac_dev_norm", jac_dev_norm), ("area", area)],
        &["K-quasidisc", "A-quasiconformal map onto the unit disc", "rho is the radius of the largest inscribed disc"],
    )
    .warn_area(area))
}

/// Both sides of the weighted Sobolev-Poincare inequality for `f o phi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoincareCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub holds: bool,
}

/// Relative slack in the weighted Poincare verdict.
pub const POINCARE_SLACK: f64 = 1e-6;

pub fn weighted_poincare_check(
    map: &QcMap,
    r: f64,
    f: TestFunction,
    rule: PolarRule,
    exec: Execution,
) -> Result<PoincareCheck> {
    let constant = poincare_constant_upper(r, PI)?.value;
    let lhs = weighted_lr_norm(map, f, r, rule, exec)?;
    let rhs = constant * map.pullback_energy(f, rule, exec)?.sqrt();
    Ok(PoincareCheck { lhs, rhs, constant, holds: lhs <= rhs * (1.0 + POINCARE_SLACK) })
}
