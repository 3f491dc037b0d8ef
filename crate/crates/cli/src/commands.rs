//! The subcommands, as library functions returning their output.

use std::f64::consts::PI;

use serde_json::{Map, Value};

use qcbound::beltrami::{
    dilatation_from_matrix, ellipticity_constant, matrix_from_dilatation, validate_field, CoefficientField,
    CoefficientMatrix, Dilatation,
};
use qcbound::bounds::{
    makai_hayman_lower, monotonicity_upper, payne_weinberger_upper, quasidisc_upper, rfk_lower,
    sandwich_volume_preserving, stability_gap_bound, thm52_upper, BoundKind, BoundResult, Thm52Inputs,
};
use qcbound::constants::{
    beta_star, beta_tilde, c_beta, m_beta, nu, poincare_constant_upper, quasidisc_exponent, stability_constant, Beta,
};
use qcbound::fem::{jacobian_norms, mesh_to_text, nested_meshes, solve_on_domain, FemOptions, JacobianNorms};
use qcbound::quadrature::PolarRule;
use qcbound::specfun::disc_eigenvalue;
use qcbound::Execution;

use crate::config::{BoundName, CaseConfig};
use crate::error::{CliError, CliResult};
use crate::report::{FemInputs, FemSummary, Inputs, Provenance, Verdict, VerificationReport};

/// Samples used to validate a dilatation-defined coefficient field.
pub const FIELD_SAMPLES: usize = 2000;

/// Jacobian deviation norms below this are quadrature roundoff of an exactly
/// volume-preserving map and are taken as zero.
pub const JACOBIAN_ROUNDOFF: f64 = 1e-12;

/// Factor applied to `error_estimate / lambda` to get the verdict tolerance.
pub const TOLERANCE_FACTOR: f64 = 3.0;

/// Settings that come from flags rather than the config file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub seed: u64,
    pub exec: Execution,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { seed: 1, exec: Execution::default() }
    }
}

/// A report together with the failure that cut it short, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: VerificationReport,
    pub failure: Option<CliError>,
}

fn check_field(cfg: &CaseConfig, opts: RunOptions) -> CliResult<()> {
    if let CoefficientField::FromDilatation { .. } = cfg.coefficient {
        let v = validate_field(&cfg.coefficient, &cfg.domain, FIELD_SAMPLES, opts.seed, opts.exec)?;
        if !v.passed {
            return Err(CliError::config(format!(
                "coefficient field fails validation at {} of {} samples (max det error {:e}, eigenvalue violation {:e})",
                v.failures, v.samples, v.max_det_error, v.max_eigen_violation
            )));
        }
    }
    Ok(())
}

/// Evaluates every requested bound with geometry-derived inputs.
pub fn bounds(cfg: &CaseConfig, opts: RunOptions) -> CliResult<VerificationReport> {
    cfg.validate()?;
    check_field(cfg, opts)?;
    let area = cfg.domain.area()?;
    let perimeter = cfg.domain.perimeter()?;
    let rho = cfg.domain.inscribed_radius()?;
    let map = cfg.agreed_map();
    let k = match map {
        Some(m) => m.k()?,
        None => cfg.coefficient.ellipticity()?,
    };
    let jacobian = match map {
        Some(m) if cfg.bounds_requested.iter().any(|b| b.needs_map()) => {
            let mut j = jacobian_norms(&m, cfg.beta.unwrap_or(2.0), PolarRule::default(), opts.exec)?;
            if j.dev_norm < JACOBIAN_ROUNDOFF {
                j.dev_norm = 0.0;
            }
            Some(j)
        }
        _ => None,
    };
    let jac = || jacobian.ok_or_else(|| CliError::config("bound needs Jacobian norms of an agreed map"));
    let beta = || -> CliResult<Beta> {
        Ok(Beta::new(cfg.beta.ok_or_else(|| CliError::config("beta is required"))?)?)
    };

    let mut out: Vec<BoundResult> = Vec::new();
    for &name in &cfg.bounds_requested {
        match name {
            BoundName::PayneWeinberger => out.push(payne_weinberger_upper(area, perimeter)?),
            BoundName::RayleighFaberKrahn => out.push(rfk_lower(area)?),
            BoundName::MakaiHayman => out.push(makai_hayman_lower(rho, cfg.alpha_makai.unwrap_or(0.0))?),
            BoundName::Monotonicity => out.push(monotonicity_upper(rho)?),
            BoundName::Sandwich => {
                let (lo, hi) = sandwich_volume_preserving(k)?;
                out.push(lo);
                out.push(hi);
            }
            BoundName::JacobianUpper => {
                let j: JacobianNorms = jac()?;
                out.push(thm52_upper(Thm52Inputs {
                    k,
                    beta: beta()?,
                    rho,
                    jac_norm_beta: j.norm_beta,
                    jac_dev_norm: j.dev_norm,
                    area,
                })?);
            }
            BoundName::StabilityGap => {
                let j = jac()?;
                let c_n = (k * disc_eigenvalue()).powi(2);
                let mut b = stability_gap_bound(c_n, beta()?, j.norm_beta, j.dev_norm, PI)?;
                b.assumptions
                    .push("c_n = (K lambda1_disc)^2, which dominates both squared first eigenvalues".to_string());
                out.push(b);
            }
            BoundName::QuasidiscUpper => out.push(quasidisc_upper(k, rho, jac()?.dev_norm, area)?),
        }
    }

    Ok(VerificationReport {
        case_id: cfg.case_id(),
        inputs: Inputs {
            domain: cfg.domain.clone(),
            coefficient: cfg.coefficient,
            area,
            perimeter,
            inscribed_radius: rho,
            k,
            beta: cfg.beta,
            alpha_makai: cfg.alpha_makai,
            jacobian,
            fem: cfg.fem.map(|f| FemInputs {
                refinements: f.refinements,
                target_h: f.target_h,
                eigen_count: f.eigen_count,
            }),
        },
        bounds: out,
        fem: None,
        verdicts: Vec::new(),
        provenance: Provenance { version: env!("CARGO_PKG_VERSION").to_string(), config_hash: cfg.hash() },
    })
}

/// Bounds plus FEM, with one verdict per bound. A FEM failure yields the
/// bounds-only report and the failure.
pub fn verify(cfg: &CaseConfig, opts: RunOptions) -> CliResult<Outcome> {
    let fem_cfg = cfg.fem.ok_or_else(|| CliError::config("verify needs a fem block in the config"))?;
    let mut report = bounds(cfg, opts)?;
    let res = match solve_on_domain(&cfg.domain, &cfg.coefficient, FemOptions::from(fem_cfg), opts.exec) {
        Ok(r) => r,
        Err(e) => {
            let msg = format!("FEM solve failed: {e}");
            return Ok(Outcome { report, failure: Some(CliError::Numeric(msg)) });
        }
    };
    let lambda_fem = res.min_lambda1();
    let tol = TOLERANCE_FACTOR * res.relative_error();
    report.verdicts = report
        .bounds
        .iter()
        .map(|b| match (b.name.as_str(), b.kind) {
            ("stability_gap", _) => Verdict::gap(b, res.extrapolated, disc_eigenvalue(), tol),
            (_, BoundKind::Lower) => Verdict::lower(b, lambda_fem),
            (_, BoundKind::Upper) => Verdict::upper(b, res.extrapolated, tol),
        })
        .collect();
    report.fem = Some(FemSummary::from(&res));
    Ok(Outcome { report, failure: None })
}

/// Triangulation of the configured domain at refinement `level`.
pub fn mesh(cfg: &CaseConfig, level: usize) -> CliResult<String> {
    cfg.domain.validate()?;
    let h = cfg.fem.unwrap_or_default().target_h;
    let meshes = nested_meshes(&cfg.domain, h, level + 1)?;
    Ok(mesh_to_text(&meshes[level]))
}

/// Ordered key/value table printed by `convert` and `constants`.
pub type Table = Vec<(String, Value)>;

fn push(t: &mut Table, key: &str, v: f64) {
    t.push((key.to_string(), Value::from(v)));
}

/// Matrix to dilatation, or dilatation to matrix.
pub fn convert(matrix: Option<[f64; 3]>, mu: Option<[f64; 2]>) -> CliResult<Table> {
    let mut t = Table::new();
    match (matrix, mu) {
        (Some([a11, a12, a22]), None) => {
            let a = CoefficientMatrix::new(a11, a12, a22)?;
            let d = dilatation_from_matrix(&a)?;
            push(&mut t, "mu_re", d.as_complex().re);
            push(&mut t, "mu_im", d.as_complex().im);
            push(&mut t, "mu_abs", d.abs());
            push(&mut t, "K", ellipticity_constant(d.abs())?);
        }
        (None, Some([re, im])) => {
            let d = Dilatation::new(re, im)?;
            let a = matrix_from_dilatation(&d)?;
            push(&mut t, "a11", a.a11);
            push(&mut t, "a12", a.a12);
            push(&mut t, "a22", a.a22);
            push(&mut t, "K", ellipticity_constant(d.abs())?);
        }
        (None, None) => return Err(CliError::config("give either --a11/--a12/--a22 or --mu-re/--mu-im")),
        (Some(_), Some(_)) => return Err(CliError::config("give a matrix or a dilatation, not both")),
    }
    Ok(t)
}

/// Constants for the given `r`, `beta` and `K`, each optional.
pub fn constants(r: Option<f64>, beta: Option<f64>, k: Option<f64>, area: f64) -> CliResult<Table> {
    if r.is_none() && beta.is_none() && k.is_none() {
        return Err(CliError::config("give at least one of --r, --beta, --k"));
    }
    let mut t = Table::new();
    push(&mut t, "area", area);
    if let Some(r) = r {
        let b = poincare_constant_upper(r, area)?;
        push(&mut t, "r", r);
        push(&mut t, "B_r2", b.value);
        push(&mut t, "B_r2_p", b.p);
        push(&mut t, "B_r2_p_gap", b.p_gap);
        if r == 2.0 {
            let inv = 1.0 / disc_eigenvalue().sqrt();
            push(&mut t, "inverse_j01", inv);
            push(&mut t, "B_r2_minus_inverse_j01", b.value - inv);
        }
    }
    let beta = beta.map(Beta::new).transpose()?;
    if let Some(b) = beta {
        let s = stability_constant(b, area)?;
        push(&mut t, "beta", b.value());
        push(&mut t, "sobolev_exponent", b.sobolev_exponent());
        push(&mut t, "A_stability", s.value);
        push(&mut t, "A_stability_p", s.p);
        push(&mut t, "A_stability_p_gap", s.p_gap);
    }
    if let Some(k) = k {
        push(&mut t, "K", k);
        push(&mut t, "beta_tilde_minus_1", beta_tilde(k)?.excess());
        let star = beta_star(k)?;
        push(&mut t, "beta_star", star.value());
        push(&mut t, "beta_star_minus_1", star.excess());
        if let Some(b) = beta {
            push(&mut t, "nu_log10", nu(b, k)?.log10());
            push(&mut t, "C_beta_log10", c_beta(b, k)?.log10());
        }
        let m = m_beta(k, area)?;
        push(&mut t, "M_log10", m.value.log10());
        push(&mut t, "M_beta_minus_1", m.beta_excess);
        push(&mut t, "M_p", m.p);
        push(&mut t, "M_p_gap", m.p_gap);
        push(&mut t, "quasidisc_exponent", quasidisc_exponent(k));
    }
    Ok(t)
}

/// JSON object for a table.
pub fn table_json(t: &Table) -> String {
    let map: Map<String, Value> = t.iter().cloned().collect();
    crate::report::render_json(&Value::Object(map))
}

pub fn table_csv(t: &Table) -> String {
    let mut s = String::from("quantity,value\n");
    for (k, v) in t {
        s.push_str(&format!("{k},{}\n", fmt_value(k, v)));
    }
    s
}

pub fn table_text(t: &Table) -> String {
    let w = t.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    t.iter().map(|(k, v)| format!("{k:<w$} = {}\n", fmt_value(k, v))).collect()
}

fn fmt_value(key: &str, v: &Value) -> String {
    match v.as_f64() {
        // excesses and gaps can be far below 1e-6
        Some(x) if key.ends_with("minus_1") || key.ends_with("gap") => format!("{x:.6e}"),
        Some(x) => format!("{}", crate::report::round_sig(x)),
        None => v.to_string(),
    }
}
