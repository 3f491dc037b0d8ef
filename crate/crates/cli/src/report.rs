//! Verification reports and their JSON / CSV renderings.

use serde::Serialize;
use serde_json::Value;

use qcbound::beltrami::CoefficientField;
use qcbound::bounds::{BoundKind, BoundResult, BoundValue};
use qcbound::fem::{EigenResult, JacobianNorms};
use qcbound::geometry::Domain;

/// Significant digits kept in every emitted float.
pub const SIG_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inputs {
    pub domain: Domain,
    pub coefficient: CoefficientField,
    pub area: f64,
    pub perimeter: f64,
    pub inscribed_radius: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub beta: Option<f64>,
    pub alpha_makai: Option<f64>,
    pub jacobian: Option<JacobianNorms>,
    pub fem: Option<FemInputs>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FemInputs {
    pub refinements: usize,
    pub target_h: f64,
    pub eigen_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeshSummary {
    pub h: f64,
    pub vertices: usize,
    pub lambda1: f64,
    pub eigenvalues: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FemSummary {
    pub eigenvalues: Vec<f64>,
    pub extrapolated: f64,
    pub error_estimate: f64,
    pub observed_rate: Option<f64>,
    pub meshes: Vec<MeshSummary>,
}

impl From<&EigenResult> for FemSummary {
    fn from(r: &EigenResult) -> Self {
        Self {
            eigenvalues: r.eigenvalues.clone(),
            extrapolated: r.extrapolated,
            error_estimate: r.error_estimate,
            observed_rate: r.observed_rate,
            meshes: r
                .meshes
                .iter()
                .map(|m| MeshSummary {
                    h: m.h,
                    vertices: m.vertices,
                    lambda1: m.lambda1(),
                    eigenvalues: m.eigenvalues.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub inequality: String,
    pub holds: bool,
    /// Signed slack, positive when the inequality holds.
    pub margin: f64,
    /// Relative tolerance granted to the extrapolated eigenvalue.
    pub tolerance: f64,
}

impl Verdict {
    /// `L <= lambda_1` on the finest mesh; conforming FEM overestimates, so no slack.
    pub fn lower(bound: &BoundResult, lambda_fem: f64) -> Self {
        let l = bound.value.log10();
        let ratio = 10f64.powf(l - lambda_fem.log10());
        Self {
            inequality: format!("lambda1_fem >= {}", bound.name),
            holds: ratio <= 1.0,
            margin: 1.0 - ratio,
            tolerance: 0.0,
        }
    }

    /// `lambda_ext <= U (1 + tol)`, computed in log space so huge bounds are fine.
    pub fn upper(bound: &BoundResult, lambda_ext: f64, tol: f64) -> Self {
        let ratio = 10f64.powf(lambda_ext.log10() - bound.value.log10()) / (1.0 + tol);
        Self {
            inequality: format!("lambda1_extrapolated <= {}", bound.name),
            holds: ratio <= 1.0,
            margin: 1.0 - ratio,
            tolerance: tol,
        }
    }

    /// `|lambda_ext - lambda_disc| <= G + tol lambda_ext`.
    pub fn gap(bound: &BoundResult, lambda_ext: f64, lambda_disc: f64, tol: f64) -> Self {
        let allowed = bound.linear().unwrap_or(f64::INFINITY) + tol * lambda_ext;
        let ratio = (lambda_ext - lambda_disc).abs() / allowed;
        Self {
            inequality: format!("|lambda1_extrapolated - lambda1_disc| <= {}", bound.name),
            holds: ratio <= 1.0,
            margin: 1.0 - ratio,
            tolerance: tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub version: String,
    pub config_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub case_id: String,
    pub inputs: Inputs,
    pub bounds: Vec<BoundResult>,
    pub fem: Option<FemSummary>,
    pub verdicts: Vec<Verdict>,
    pub provenance: Provenance,
}

impl VerificationReport {
    pub fn bound(&self, name: &str) -> Option<&BoundResult> {
        self.bounds.iter().find(|b| b.name == name)
    }

    pub fn all_hold(&self) -> bool {
        self.verdicts.iter().all(|v| v.holds)
    }

    pub fn to_json(&self) -> String {
        render_json(self)
    }

    /// Bounds only: one row per bound. With FEM: one row per (mesh, eigenvalue)
    /// then a summary row.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match &self.fem {
            None => {
                out.push_str("name,kind,value,log10_value\n");
                for b in &self.bounds {
                    let kind = match b.kind {
                        BoundKind::Upper => "upper",
                        BoundKind::Lower => "lower",
                    };
                    let linear = match b.value {
                        BoundValue::Linear(v) => num(v),
                        BoundValue::Log10(_) => String::new(),
                    };
                    out.push_str(&format!("{},{kind},{linear},{}\n", b.name, num(b.value.log10())));
                }
            }
            Some(fem) => {
                out.push_str("level,h,vertices,index,eigenvalue,error_estimate\n");
                for (level, m) in fem.meshes.iter().enumerate() {
                    for (i, &l) in m.eigenvalues.iter().enumerate() {
                        out.push_str(&format!("{level},{},{},{},{},\n", num(m.h), m.vertices, i + 1, num(l)));
                    }
                }
                out.push_str(&format!(
                    "summary,,,1,{},{}\n",
                    num(fem.extrapolated),
                    num(fem.error_estimate)
                ));
            }
        }
        out
    }
}

/// `x` rounded to [`SIG_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        // also folds -0 into 0
        return x + 0.0;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap_or(x)
}

fn num(x: f64) -> String {
    format!("{}", round_sig(x))
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap_or(f64::NAN));
            *v = serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null);
        }
        Value::Array(a) => a.iter_mut().for_each(round_value),
        Value::Object(o) => o.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with fixed field order and floats rounded to 12 significant digits.
pub fn render_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("report serializes");
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round_sig(5.783185962946784), 5.78318596295);
        assert_eq!(round_sig(-1.0e-300 / 3.0), -3.33333333333e-301);
        assert_eq!(round_sig(0.0), 0.0);
        assert_eq!(render_json(&[1.0f64 / 3.0]), "[\n  0.333333333333\n]\n");
    }

    #[test]
    fn verdict_signs() {
        let b = qcbound::bounds::rfk_lower(std::f64::consts::PI).unwrap();
        let v = Verdict::lower(&b, 6.0);
        assert!(v.holds && v.margin > 0.0);
        assert!(!Verdict::lower(&b, 5.0).holds);
        let u = Verdict::upper(&b, 5.8, 0.01);
        assert!(u.holds);
        assert!(!Verdict::upper(&b, 5.9, 0.001).holds);
    }
}
