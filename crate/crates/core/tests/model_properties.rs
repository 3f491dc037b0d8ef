//! Cross-module properties of the analytic layer.

use proptest::prelude::*;
use qcbound::beltrami::{dilatation_from_matrix, matrix_from_dilatation, validate_field, CoefficientField, Dilatation};
use qcbound::bounds::payne_weinberger_upper;
use qcbound::constants::{poincare_constant_upper, stability_constant, Beta};
use qcbound::geometry::{Domain, QcMap};
use qcbound::specfun::disc_eigenvalue;
use qcbound::Execution;

#[test]
fn builtin_fields_validate_on_their_domains() {
    for map in [QcMap::Identity, QcMap::Spiral, QcMap::EllipseAffine { a: 0.5 }, QcMap::Petal] {
        let v = validate_field(&map.coefficient_field(), &map.source_domain(), 2000, 1, Execution::default()).unwrap();
        assert!(v.passed, "{map:?}: {v:?}");
    }
}

#[test]
fn payne_weinberger_tight_at_disc() {
    let at_disc = payne_weinberger_upper(std::f64::consts::PI, 2.0 * std::f64::consts::PI).unwrap();
    assert!((at_disc.linear().unwrap() - disc_eigenvalue()).abs() < 1e-10);
}

proptest! {
    #[test]
    fn round_trip_through_matrix(r in 0.0f64..0.95, t in -3.2f64..3.2) {
        let mu = Dilatation::new(r * t.cos(), r * t.sin()).unwrap();
        let a = matrix_from_dilatation(&mu).unwrap();
        prop_assert!((a.det() - 1.0).abs() < 1e-12);
        let back = dilatation_from_matrix(&a).unwrap();
        prop_assert!((back.as_complex() - mu.as_complex()).norm() < 1e-12);
        let again = matrix_from_dilatation(&back).unwrap();
        prop_assert!(again.max_abs_diff(&a) < 1e-10);
    }

    #[test]
    fn stability_is_poincare_at_r(beta in 1.05f64..20.0, area in 0.5f64..20.0) {
        let b = Beta::new(beta).unwrap();
        let s = stability_constant(b, area).unwrap().value;
        let p = poincare_constant_upper(b.sobolev_exponent(), area).unwrap().value;
        prop_assert!((s - p).abs() <= 1e-12 * p);
    }

    #[test]
    fn constant_fields_validate(re in -0.9f64..0.9, im in -0.4f64..0.4) {
        let field = CoefficientField::FromDilatation { mu: qcbound::beltrami::DilatationSpec::Constant { re, im } };
        let v = validate_field(&field, &Domain::unit_disc(), 200, 3, Execution::default()).unwrap();
        prop_assert!(v.passed);
    }
}
