use std::f64::consts::PI;

use qcbound::beltrami::CoefficientField;
use qcbound::bounds::{monotonicity_upper, rfk_lower, sandwich_volume_preserving};
use qcbound::fem::{
    assemble, assemble_full, mesh_domain, nested_meshes, solve_on_domain, solve_on_mesh, solve_smallest, FemOptions,
};
use qcbound::geometry::{Domain, QcMap};
use qcbound::specfun::disc_eigenvalue;
use qcbound::Execution;

fn cases() -> Vec<QcMap> {
    vec![QcMap::Spiral, QcMap::EllipseAffine { a: 0.5 }, QcMap::Petal]
}

#[test]
fn refinement_is_monotone() {
    for d in [Domain::unit_disc(), Domain::Petal, Domain::unit_square()] {
        let meshes = nested_meshes(&d, 0.15, 3).unwrap();
        let l: Vec<f64> = meshes
            .iter()
            .map(|m| solve_on_mesh(m, &CoefficientField::Identity, 1, Execution::default()).unwrap().lambda1())
            .collect();
        for w in l.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-9), "{:?}: {l:?}", d.name());
        }
    }
}

#[test]
fn scale_covariance() {
    let m = mesh_domain(&Domain::unit_square(), 0.2).unwrap();
    let big = m.scaled(2.0);
    let a = solve_on_mesh(&m, &CoefficientField::Identity, 3, Execution::default()).unwrap();
    let b = solve_on_mesh(&big, &CoefficientField::Identity, 3, Execution::default()).unwrap();
    for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
        assert!((y * 4.0 - x).abs() < 1e-10 * x, "{x} {y}");
    }
}

#[test]
fn coefficient_sandwich_on_same_mesh() {
    for map in cases() {
        let d = map.source_domain();
        let k = map.k().unwrap() * (1.0 + 1e-9);
        let m = mesh_domain(&d, 0.1).unwrap();
        let lap = solve_on_mesh(&m, &CoefficientField::Identity, 1, Execution::default()).unwrap().lambda1();
        let la = solve_on_mesh(&m, &map.coefficient_field(), 1, Execution::default()).unwrap().lambda1();
        assert!(lap / k <= la && la <= k * lap, "{map:?}: {lap} {la}");
    }
}

#[test]
fn eigenvector_normalization_and_rayleigh_quotient() {
    let m = mesh_domain(&Domain::Petal, 0.1).unwrap();
    let sys = assemble(&m, &CoefficientField::Petal, Execution::default()).unwrap();
    let pairs = solve_smallest(&sys.stiffness, &sys.mass, 2).unwrap();
    assert!(pairs.values[0] > 0.0 && pairs.values[0] <= pairs.values[1]);
    for (v, lam) in pairs.vectors.iter().zip(&pairs.values) {
        assert!((sys.mass.form(v, v) - 1.0).abs() < 1e-12);
        assert!(v.iter().sum::<f64>() >= 0.0);
        let rq = sys.stiffness.form(v, v) / sys.mass.form(v, v);
        assert!((rq - lam).abs() < 1e-10 * lam);
    }
}

#[test]
fn mass_total_is_mesh_area() {
    let m = mesh_domain(&Domain::Ellipse { a: 0.5 }, 0.1).unwrap();
    let (_, mass) = assemble_full(&m, &CoefficientField::Identity, Execution::default()).unwrap();
    assert!((mass.total() - m.area()).abs() < 1e-12);
}

#[test]
fn spiral_stiffness_is_spd() {
    let m = mesh_domain(&Domain::unit_disc(), 0.1).unwrap();
    let sys = assemble(&m, &CoefficientField::Spiral, Execution::default()).unwrap();
    assert!(sys.stiffness.max_asymmetry() == 0.0);
    let pairs = solve_smallest(&sys.stiffness, &sys.mass, 1).unwrap();
    assert!(pairs.values[0] > 0.0);
}

#[test]
fn sandwich_brackets_fem_for_builtin_maps() {
    for map in cases() {
        let res = solve_on_domain(
            &map.source_domain(),
            &map.coefficient_field(),
            FemOptions { target_h: 0.1, refinements: 2, eigen_count: 1 },
            Execution::default(),
        )
        .unwrap();
        let (lo, hi) = sandwich_volume_preserving(map.k().unwrap()).unwrap();
        assert!(lo.linear().unwrap() <= res.min_lambda1(), "{map:?}");
        assert!(res.extrapolated <= hi.linear().unwrap() * (1.0 + res.relative_error()));
        assert!(res.extrapolated <= res.min_lambda1());
        assert!(res.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn rfk_below_monotonicity() {
    for d in [Domain::unit_disc(), Domain::Ellipse { a: 0.5 }, Domain::Petal, Domain::unit_square()] {
        let a = d.area().unwrap();
        let rho = d.inscribed_radius().unwrap();
        assert!(rfk_lower(a).unwrap().linear().unwrap() <= monotonicity_upper(rho).unwrap().linear().unwrap());
        assert!(PI * rho * rho <= a);
    }
}

#[test]
fn square_eigenvalue() {
    let res = solve_on_domain(
        &Domain::unit_square(),
        &CoefficientField::Identity,
        FemOptions { target_h: 0.1, refinements: 3, eigen_count: 1 },
        Execution::default(),
    )
    .unwrap();
    let exact = 2.0 * PI * PI;
    assert!((res.extrapolated - exact).abs() < 3e-3 * exact, "{}", res.extrapolated);
    assert!(res.error_estimate > 0.0);
}

#[test]
fn results_identical_across_execution_modes() {
    let opts = FemOptions { target_h: 0.15, refinements: 2, eigen_count: 2 };
    let a = solve_on_domain(&Domain::unit_disc(), &CoefficientField::Spiral, opts, Execution::Sequential).unwrap();
    let b = solve_on_domain(&Domain::unit_disc(), &CoefficientField::Spiral, opts, Execution::default()).unwrap();
    assert_eq!(a, b);
    assert!((a.extrapolated - disc_eigenvalue()).abs() < 0.02 * disc_eigenvalue());
}
