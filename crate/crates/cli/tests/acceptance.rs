//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

#[path = "../../core/tests/oracle/mod.rs"]
mod oracle;

use std::f64::consts::{PI, SQRT_2};
use std::process::Command;
use std::time::Instant;

use rand::{rngs::StdRng, Rng, SeedableRng};

use qcbound::beltrami::{dilatation_from_matrix, matrix_from_dilatation, CoefficientField, Dilatation};
use qcbound::bounds::{monotonicity_upper, payne_weinberger_upper, rfk_lower, sandwich_volume_preserving, weighted_poincare_check};
use qcbound::constants::{beta_tilde, c_beta, m_beta, nu, poincare_constant_upper, stability_constant, Beta, ENDPOINT_CLAMP};
use qcbound::fem::{solve_on_domain, EigenResult, FemOptions};
use qcbound::geometry::{isometry_check, Domain, QcMap, TestFunction};
use qcbound::quadrature::PolarRule;
use qcbound::specfun::disc_eigenvalue;
use qcbound::Execution;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn j2() -> f64 {
    disc_eigenvalue()
}

fn fem(domain: &Domain, field: &CoefficientField, levels: usize) -> EigenResult {
    let opts = FemOptions { target_h: 0.1, refinements: levels, eigen_count: 1 };
    solve_on_domain(domain, field, opts, Execution::default()).expect("FEM solve")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn sig5(x: f64) -> String {
    format!("{:.4e}", x)
}

fn ensure(ok: bool, msg: String) -> Check {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c1_disc() -> Check {
    let t = Instant::now();
    let opts = FemOptions { target_h: 0.1, refinements: 3, eigen_count: 1 };
    let r = solve_on_domain(&Domain::unit_disc(), &CoefficientField::Identity, opts, Execution::Sequential)
        .map_err(|e| e.to_string())?;
    let secs = t.elapsed().as_secs_f64();
    let e = rel(r.extrapolated, j2());
    ensure(
        e < 3e-3 && secs < 60.0,
        format!("extrapolated {:.6} vs {:.6}, rel {e:.1e} (< 3e-3), {secs:.2} s single-threaded", r.extrapolated, j2()),
    )
}

fn c2_spiral() -> Check {
    let map = QcMap::Spiral;
    let k = map.k().map_err(|e| e.to_string())?;
    let want_k = (2.0 + SQRT_2) / (2.0 - SQRT_2);
    let upper = k * j2();
    let r = fem(&map.source_domain(), &map.coefficient_field(), 3);
    let e = rel(r.extrapolated, j2());
    ensure(
        rel(k, want_k) < 1e-12 && (upper - 33.71).abs() < 0.005 && j2() <= r.min_lambda1() && r.extrapolated <= upper && e < 0.02,
        format!(
            "j01^2 <= {:.6} (fem), extrapolated {:.6} <= {upper:.4}, rel to j01^2 {e:.1e} (< 2e-2)",
            r.min_lambda1(),
            r.extrapolated
        ),
    )
}

fn c3_ellipse() -> Check {
    let map = QcMap::EllipseAffine { a: 0.5 };
    let k = map.k().map_err(|e| e.to_string())?;
    let want_k = (1.25f64.sqrt() + 0.5) / (1.25f64.sqrt() - 0.5);
    let (_, hi) = sandwich_volume_preserving(k).map_err(|e| e.to_string())?;
    let hi = hi.linear().unwrap();
    let r = fem(&map.source_domain(), &map.coefficient_field(), 3);
    let e = rel(r.extrapolated, j2());
    ensure(
        rel(k, want_k) < 1e-12 && sig5(hi) == sig5(2.61803 * j2()) && sig5(k) == sig5(2.61803) && e < 5e-3,
        format!("sandwich upper {hi:.4} (K = {k:.5}), FEM {:.6}, rel {e:.1e} (< 5e-3)", r.extrapolated),
    )
}

fn c4_petal() -> Check {
    let map = QcMap::Petal;
    let k = map.k().map_err(|e| e.to_string())?;
    let (_, hi) = sandwich_volume_preserving(k).map_err(|e| e.to_string())?;
    let hi = hi.linear().unwrap();
    let area = Domain::Petal.area().map_err(|e| e.to_string())?;
    let r = fem(&Domain::Petal, &map.coefficient_field(), 3);
    let e = rel(r.extrapolated, j2());
    let in_range = j2() <= r.min_lambda1() && r.extrapolated <= 2.0 * j2() * (1.0 + r.relative_error());
    ensure(
        sig5(hi) == sig5(11.566) && rel(hi, 2.0 * j2()) < 1e-12 && in_range && e < 0.02 && (area - PI).abs() < 1e-8,
        format!(
            "sandwich upper {hi:.4}, FEM {:.6} in [j01^2, 2 j01^2], rel {e:.1e} (< 2e-2), area - pi = {:.1e}",
            r.extrapolated,
            area - PI
        ),
    )
}

fn c5_payne_weinberger() -> Check {
    let at_disc = payne_weinberger_upper(PI, 2.0 * PI).map_err(|e| e.to_string())?.linear().unwrap();
    let d = Domain::Ellipse { a: 0.5 };
    let pw = payne_weinberger_upper(d.area().unwrap(), d.perimeter().unwrap()).map_err(|e| e.to_string())?;
    let pw = pw.linear().unwrap();
    let r = fem(&d, &CoefficientField::Identity, 3);
    let top = r.min_lambda1().max(r.extrapolated + 3.0 * r.error_estimate);
    ensure(
        (at_disc - j2()).abs() < 1e-10 && pw - top > 0.0,
        format!("PW(pi, 2 pi) - j01^2 = {:.1e}; ellipse PW {pw:.4} > FEM {top:.4}", at_disc - j2()),
    )
}

fn c6_rfk() -> Check {
    let mut msg = Vec::new();
    let mut ok = true;
    for d in [Domain::Ellipse { a: 0.5 }, Domain::Petal] {
        let lower = rfk_lower(d.area().unwrap()).map_err(|e| e.to_string())?.linear().unwrap();
        let r = fem(&d, &CoefficientField::Identity, 3);
        let excess = r.extrapolated - lower;
        ok &= excess > r.error_estimate;
        msg.push(format!("{} {:.4} - {lower:.4} = {excess:.3} > err {:.1e}", d.name(), r.extrapolated, r.error_estimate));
    }
    ensure(ok, msg.join("; "))
}

fn c7_monotonicity() -> Check {
    let mut msg = Vec::new();
    let mut ok = true;
    for d in [Domain::unit_disc(), Domain::Ellipse { a: 0.5 }, Domain::Petal] {
        let rho = d.inscribed_radius().map_err(|e| e.to_string())?;
        let bound = monotonicity_upper(rho).map_err(|e| e.to_string())?.linear().unwrap();
        let r = fem(&d, &CoefficientField::Identity, 3);
        ok &= r.extrapolated <= bound * (1.0 + r.relative_error());
        msg.push(format!("{} {:.4} <= {bound:.4} (rho {rho:.4})", d.name(), r.extrapolated));
    }
    ensure(ok, msg.join("; "))
}

fn c8_round_trip() -> Check {
    let mut rng = StdRng::seed_from_u64(8);
    let (mut e_mu, mut e_a, mut e_det) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let r = 0.95 * rng.gen::<f64>().sqrt();
        let t = rng.gen_range(-PI..PI);
        let mu = Dilatation::new(r * t.cos(), r * t.sin()).map_err(|e| e.to_string())?;
        let a = matrix_from_dilatation(&mu).map_err(|e| e.to_string())?;
        let back = dilatation_from_matrix(&a).map_err(|e| e.to_string())?;
        let a2 = matrix_from_dilatation(&back).map_err(|e| e.to_string())?;
        e_mu = e_mu.max((back.as_complex() - mu.as_complex()).norm());
        e_a = e_a.max(a2.max_abs_diff(&a));
        e_det = e_det.max((a.det() - 1.0).abs()).max((a2.det() - 1.0).abs());
    }
    ensure(
        e_mu < 1e-12 && e_a < 1e-10 && e_det < 1e-12,
        format!("max |mu err| {e_mu:.1e}, max |A err| {e_a:.1e}, max |det - 1| {e_det:.1e}"),
    )
}

/// Closed-form Sobolev-Poincare estimate at `p`, linear scale.
fn b_at(p: f64, r: f64, area: f64) -> f64 {
    use statrs::function::gamma::ln_gamma;
    let ln = (p - 1.0) / p * ((p - 1.0) / (2.0 - p)).ln() - 0.5 * PI.ln() - std::f64::consts::LN_2 / p
        + area.ln() / r
        - 0.5 * (ln_gamma(2.0 / p) + ln_gamma(3.0 - 2.0 / p));
    ln.exp()
}

fn c9_constants() -> Check {
    let mut worst = 0.0f64;
    for r in [2.0, 2.5, 3.0, 4.0, 6.0, 10.0] {
        for area in [PI, 0.7] {
            let ours = poincare_constant_upper(r, area).map_err(|e| e.to_string())?.value;
            let lo = 2.0 * r / (r + 2.0);
            let d = ENDPOINT_CLAMP * (2.0 - lo);
            let (a, b) = (lo + d, 2.0 - d);
            let n = 100_000;
            let grid = (0..n)
                .map(|i| b_at(a + (b - a) * i as f64 / (n - 1) as f64, r, area))
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(rel(ours, grid));
        }
    }
    let b22 = poincare_constant_upper(2.0, PI).map_err(|e| e.to_string())?.value;
    let inv = 1.0 / j2().sqrt();
    let mut stab = 0.0f64;
    for beta in [1.1, 1.5, 2.0, 3.0, 10.0] {
        for area in [PI, 2.0] {
            let b = Beta::new(beta).unwrap();
            let s = stability_constant(b, area).map_err(|e| e.to_string())?.value;
            let p = poincare_constant_upper(b.sobolev_exponent(), area).map_err(|e| e.to_string())?.value;
            stab = stab.max(rel(s, p));
        }
    }
    ensure(
        worst < 1e-8 && b22 >= inv && stab < 1e-12,
        format!("12 pairs vs 1e5 grid: max rel {worst:.1e}; B_2,2 {b22:.6} >= {inv:.6}; stability vs Poincare {stab:.1e}"),
    )
}

fn c10_quasidisc() -> Check {
    use oracle::*;
    let mut c = Ctx::new();
    let mut root = 0.0f64;
    for k in [1.0, 1.1, 2.0, 10.0] {
        let b = beta_tilde(k).map_err(|e| e.to_string())?;
        let bb = beta_big(&c, b);
        let n = nu_big(&mut c, &bb, k);
        root = root.max(c.log10(&n).abs());
    }
    let mut monotone = true;
    for k in [1.0, 1.5, 3.0] {
        let vals: Vec<f64> = (0..60).map(|i| nu(Beta::from_excess(1e-16 * 2f64.powi(i)).unwrap(), k).unwrap().log10()).collect();
        monotone &= vals.windows(2).all(|w| w[1] > w[0]);
    }
    for e in [1e-12, 0.1, 1.0] {
        let vals: Vec<f64> = (0..20).map(|i| nu(Beta::from_excess(e).unwrap(), 1.0 + 0.5 * i as f64).unwrap().log10()).collect();
        monotone &= vals.windows(2).all(|w| w[1] > w[0]);
    }
    let mut worst = 0.0f64;
    let mut magnitude = true;
    for k in [1.1, 1.5, 2.0] {
        let m = m_beta(k, PI).map_err(|e| e.to_string())?;
        let l = m.value.log10();
        magnitude &= l.is_finite() && l >= 137.0 * k * k - 10.0;
        let b = Beta::from_excess(m.beta_excess).unwrap();
        worst = worst.max(rel(l, m_beta_log10(&mut c, b, m.p_gap, k, PI)));
        let mid = Beta::from_excess(0.5 * beta_tilde(k).unwrap().excess()).unwrap();
        let bb = beta_big(&c, mid);
        let cb = c_beta_big(&mut c, &bb, k);
        let oracle = c.log10(&cb);
        worst = worst.max(rel(c_beta(mid, k).map_err(|e| e.to_string())?.log10(), oracle));
        let nb = nu_big(&mut c, &bb, k);
        let oracle = c.log10(&nb);
        worst = worst.max(rel(nu(mid, k).unwrap().log10(), oracle));
    }
    ensure(
        root < 1e-10 && monotone && magnitude && worst < 1e-8,
        format!("max |log10 nu(beta~)| {root:.1e}; nu monotone: {monotone}; log10 M >= 137 K^2 - 10: {magnitude}; oracle rel {worst:.1e}"),
    )
}

const MAPS: [QcMap; 3] = [QcMap::Spiral, QcMap::EllipseAffine { a: 0.5 }, QcMap::Petal];

fn c11_isometry() -> Check {
    let mut worst = 0.0f64;
    for map in MAPS {
        for f in TestFunction::CATALOG {
            let c = isometry_check(&map, f, PolarRule::default(), Execution::default()).map_err(|e| e.to_string())?;
            worst = worst.max(c.relative_gap);
        }
    }
    ensure(worst < 1e-3, format!("9 map/function pairs, max relative gap {worst:.1e} (< 1e-3)"))
}

fn c12_weighted_poincare() -> Check {
    let mut count = 0;
    let mut failed = Vec::new();
    let mut tightest = f64::INFINITY;
    for r in [2.0, 4.0] {
        for map in MAPS {
            for f in TestFunction::CATALOG {
                let c = weighted_poincare_check(&map, r, f, PolarRule::default(), Execution::default())
                    .map_err(|e| e.to_string())?;
                count += 1;
                tightest = tightest.min(c.rhs / c.lhs);
                if !c.holds {
                    failed.push(format!("{} r={r} {}", map.name(), f.name()));
                }
            }
        }
    }
    ensure(
        failed.is_empty(),
        format!("{count} checks, {} failed {failed:?}, smallest rhs/lhs {tightest:.3}", failed.len()),
    )
}

fn c13_determinism() -> Check {
    let dir = std::env::temp_dir().join(format!("qcbound-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let cfg = dir.join("case.json");
    std::fs::write(
        &cfg,
        r#"{"case_id": "determinism", "domain": {"kind": "petal"}, "coefficient": {"kind": "petal"},
            "bounds_requested": ["sandwich", "jacobian_upper", "stability_gap", "quasidisc_upper"],
            "beta": 2.0, "fem": {"refinements": 3, "target_h": 0.1, "eigen_count": 2}}"#,
    )
    .map_err(|e| e.to_string())?;
    let run = |threads: Option<&str>| -> Result<Vec<u8>, String> {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_qcbound"));
        cmd.arg("verify").arg("--config").arg(&cfg);
        if let Some(t) = threads {
            cmd.args(["--threads", t]);
        }
        let out = cmd.output().map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
        }
        Ok(out.stdout)
    };
    let a = run(None)?;
    let b = run(None)?;
    let t1 = run(Some("1"))?;
    let t4 = run(Some("4"))?;
    let _ = std::fs::remove_dir_all(&dir);
    ensure(
        a == b && t1 == t4 && a == t1 && !a.is_empty(),
        format!("{} bytes; two runs equal: {}; threads 1 vs 4 equal: {}", a.len(), a == b, t1 == t4),
    )
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("disc eigenvalue", c1_disc),
        ("spiral on the disc", c2_spiral),
        ("ellipse a = 0.5", c3_ellipse),
        ("petal", c4_petal),
        ("Payne-Weinberger", c5_payne_weinberger),
        ("Rayleigh-Faber-Krahn", c6_rfk),
        ("monotonicity", c7_monotonicity),
        ("Beltrami round trip", c8_round_trip),
        ("Poincare constants", c9_constants),
        ("quasidisc constants", c10_quasidisc),
        ("isometry", c11_isometry),
        ("weighted Poincare", c12_weighted_poincare),
        ("determinism", c13_determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(msg) => println!("PASS [{:>2}] {name}: {msg} [{secs:.1}s]", i + 1),
            Err(msg) => {
                failures += 1;
                println!("FAIL [{:>2}] {name}: {msg} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
