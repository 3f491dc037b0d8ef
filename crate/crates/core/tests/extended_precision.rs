//! Independent 256-bit evaluation of the log-space constants.

mod oracle;

use oracle::*;
use qcbound::constants::{beta_tilde, c_beta, jacobian_norm_bound, m_beta, nu, Beta};

#[test]
fn nu_matches_oracle() {
    let mut c = Ctx::new();
    for (excess, k) in [(1.0, 1.0), (1e-14, 1.5), (0.5, 2.0), (1e-3, 10.0)] {
        let b = Beta::from_excess(excess).unwrap();
        let ours = nu(b, k).unwrap().log10();
        let bb = beta_big(&c, b);
        let v = nu_big(&mut c, &bb, k);
        let oracle = c.log10(&v);
        assert!(rel(ours, oracle) < 1e-8 || (ours - oracle).abs() < 1e-12, "{excess} {k}: {ours} vs {oracle}");
    }
    // beta = 2, K = 1 closed form: about 25.32
    let bb = c.f(2.0);
    let v = nu_big(&mut c, &bb, 1.0);
    assert!((c.log10(&v) - 25.32).abs() < 0.01);
}

#[test]
fn beta_tilde_is_an_oracle_root() {
    let mut c = Ctx::new();
    for k in [1.0, 1.1, 2.0, 10.0] {
        let b = beta_tilde(k).unwrap();
        let bb = beta_big(&c, b);
        let n = nu_big(&mut c, &bb, k);
        let v = c.log10(&n);
        assert!(v.abs() < 1e-10, "K={k}: log10 nu = {v}");
    }
}

#[test]
fn c_beta_matches_oracle() {
    let mut c = Ctx::new();
    for k in [1.0, 1.5, 2.0] {
        let mid = Beta::from_excess(0.5 * beta_tilde(k).unwrap().excess()).unwrap();
        let ours = c_beta(mid, k).unwrap().log10();
        let bb = beta_big(&c, mid);
        let cb = c_beta_big(&mut c, &bb, k);
        let oracle = c.log10(&cb);
        assert!(rel(ours, oracle) < 1e-8, "K={k}: {ours} vs {oracle}");
    }
}

#[test]
fn jacobian_bound_matches_oracle() {
    let mut c = Ctx::new();
    let b = Beta::from_excess(1e-14).unwrap();
    let (k, area) = (1.5, std::f64::consts::PI);
    let ours = jacobian_norm_bound(b, k, area).unwrap().log10();
    let bb = beta_big(&c, b);
    let cb = c_beta_big(&mut c, &bb, k);
    let one = c.f(1.0);
    let pi = c.pi();
    let pexp = one.sub(&bb, P, RM).div(&bb, P, RM);
    let v = cb
        .mul(&cb, P, RM)
        .mul(&c.f(k * k), P, RM)
        .mul(&c.pow(&pi, &pexp), P, RM)
        .div(&c.f(4.0), P, RM)
        .mul(&exp_factor(&mut c, k, 2.0), P, RM)
        .mul(&c.f(area), P, RM);
    let oracle = c.log10(&v);
    assert!(rel(ours, oracle) < 1e-8, "{ours} vs {oracle}");
}

#[test]
fn m_beta_matches_oracle_at_its_minimiser() {
    let mut c = Ctx::new();
    let area = std::f64::consts::PI;
    for k in [1.1, 1.5, 2.0] {
        let m = m_beta(k, area).unwrap();
        let b = Beta::from_excess(m.beta_excess).unwrap();
        let oracle = m_beta_log10(&mut c, b, m.p_gap, k, area);
        let ours = m.value.log10();
        assert!(rel(ours, oracle) < 1e-8, "K={k}: {ours} vs {oracle}");
        assert!(ours >= 137.0 * k * k - 10.0);
    }
}

#[test]
fn stirling_gamma_sanity() {
    let mut c = Ctx::new();
    // Gamma(1.5) = sqrt(pi)/2
    let g = to_f64(&c.ln_gamma(&c.f(1.5)));
    assert!((g - (std::f64::consts::PI.sqrt() / 2.0).ln()).abs() < 1e-15);
    assert!(to_f64(&c.ln_gamma(&c.f(1.0))).abs() < 1e-15);
}
