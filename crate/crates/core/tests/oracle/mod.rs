//! 256-bit reference evaluation of the log-space constants, shared by test targets.
#![allow(dead_code)]

use astro_float::{BigFloat, Consts, RoundingMode};
use qcbound::constants::Beta;

pub const P: usize = 256;
pub const RM: RoundingMode = RoundingMode::ToEven;

pub struct Ctx {
    cc: Consts,
}

impl Ctx {
    pub fn new() -> Self {
        Self { cc: Consts::new().expect("constants cache") }
    }
    pub fn f(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, P)
    }
    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(P, RM)
    }
    pub fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(P, RM, &mut self.cc)
    }
    pub fn exp(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(P, RM, &mut self.cc)
    }
    pub fn pow(&mut self, x: &BigFloat, e: &BigFloat) -> BigFloat {
        x.pow(e, P, RM, &mut self.cc)
    }
    pub fn log10(&mut self, x: &BigFloat) -> f64 {
        to_f64(&x.log10(P, RM, &mut self.cc))
    }
    /// ln Gamma(x) for x > 0 by shifting to x + 30 and the Stirling series.
    pub fn ln_gamma(&mut self, x: &BigFloat) -> BigFloat {
        const BERNOULLI: [(f64, f64); 15] = [
            (1.0, 6.0),
            (-1.0, 30.0),
            (1.0, 42.0),
            (-1.0, 30.0),
            (5.0, 66.0),
            (-691.0, 2730.0),
            (7.0, 6.0),
            (-3617.0, 510.0),
            (43867.0, 798.0),
            (-174611.0, 330.0),
            (854513.0, 138.0),
            (-236364091.0, 2730.0),
            (8553103.0, 6.0),
            (-23749461029.0, 870.0),
            (8615841276005.0, 14322.0),
        ];
        let shift = 30;
        let mut shift_sum = self.f(0.0);
        let mut z = x.clone();
        for _ in 0..shift {
            shift_sum = shift_sum.add(&self.ln(&z), P, RM);
            z = z.add(&self.f(1.0), P, RM);
        }
        let half = self.f(0.5);
        let lnz = self.ln(&z);
        let two_pi = self.pi().mul(&self.f(2.0), P, RM);
        let mut s = z.sub(&half, P, RM).mul(&lnz, P, RM).sub(&z, P, RM).add(&self.ln(&two_pi).mul(&half, P, RM), P, RM);
        let z2 = z.mul(&z, P, RM);
        let mut zpow = z.clone();
        for (k, (num, den)) in BERNOULLI.iter().enumerate() {
            let n = 2 * (k + 1);
            let b = self.f(*num).div(&self.f(*den), P, RM);
            let term = b.div(&self.f((n * (n - 1)) as f64).mul(&zpow, P, RM), P, RM);
            s = s.add(&term, P, RM);
            zpow = zpow.mul(&z2, P, RM);
        }
        s.sub(&shift_sum, P, RM)
    }
}

pub fn to_f64(x: &BigFloat) -> f64 {
    format!("{x}").parse().expect("decimal")
}

pub fn beta_big(c: &Ctx, b: Beta) -> BigFloat {
    c.f(1.0).add(&c.f(b.excess()), P, RM)
}

pub fn nu_big(c: &mut Ctx, b: &BigFloat, k: f64) -> BigFloat {
    let one = c.f(1.0);
    let two = c.f(2.0);
    let pi = c.pi();
    let t = c.f(24.0).mul(&pi, P, RM).mul(&pi, P, RM).mul(&c.f(k * k), P, RM);
    let a = c.pow(&c.f(10.0), &c.f(8.0).mul(b, P, RM));
    let frac = two.mul(b, P, RM).sub(&two, P, RM).div(&two.mul(b, P, RM).sub(&one, P, RM), P, RM);
    let p = c.pow(&t, &two.mul(b, P, RM));
    a.mul(&frac, P, RM).mul(&p, P, RM)
}

pub fn c_beta_big(c: &mut Ctx, b: &BigFloat, k: f64) -> BigFloat {
    let one = c.f(1.0);
    let two = c.f(2.0);
    let nu = nu_big(c, b, k);
    let base = two.mul(b, P, RM).sub(&one, P, RM).mul(&one.sub(&nu, P, RM), P, RM);
    let e = one.div(&two.mul(b, P, RM), P, RM);
    c.f(1e6).div(&c.pow(&base, &e), P, RM)
}

/// exp{K^2 pi^2 (2 + pi^2)^2 / (d ln 3)}
pub fn exp_factor(c: &mut Ctx, k: f64, d: f64) -> BigFloat {
    let pi = c.pi();
    let pi2 = pi.mul(&pi, P, RM);
    let s = c.f(2.0).add(&pi2, P, RM);
    let ln3 = c.ln(&c.f(3.0));
    let x = c.f(k * k).mul(&pi2, P, RM).mul(&s, P, RM).mul(&s, P, RM).div(&c.f(d).mul(&ln3, P, RM), P, RM);
    c.exp(&x)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// `log10` of the quasidisc objective at `beta = 1 + excess` and `p = 2 - p_gap`.
pub fn m_beta_log10(c: &mut Ctx, b: Beta, p_gap: f64, k: f64, area: f64) -> f64 {
    let bb = beta_big(c, b);
    let one = c.f(1.0);
    let two = c.f(2.0);
    let pi = c.pi();
    let p = two.sub(&c.f(p_gap), P, RM);
    let pm1 = p.sub(&one, P, RM);
    let ratio = pm1.div(&c.f(p_gap), P, RM);
    let e1 = two.mul(&pm1, P, RM).div(&p, P, RM);
    let g1 = two.div(&p, P, RM);
    let g2 = c.f(3.0).sub(&g1, P, RM);
    let lg = c.ln_gamma(&g1).add(&c.ln_gamma(&g2), P, RM);
    let gamma_prod = c.exp(&lg);
    let pi_exp = bb.add(&one, P, RM).div(&two.mul(&bb, P, RM), P, RM).neg();
    let four_exp = one.div(&p, P, RM).neg();
    let inner = c
        .pow(&ratio, &e1)
        .mul(&c.pow(&pi, &pi_exp), P, RM)
        .mul(&c.pow(&c.f(4.0), &four_exp), P, RM)
        .div(&gamma_prod, P, RM);
    let cb = c_beta_big(c, &bb, k);
    let half = c.f(0.5);
    let big = cb
        .mul(&c.f(k), P, RM)
        .mul(&c.pow(&pi, &one.sub(&bb, P, RM).div(&two.mul(&bb, P, RM), P, RM)), P, RM)
        .div(&two, P, RM)
        .mul(&exp_factor(c, k, 4.0), P, RM)
        .mul(&c.pow(&c.f(area), &half), P, RM);
    let small = c.pow(&pi, &one.div(&two.mul(&bb, P, RM), P, RM));
    c.log10(&inner.mul(&big.add(&small, P, RM), P, RM))
}
