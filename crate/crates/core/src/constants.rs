//! Sobolev-Poincare constants and the quasidisc constant `M_beta(K)`.
//!
//! The exponent `beta` of the quasidisc estimates lives extremely close to 1
//! (`beta~ - 1` is about `1e-13` for `K = 1` and below `1e-17` for `K = 10`),
//! so it is carried as its excess `beta - 1` through [`Beta`]. Likewise the
//! `p` of the inner infima is handled through its gap `q = 2 - p`.

use std::f64::consts::{LN_10, PI};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::optimize::{Minimizer, Minimum};
use crate::specfun::gamma_positive;

/// A positive real stored as its base-10 logarithm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogValue {
    log10: f64,
}

impl LogValue {
    /// Largest `|log10|` for which [`LogValue::to_linear`] converts.
    pub const LINEAR_LIMIT: f64 = 300.0;

    pub fn from_log10(log10: f64) -> Self {
        Self { log10 }
    }

    pub fn from_linear(x: f64) -> Result<Self> {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::domain(format!("LogValue needs a finite positive value, got {x}")));
        }
        Ok(Self { log10: x.log10() })
    }

    pub fn log10(self) -> f64 {
        self.log10
    }

    pub fn ln(self) -> f64 {
        self.log10 * LN_10
    }

    /// The linear value if it is safely representable.
    pub fn to_linear(self) -> Option<f64> {
        (self.log10.abs() < Self::LINEAR_LIMIT).then(|| 10f64.powf(self.log10))
    }

    pub fn is_finite(self) -> bool {
        self.log10.is_finite()
    }

    pub fn mul(self, other: Self) -> Self {
        Self::from_log10(self.log10 + other.log10)
    }

    pub fn powf(self, e: f64) -> Self {
        Self::from_log10(self.log10 * e)
    }

    /// `self + other` by log-sum-exp.
    pub fn add(self, other: Self) -> Self {
        let (hi, lo) = if self.log10 >= other.log10 { (self, other) } else { (other, self) };
        if lo.log10 == f64::NEG_INFINITY {
            return hi;
        }
        Self::from_log10(hi.log10 + (10f64.powf(lo.log10 - hi.log10)).ln_1p() / LN_10)
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "10^{}", self.log10)
    }
}

impl Serialize for LogValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.log10)
    }
}

/// An exponent `beta > 1`, stored as `beta - 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Beta {
    excess: f64,
}

impl Beta {
    pub fn from_excess(excess: f64) -> Result<Self> {
        if !(excess.is_finite() && excess > 0.0) {
            return Err(Error::domain(format!("beta - 1 = {excess} must be positive and finite")));
        }
        Ok(Self { excess })
    }

    pub fn new(beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 1.0) {
            return Err(Error::domain(format!("beta = {beta} must be > 1")));
        }
        Self::from_excess(beta - 1.0)
    }

    /// `beta - 1`.
    pub fn excess(self) -> f64 {
        self.excess
    }

    pub fn value(self) -> f64 {
        1.0 + self.excess
    }

    /// The integrability exponent `r = 4 beta / (beta - 1)`.
    pub fn sobolev_exponent(self) -> f64 {
        4.0 * (1.0 + self.excess) / self.excess
    }
}

/// Minimiser of a `p`-infimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoincareEstimate {
    pub value: f64,
    /// `p` at which the infimum is attained on the clamped interval.
    pub p: f64,
    /// `2 - p`, kept separately since `p` may be within rounding of 2.
    pub p_gap: f64,
}

/// Relative distance kept from the ends of the open `p` interval.
pub const ENDPOINT_CLAMP: f64 = 1e-9;

/// The clamped range of `q = 2 - p` for an interval `(2 - q_max, 2)`.
fn q_range(q_max: f64) -> (f64, f64) {
    let d = ENDPOINT_CLAMP * q_max;
    (d, q_max - d)
}

fn ln_gamma(x: f64) -> f64 {
    gamma_positive(x).ln()
}

/// Natural log of `((p-1)/(2-p))^{(p-1)/p} / (sqrt(pi) 2^{1/p} sqrt(G(2/p) G(3-2/p)))`
/// at `p = 2 - q`, without the area factor.
fn ln_sobolev_kernel(q: f64) -> f64 {
    let p = 2.0 - q;
    let e = (1.0 - q) / p;
    e * ((1.0 - q) / q).ln() - 0.5 * PI.ln() - std::f64::consts::LN_2 / p
        - 0.5 * (ln_gamma(2.0 / p) + ln_gamma((4.0 - 3.0 * q) / p))
}

/// The same kernel as printed in the quasidisc remark: exponent `2(p-1)/p`,
/// `4^{-1/p}` and no square root over the Gamma product, times
/// `pi^{-(beta+1)/(2 beta)}`.
fn ln_squared_kernel(q: f64, beta: Beta) -> f64 {
    let p = 2.0 - q;
    let b = beta.value();
    2.0 * (1.0 - q) / p * ((1.0 - q) / q).ln() - (b + 1.0) / (2.0 * b) * PI.ln() - 4f64.ln() / p
        - (ln_gamma(2.0 / p) + ln_gamma((4.0 - 3.0 * q) / p))
}

fn minimize_q<F>(f: F, q_max: f64, minimizer: &Minimizer) -> Minimum
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let (lo, hi) = q_range(q_max);
    minimizer.minimize(f, lo, hi)
}

fn check_area(area: f64) -> Result<()> {
    if area.is_finite() && area > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("area = {area} must be positive and finite")))
    }
}

/// Upper estimate of `B_{r,2}` for a domain of the given area.
pub fn poincare_constant_upper(r: f64, area: f64) -> Result<PoincareEstimate> {
    poincare_constant_upper_with(r, area, &Minimizer::default())
}

pub fn poincare_constant_upper_with(r: f64, area: f64, minimizer: &Minimizer) -> Result<PoincareEstimate> {
    if !(r.is_finite() && r >= 2.0) {
        return Err(Error::domain(format!("r = {r} must be finite and >= 2")));
    }
    check_area(area)?;
    let m = minimize_q(ln_sobolev_kernel, 4.0 / (r + 2.0), minimizer);
    Ok(PoincareEstimate { value: (m.value + area.ln() / r).exp(), p: 2.0 - m.arg, p_gap: m.arg })
}

/// Upper estimate of `A_{4 beta/(beta-1), 2}`.
pub fn stability_constant(beta: Beta, area: f64) -> Result<PoincareEstimate> {
    stability_constant_with(beta, area, &Minimizer::default())
}

pub fn stability_constant_with(beta: Beta, area: f64, minimizer: &Minimizer) -> Result<PoincareEstimate> {
    check_area(area)?;
    let e = beta.excess();
    let q_max = 2.0 * e / (2.0 + 3.0 * e);
    let m = minimize_q(ln_sobolev_kernel, q_max, minimizer);
    let area_exp = e / (4.0 * (1.0 + e));
    Ok(PoincareEstimate { value: (m.value + area_exp * area.ln()).exp(), p: 2.0 - m.arg, p_gap: m.arg })
}

fn check_k(k: f64) -> Result<()> {
    if k.is_finite() && k >= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("K = {k} must be finite and >= 1")))
    }
}

fn log10_nu_raw(e: f64, k: f64) -> f64 {
    let b = 1.0 + e;
    8.0 * b + (2.0 * e / (1.0 + 2.0 * e)).log10() + 2.0 * b * (24.0 * PI * PI * k * k).log10()
}

/// `nu(beta) = 10^{8 beta} (2 beta - 2)/(2 beta - 1) (24 pi^2 K^2)^{2 beta}`.
pub fn nu(beta: Beta, k: f64) -> Result<LogValue> {
    check_k(k)?;
    Ok(LogValue::from_log10(log10_nu_raw(beta.excess(), k)))
}

/// The root `beta~` of `nu(beta) = 1`.
pub fn beta_tilde(k: f64) -> Result<Beta> {
    check_k(k)?;
    // log10 nu is increasing in beta - 1; bisect geometrically since the root
    // sits many decades below 1.
    let g = |e: f64| log10_nu_raw(e, k);
    let (mut lo, mut hi) = (1e-300_f64, 3.0_f64);
    debug_assert!(g(lo) < 0.0 && g(hi) > 0.0);
    for _ in 0..400 {
        let mid = if hi / lo > 4.0 { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * hi {
            break;
        }
    }
    let root = if g(lo).abs() <= g(hi).abs() { lo } else { hi };
    Beta::from_excess(root)
}

/// `beta* = min(K/(K-1), beta~)`.
pub fn beta_star(k: f64) -> Result<Beta> {
    if !(k.is_finite() && k > 1.0) {
        return Err(Error::domain(format!(
            "K = {k}: beta* needs K > 1 (K/(K-1) is undefined at K = 1)"
        )));
    }
    let tilde = beta_tilde(k)?;
    Beta::from_excess(tilde.excess().min(1.0 / (k - 1.0)))
}

/// `C_beta = 10^6 / [(2 beta - 1)(1 - nu(beta))]^{1/(2 beta)}`.
pub fn c_beta(beta: Beta, k: f64) -> Result<LogValue> {
    let ln_nu = nu(beta, k)?.ln();
    if ln_nu >= 0.0 {
        return Err(Error::ConstantUndefined(format!(
            "C_beta needs nu(beta) < 1, i.e. beta < beta~; got beta - 1 = {:e}",
            beta.excess()
        )));
    }
    let e = beta.excess();
    let one_minus_nu = -ln_nu.exp_m1();
    let log10_base = (2.0 * e).ln_1p() / LN_10 + one_minus_nu.log10();
    Ok(LogValue::from_log10(6.0 - log10_base / (2.0 * (1.0 + e))))
}

/// `K^2 pi^2 (2 + pi^2)^2 / (4 ln 3)`, the natural log of the exponential
/// factor in `M_beta(K)`.
pub fn quasidisc_exponent(k: f64) -> f64 {
    let s = 2.0 + PI * PI;
    k * k * PI * PI * s * s / (4.0 * 3f64.ln())
}

/// Upper bound for `||J_{phi^{-1}} | L^beta(D)||` on a `K`-quasidisc.
pub fn jacobian_norm_bound(beta: Beta, k: f64, area: f64) -> Result<LogValue> {
    check_area(area)?;
    let c = c_beta(beta, k)?;
    let b = beta.value();
    let log10 = 2.0 * c.log10() + 2.0 * k.log10() + (-beta.excess() / b) * PI.log10() - 4f64.log10()
        + 2.0 * quasidisc_exponent(k) / LN_10
        + area.log10();
    Ok(LogValue::from_log10(log10))
}

/// `M_beta(K)` with its minimisers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuasidiscConstant {
    pub value: LogValue,
    pub beta_star_excess: f64,
    /// `beta - 1` at the outer infimum.
    pub beta_excess: f64,
    /// `p` at the inner infimum.
    pub p: f64,
    /// `2 - p` at the inner infimum.
    pub p_gap: f64,
}

/// Grid sizes used for the quasidisc constant.
#[derive(Debug, Clone, Copy)]
pub struct QuasidiscSolver {
    pub outer: Minimizer,
    pub inner: Minimizer,
}

impl Default for QuasidiscSolver {
    fn default() -> Self {
        Self {
            outer: Minimizer::default().with_grid(400),
            inner: Minimizer::default().with_grid(2_000),
        }
    }
}

/// Inner `p`-infimum of `M_beta(K)` (the printed squared kernel), as `(ln value, 2 - p)`.
fn m_inner(beta: Beta, minimizer: &Minimizer) -> (f64, f64) {
    let e = beta.excess();
    let m = minimize_q(|q| ln_squared_kernel(q, beta), 2.0 * e / (2.0 + 3.0 * e), minimizer);
    (m.value, m.arg)
}

/// log10 of the bracket `C_beta K pi^{(1-beta)/(2beta)}/2 exp{..} |Omega|^{1/2} + pi^{1/(2beta)}`.
fn m_bracket(beta: Beta, k: f64, area: f64) -> Result<LogValue> {
    let b = beta.value();
    let c = c_beta(beta, k)?;
    let big = LogValue::from_log10(
        c.log10() + k.log10() + (-beta.excess() / (2.0 * b)) * PI.log10() - 2f64.log10()
            + quasidisc_exponent(k) / LN_10
            + 0.5 * area.log10(),
    );
    Ok(big.add(LogValue::from_log10(PI.log10() / (2.0 * b))))
}

/// Objective of the outer infimum at a given `beta`, in log10.
pub fn m_beta_objective(beta: Beta, k: f64, area: f64) -> Result<LogValue> {
    let (ln_inner, _) = m_inner(beta, &QuasidiscSolver::default().inner);
    Ok(LogValue::from_log10(ln_inner / LN_10).mul(m_bracket(beta, k, area)?))
}

pub fn m_beta(k: f64, area: f64) -> Result<QuasidiscConstant> {
    m_beta_with(k, area, &QuasidiscSolver::default())
}

pub fn m_beta_with(k: f64, area: f64, solver: &QuasidiscSolver) -> Result<QuasidiscConstant> {
    check_area(area)?;
    let star = beta_star(k)?;
    let es = star.excess();
    let d = 1e-12 * es;
    let objective = |e: f64| -> f64 {
        let beta = Beta { excess: e };
        let (ln_inner, _) = m_inner(beta, &solver.inner);
        match m_bracket(beta, k, area) {
            Ok(b) => ln_inner / LN_10 + b.log10(),
            Err(_) => f64::INFINITY,
        }
    };
    let best = solver.outer.minimize(objective, d, es - d);
    if !best.value.is_finite() {
        return Err(Error::Numeric(format!("M_beta({k}) is not finite")));
    }
    let beta = Beta { excess: best.arg };
    let (_, q) = m_inner(beta, &solver.inner);
    Ok(QuasidiscConstant {
        value: LogValue::from_log10(best.value),
        beta_star_excess: es,
        beta_excess: best.arg,
        p: 2.0 - q,
        p_gap: q,
    })
}
