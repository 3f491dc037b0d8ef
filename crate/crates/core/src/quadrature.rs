//! Gauss-Legendre rules, adaptive bisection quadrature, and product rules over
//! star-shaped planar regions in polar coordinates.

use crate::error::{Error, Result};
use crate::exec::Execution;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, w * half))
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, dp)
}

/// Adaptive bisection with a fixed Gauss-Legendre rule; a panel is accepted
/// when its value agrees with the sum over its two halves.
pub fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    let rule = GaussLegendre::new(10);
    let whole = rule.integrate(a, b, &f);
    let scale = whole.abs().max(f64::MIN_POSITIVE);
    let mut stack = vec![(a, b, whole, 0usize)];
    let mut total = 0.0;
    let mut evaluations = 0usize;
    while let Some((lo, hi, value, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = rule.integrate(lo, mid, &f);
        let right = rule.integrate(mid, hi, &f);
        evaluations += 1;
        let refined = left + right;
        let width_share = (hi - lo) / (b - a);
        if (refined - value).abs() <= rel_tol * scale * width_share || depth >= 40 {
            total += refined;
        } else if evaluations > 200_000 {
            return Err(Error::Numeric("adaptive quadrature did not converge".into()));
        } else {
            stack.push((mid, hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
    }
    if total.is_finite() {
        Ok(total)
    } else {
        Err(Error::Numeric("adaptive quadrature produced a non-finite value".into()))
    }
}

/// Resolution of a polar product rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolarRule {
    pub angular_panels: usize,
    pub radial_panels: usize,
    /// Gauss-Legendre nodes per panel in each direction.
    pub order: usize,
}

impl Default for PolarRule {
    fn default() -> Self {
        Self {
            angular_panels: 64,
            radial_panels: 12,
            order: 8,
        }
    }
}

impl PolarRule {
    pub fn with_order(order: usize) -> Self {
        Self {
            order,
            ..Self::default()
        }
    }
}

/// A region `{ (r, t) : t0 <= t <= t1, 0 <= r <= r_max(t) }` around the origin.
pub trait StarRegion: Sync {
    fn angular_range(&self) -> (f64, f64);
    fn radial_extent(&self, theta: f64) -> f64;
}

/// Integral of `f(x, y)` over a star region; each angular panel is reduced on
/// its own and the panel sums are added in panel order.
pub fn integrate_star<R, F>(region: &R, rule: PolarRule, exec: Execution, f: F) -> Result<f64>
where
    R: StarRegion + ?Sized,
    F: Fn(f64, f64) -> Result<f64> + Sync + Send,
{
    let gl = GaussLegendre::new(rule.order);
    let (t0, t1) = region.angular_range();
    let dt = (t1 - t0) / rule.angular_panels as f64;
    let panels = exec.try_map_range(rule.angular_panels, |k| -> Result<f64> {
        let a = t0 + k as f64 * dt;
        let mut acc = 0.0;
        for (theta, wt) in gl.mapped(a, a + dt) {
            let rmax = region.radial_extent(theta);
            let (c, s) = (theta.cos(), theta.sin());
            let dr = rmax / rule.radial_panels as f64;
            let mut inner = 0.0;
            for j in 0..rule.radial_panels {
                let r0 = j as f64 * dr;
                for (r, wr) in gl.mapped(r0, r0 + dr) {
                    inner += wr * r * f(r * c, r * s)?;
                }
            }
            acc += wt * inner;
        }
        Ok(acc)
    })?;
    let total: f64 = panels.into_iter().sum();
    if total.is_finite() {
        Ok(total)
    } else {
        Err(Error::Numeric("polar quadrature produced a non-finite value".into()))
    }
}

/// The unit disc as a star region.
#[derive(Debug, Clone, Copy)]
pub struct UnitDisc;

impl StarRegion for UnitDisc {
    fn angular_range(&self) -> (f64, f64) {
        (-std::f64::consts::PI, std::f64::consts::PI)
    }

    fn radial_extent(&self, _theta: f64) -> f64 {
        1.0
    }
}
