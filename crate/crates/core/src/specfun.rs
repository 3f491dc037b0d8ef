//! Bessel functions of the first kind of orders 0 and 1, the first positive
//! zero of `J0`, and the Gamma function on the positive axis.

use crate::error::{ensure_finite, Error, Result};

/// Below this magnitude the ascending series is used; above it, Miller's
/// backward recurrence. The largest series term at the seam is about 1e2, so
/// cancellation costs at most two digits.
const SERIES_LIMIT: f64 = 8.0;

/// First positive zero of `J0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselZero(f64);

impl BesselZero {
    pub fn value(self) -> f64 {
        self.0
    }

    /// `j0,1^2`, the first Dirichlet eigenvalue of the Laplacian on the unit disc.
    pub fn squared(self) -> f64 {
        self.0 * self.0
    }
}

pub fn bessel_j0(x: f64) -> Result<f64> {
    ensure_finite(x, "bessel_j0 argument")?;
    let ax = x.abs();
    Ok(if ax <= SERIES_LIMIT {
        j0_series(ax)
    } else {
        miller(ax).0
    })
}

pub fn bessel_j1(x: f64) -> Result<f64> {
    ensure_finite(x, "bessel_j1 argument")?;
    let ax = x.abs();
    let v = if ax <= SERIES_LIMIT {
        j1_series(ax)
    } else {
        miller(ax).1
    };
    Ok(if x < 0.0 { -v } else { v })
}

pub(crate) fn j0_series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..80 {
        let kf = k as f64;
        term *= q / (kf * kf);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

pub(crate) fn j1_series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 0.5 * x;
    let mut sum = term;
    for k in 1..80 {
        let kf = k as f64;
        term *= q / (kf * (kf + 1.0));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Miller's backward recurrence normalised by `J0 + 2 sum J_2k = 1`.
/// Returns `(J0(x), J1(x))` for `x > 0`.
pub(crate) fn miller(x: f64) -> (f64, f64) {
    let mut n = (x + 30.0 + (40.0 * x).sqrt()) as usize;
    n += n % 2;
    let mut above = 0.0; // j_{k+1}
    let mut current = 1e-30; // j_k, starting at k = n
    let mut even_sum = 2.0 * current; // n is even
    let mut j1 = 0.0;
    for k in (1..=n).rev() {
        let below = 2.0 * k as f64 / x * current - above;
        above = current;
        current = below;
        let idx = k - 1;
        if idx == 1 {
            j1 = current;
        }
        if idx > 0 && idx % 2 == 0 {
            even_sum += 2.0 * current;
        }
        if current.abs() > 1e200 {
            current *= 1e-200;
            above *= 1e-200;
            even_sum *= 1e-200;
            j1 *= 1e-200;
        }
    }
    let norm = current + even_sum;
    (current / norm, j1 / norm)
}

/// First positive zero of `J0`, bracketed in `[2, 3]` by bisection and
/// polished by Newton steps using `J0' = -J1`.
pub fn bessel_j0_first_zero() -> BesselZero {
    let (mut lo, mut hi) = (2.0_f64, 3.0_f64);
    let f = |x: f64| j0_series(x);
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if f(lo) * f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..8 {
        let step = j0_series(x) / j1_series(x);
        x += step;
        if step.abs() < 1e-16 * x {
            break;
        }
    }
    BesselZero(x)
}

/// Convenience: `j0,1^2 = lambda_1` of the unit disc.
pub fn disc_eigenvalue() -> f64 {
    bessel_j0_first_zero().squared()
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for `x > 0` (Lanczos, `g = 7`, with reflection below 1/2).
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(format!("gamma_fn requires finite x > 0, got {x}")));
    }
    Ok(gamma_positive(x))
}

pub(crate) fn gamma_positive(x: f64) -> f64 {
    use std::f64::consts::PI;
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_positive(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = LANCZOS_COEF[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}
