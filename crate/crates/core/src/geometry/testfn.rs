use serde::{Deserialize, Serialize};

use crate::Point;

/// Radial test functions on the unit disc vanishing on the unit circle,
/// extended by zero outside. `Zero` is the trivial function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFunction {
    /// `(1 - |w|^2)^2`
    QuarticBump,
    /// `cos(pi |w|^2 / 2)`
    CosineBump,
    /// `(1 - |w|^2)^3`
    CubicBump,
    Zero,
}

impl TestFunction {
    /// The three non-trivial bumps.
    pub const CATALOG: [TestFunction; 3] = [
        TestFunction::QuarticBump,
        TestFunction::CosineBump,
        TestFunction::CubicBump,
    ];

    /// Profile `g(s)` and derivative `g'(s)` in `s = |w|^2`, for `s <= 1`.
    fn profile(self, s: f64) -> (f64, f64) {
        use std::f64::consts::FRAC_PI_2;
        match self {
            TestFunction::QuarticBump => ((1.0 - s).powi(2), -2.0 * (1.0 - s)),
            TestFunction::CosineBump => ((FRAC_PI_2 * s).cos(), -FRAC_PI_2 * (FRAC_PI_2 * s).sin()),
            TestFunction::CubicBump => ((1.0 - s).powi(3), -3.0 * (1.0 - s).powi(2)),
            TestFunction::Zero => (0.0, 0.0),
        }
    }

    pub fn value(self, w: Point) -> f64 {
        let s = w.norm_sqr();
        if s >= 1.0 {
            0.0
        } else {
            self.profile(s).0
        }
    }

    pub fn gradient(self, w: Point) -> [f64; 2] {
        let s = w.norm_sqr();
        if s >= 1.0 {
            return [0.0, 0.0];
        }
        let d = 2.0 * self.profile(s).1;
        [d * w.re, d * w.im]
    }

    pub fn name(self) -> &'static str {
        match self {
            TestFunction::QuarticBump => "quartic_bump",
            TestFunction::CosineBump => "cosine_bump",
            TestFunction::CubicBump => "cubic_bump",
            TestFunction::Zero => "zero",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradients_match_finite_differences() {
        let h = 1e-6;
        for f in TestFunction::CATALOG {
            for &(x, y) in &[(0.1, 0.2), (-0.5, 0.3), (0.0, -0.9)] {
                let w = Point::new(x, y);
                let g = f.gradient(w);
                let gx = (f.value(w + h) - f.value(w - h)) / (2.0 * h);
                let gy = (f.value(w + Point::new(0.0, h)) - f.value(w - Point::new(0.0, h))) / (2.0 * h);
                assert!((g[0] - gx).abs() < 1e-7 && (g[1] - gy).abs() < 1e-7, "{f:?}");
            }
            assert_eq!(f.value(Point::new(1.0, 0.0)), 0.0);
        }
    }
}
