//! One-dimensional minimisation over closed intervals: golden-section search,
//! uniform grid scans, and the combination of both used by the constant
//! evaluators.

use crate::exec::Execution;

/// Location and value of a minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub arg: f64,
    pub value: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search on `[lo, hi]`, stopping when the bracket is below
/// `rel_tol` relative to the current point. The best point ever evaluated is
/// returned, endpoints included.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, rel_tol: f64) -> Minimum {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = [Minimum { arg: lo, value: f(lo) }, Minimum { arg: hi, value: f(hi) }]
        .into_iter()
        .fold(Minimum { arg: c, value: fc }, pick);
    best = pick(best, Minimum { arg: d, value: fd });
    for _ in 0..500 {
        if (b - a) <= rel_tol * c.abs().max(d.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            best = pick(best, Minimum { arg: c, value: fc });
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            best = pick(best, Minimum { arg: d, value: fd });
        }
    }
    best
}

fn pick(a: Minimum, b: Minimum) -> Minimum {
    // NaN never wins
    if b.value < a.value || a.value.is_nan() {
        b
    } else {
        a
    }
}

/// Uniform scan with `points >= 2` nodes including both endpoints. Ties go to
/// the smaller index.
pub fn grid_scan<F>(f: F, lo: f64, hi: f64, points: usize, exec: Execution) -> (usize, Minimum)
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    assert!(points >= 2);
    let step = (hi - lo) / (points - 1) as f64;
    let at = |i: usize| if i == points - 1 { hi } else { lo + i as f64 * step };
    let values = exec.map_range(points, |i| f(at(i)));
    let (idx, value) = values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NAN), |(bi, bv), (i, v)| {
            if v < bv || bv.is_nan() {
                (i, v)
            } else {
                (bi, bv)
            }
        });
    (idx, Minimum { arg: at(idx), value })
}

/// Settings for [`minimize`].
#[derive(Debug, Clone, Copy)]
pub struct Minimizer {
    pub grid_points: usize,
    pub rel_tol: f64,
    pub exec: Execution,
}

impl Default for Minimizer {
    fn default() -> Self {
        Self {
            grid_points: 10_000,
            rel_tol: 1e-10,
            exec: Execution::default(),
        }
    }
}

impl Minimizer {
    pub fn with_grid(mut self, grid_points: usize) -> Self {
        self.grid_points = grid_points;
        self
    }

    pub fn with_exec(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    /// Grid scan to locate the basin, then golden-section inside the two grid
    /// cells around the best node. Unimodality is not assumed; if the polish
    /// does not improve on the grid, the grid point is kept.
    pub fn minimize<F>(&self, f: F, lo: f64, hi: f64) -> Minimum
    where
        F: Fn(f64) -> f64 + Sync + Send,
    {
        let n = self.grid_points.max(3);
        let (idx, grid_best) = grid_scan(&f, lo, hi, n, self.exec);
        let step = (hi - lo) / (n - 1) as f64;
        let a = if idx == 0 { lo } else { lo + (idx - 1) as f64 * step };
        let b = if idx + 1 >= n - 1 { hi } else { lo + (idx + 1) as f64 * step };
        let polished = golden_section(&f, a, b, self.rel_tol);
        if polished.value < grid_best.value {
            polished
        } else {
            grid_best
        }
    }
}
