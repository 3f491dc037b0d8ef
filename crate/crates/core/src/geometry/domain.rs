use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::optimize::golden_section;
use crate::quadrature::{adaptive, StarRegion};
use crate::Point;

/// A bounded simply connected planar domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Domain {
    /// Disc of the given radius centred at the origin.
    Disc { radius: f64 },
    /// Ellipse with semi-axes `sqrt(a^2+1) + a` (along x) and
    /// `sqrt(a^2+1) - a` (along y); its area is always `pi`.
    Ellipse { a: f64 },
    /// `{ rho <= 2 sqrt(2) cos(2 theta), |theta| <= pi/4 }`, with a right-angle
    /// corner at the origin.
    Petal,
    /// Simple polygon, vertices in order (either orientation).
    Polygon { vertices: Vec<[f64; 2]> },
}

fn petal_radius(theta: f64) -> f64 {
    2.0 * SQRT_2 * (2.0 * theta).cos()
}

impl Domain {
    pub fn unit_disc() -> Self {
        Domain::Disc { radius: 1.0 }
    }

    pub fn unit_square() -> Self {
        Domain::Polygon {
            vertices: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Domain::Disc { .. } => "disc",
            Domain::Ellipse { .. } => "ellipse",
            Domain::Petal => "petal",
            Domain::Polygon { .. } => "polygon",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Domain::Disc { radius } if !(radius.is_finite() && *radius > 0.0) => {
                Err(Error::InvalidDomain(format!("disc radius {radius} must be positive")))
            }
            Domain::Ellipse { a } if !(a.is_finite() && *a >= 0.0) => {
                Err(Error::InvalidDomain(format!("ellipse parameter a = {a} must be >= 0")))
            }
            Domain::Polygon { vertices } => validate_polygon(vertices),
            _ => Ok(()),
        }
    }

    /// Semi-axes `(along x, along y)` of an ellipse domain.
    pub fn ellipse_axes(a: f64) -> (f64, f64) {
        let major = (a * a + 1.0).sqrt() + a;
        (major, 1.0 / major)
    }

    pub fn area(&self) -> Result<f64> {
        self.validate()?;
        match self {
            Domain::Disc { radius } => Ok(PI * radius * radius),
            Domain::Ellipse { a } => {
                let (p, q) = Self::ellipse_axes(*a);
                Ok(PI * p * q)
            }
            Domain::Petal => adaptive(|t| 0.5 * petal_radius(t).powi(2), -FRAC_PI_4, FRAC_PI_4, 1e-13),
            Domain::Polygon { vertices } => Ok(signed_area(vertices).abs()),
        }
    }

    pub fn perimeter(&self) -> Result<f64> {
        self.validate()?;
        match self {
            Domain::Disc { radius } => Ok(2.0 * PI * radius),
            Domain::Ellipse { a } => {
                let (p, q) = Self::ellipse_axes(*a);
                let quarter = adaptive(|t| (p * t.sin()).hypot(q * t.cos()), 0.0, FRAC_PI_2, 1e-12)?;
                Ok(4.0 * quarter)
            }
            Domain::Petal => {
                let speed = |t: f64| {
                    let r = petal_radius(t);
                    let dr = -4.0 * SQRT_2 * (2.0 * t).sin();
                    r.hypot(dr)
                };
                adaptive(speed, -FRAC_PI_4, FRAC_PI_4, 1e-12)
            }
            Domain::Polygon { vertices } => Ok(polygon_edges(vertices).map(|(p, q)| dist(p, q)).sum()),
        }
    }

    /// Radius of the largest inscribed disc. Closed form for discs and
    /// ellipses; a grid search refined by a compass search otherwise.
    pub fn inscribed_radius(&self) -> Result<f64> {
        self.inscribed_disc(Execution::default()).map(|(_, r)| r)
    }

    /// Centre and radius of a largest inscribed disc.
    pub fn inscribed_disc(&self, exec: Execution) -> Result<(Point, f64)> {
        self.validate()?;
        match self {
            Domain::Disc { radius } => Ok((Point::new(0.0, 0.0), *radius)),
            Domain::Ellipse { a } => Ok((Point::new(0.0, 0.0), Self::ellipse_axes(*a).1)),
            _ => Ok(self.search_inscribed(exec)),
        }
    }

    fn search_inscribed(&self, exec: Execution) -> (Point, f64) {
        const N: usize = 48;
        let ([x0, y0], [x1, y1]) = self.bounding_box();
        let (dx, dy) = ((x1 - x0) / N as f64, (y1 - y0) / N as f64);
        let depth = |z: Point| if self.contains(z) { self.distance_to_boundary(z) } else { -1.0 };
        let grid = exec.map_range((N + 1) * (N + 1), |k| {
            let z = Point::new(x0 + (k % (N + 1)) as f64 * dx, y0 + (k / (N + 1)) as f64 * dy);
            (z, depth(z))
        });
        let mut seeds: Vec<(Point, f64)> = grid.into_iter().filter(|s| s.1 > 0.0).collect();
        seeds.sort_by(|a, b| b.1.total_cmp(&a.1));
        seeds.truncate(6);
        let refined = exec.map_slice(&seeds, |&(z, d)| compass_search(&depth, z, d, dx.max(dy)));
        refined
            .into_iter()
            .fold((Point::new(0.0, 0.0), f64::NEG_INFINITY), |best, c| if c.1 > best.1 { c } else { best })
    }

    pub fn bounding_box(&self) -> ([f64; 2], [f64; 2]) {
        match self {
            Domain::Disc { radius } => ([-radius, -radius], [*radius, *radius]),
            Domain::Ellipse { a } => {
                let (p, q) = Self::ellipse_axes(*a);
                ([-p, -q], [p, q])
            }
            // |y| on the petal peaks near 0.77
            Domain::Petal => ([0.0, -1.1], [2.0 * SQRT_2, 1.1]),
            Domain::Polygon { vertices } => {
                let mut lo = [f64::INFINITY; 2];
                let mut hi = [f64::NEG_INFINITY; 2];
                for v in vertices {
                    for i in 0..2 {
                        lo[i] = lo[i].min(v[i]);
                        hi[i] = hi[i].max(v[i]);
                    }
                }
                (lo, hi)
            }
        }
    }

    /// Closed-domain membership.
    pub fn contains(&self, z: Point) -> bool {
        self.contains_with_slack(z, 0.0)
    }

    pub(crate) fn contains_with_slack(&self, z: Point, slack: f64) -> bool {
        match self {
            Domain::Disc { radius } => z.norm() <= radius * (1.0 + slack),
            Domain::Ellipse { a } => {
                let (p, q) = Self::ellipse_axes(*a);
                (z.re / p).powi(2) + (z.im / q).powi(2) <= (1.0 + slack).powi(2)
            }
            Domain::Petal => {
                let r = z.norm();
                if r <= slack {
                    return true;
                }
                let t = z.arg();
                t.abs() <= FRAC_PI_4 && r <= petal_radius(t) * (1.0 + slack) + slack
            }
            Domain::Polygon { vertices } => {
                point_in_polygon(vertices, [z.re, z.im]) || (slack > 0.0 && self.distance_to_boundary(z) <= slack)
            }
        }
    }

    /// Boundary point at periodic parameter `t` in `[0, 1)`.
    pub fn boundary_point(&self, t: f64) -> Point {
        let t = t.rem_euclid(1.0);
        match self {
            Domain::Disc { radius } => Point::from_polar(*radius, 2.0 * PI * t),
            Domain::Ellipse { a } => {
                let (p, q) = Self::ellipse_axes(*a);
                let s = 2.0 * PI * t;
                Point::new(p * s.cos(), q * s.sin())
            }
            Domain::Petal => {
                let theta = -FRAC_PI_4 + t * FRAC_PI_2;
                if t == 0.0 {
                    Point::new(0.0, 0.0)
                } else {
                    Point::from_polar(petal_radius(theta), theta)
                }
            }
            Domain::Polygon { vertices } => {
                let total: f64 = polygon_edges(vertices).map(|(p, q)| dist(p, q)).sum();
                let mut target = t * total;
                for (p, q) in polygon_edges(vertices) {
                    let len = dist(p, q);
                    if target <= len {
                        let s = target / len;
                        return Point::new(p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1]));
                    }
                    target -= len;
                }
                Point::new(vertices[0][0], vertices[0][1])
            }
        }
    }

    /// Parameters of polygon corners (which meshing must keep as vertices).
    pub(crate) fn corner_parameters(&self) -> Vec<f64> {
        match self {
            Domain::Petal => vec![0.0],
            Domain::Polygon { vertices } => {
                let total: f64 = polygon_edges(vertices).map(|(p, q)| dist(p, q)).sum();
                let mut acc = 0.0;
                let mut out = Vec::with_capacity(vertices.len());
                for (p, q) in polygon_edges(vertices) {
                    out.push(acc / total);
                    acc += dist(p, q);
                }
                out
            }
            _ => Vec::new(),
        }
    }

    /// Euclidean distance from an interior point to the boundary.
    pub fn distance_to_boundary(&self, z: Point) -> f64 {
        match self {
            Domain::Disc { radius } => (radius - z.norm()).abs(),
            Domain::Polygon { vertices } => polygon_edges(vertices)
                .map(|(p, q)| segment_distance([z.re, z.im], p, q))
                .fold(f64::INFINITY, f64::min),
            _ => {
                const SAMPLES: usize = 2048;
                let d = |t: f64| (self.boundary_point(t) - z).norm();
                let (mut best_i, mut best) = (0, f64::INFINITY);
                for i in 0..SAMPLES {
                    let v = d(i as f64 / SAMPLES as f64);
                    if v < best {
                        best = v;
                        best_i = i;
                    }
                }
                let h = 1.0 / SAMPLES as f64;
                let c = best_i as f64 * h;
                let m = golden_section(d, c - h, c + h, 1e-13);
                m.value.min(best)
            }
        }
    }

    /// Star-shaped view about the origin, for polar quadrature.
    pub fn as_star(&self) -> Result<DomainStar<'_>> {
        self.validate()?;
        match self {
            Domain::Polygon { .. } => Err(Error::InvalidDomain(
                "polygon domains have no polar description".into(),
            )),
            _ => Ok(DomainStar { domain: self }),
        }
    }

    /// `n` deterministic quasi-random interior points (Halton bases 2 and 3).
    pub fn sample_points(&self, n: usize, seed: u64, exclude_origin: bool) -> Vec<Point> {
        let ([x0, y0], [x1, y1]) = self.bounding_box();
        let mut out = Vec::with_capacity(n);
        let mut index = 1 + seed.wrapping_mul(7919) % 1_000_000;
        while out.len() < n {
            let z = Point::new(x0 + (x1 - x0) * halton(index, 2), y0 + (y1 - y0) * halton(index, 3));
            index += 1;
            if exclude_origin && z.norm() < 1e-9 {
                continue;
            }
            if self.contains(z) && self.distance_to_boundary(z) > 0.0 {
                out.push(z);
            }
        }
        out
    }
}

/// Polar description of a star-shaped domain.
#[derive(Debug, Clone, Copy)]
pub struct DomainStar<'a> {
    domain: &'a Domain,
}

impl StarRegion for DomainStar<'_> {
    fn angular_range(&self) -> (f64, f64) {
        match self.domain {
            Domain::Petal => (-FRAC_PI_4, FRAC_PI_4),
            _ => (-PI, PI),
        }
    }

    fn radial_extent(&self, theta: f64) -> f64 {
        match self.domain {
            Domain::Disc { radius } => *radius,
            Domain::Ellipse { a } => {
                let (p, q) = Domain::ellipse_axes(*a);
                1.0 / ((theta.cos() / p).powi(2) + (theta.sin() / q).powi(2)).sqrt()
            }
            Domain::Petal => petal_radius(theta).max(0.0),
            Domain::Polygon { .. } => unreachable!("rejected by as_star"),
        }
    }
}

fn halton(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

fn compass_search<F: Fn(Point) -> f64>(f: &F, mut z: Point, mut best: f64, mut step: f64) -> (Point, f64) {
    use std::f64::consts::FRAC_1_SQRT_2 as D;
    const DIRS: [(f64, f64); 8] = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (D, D), (-D, D), (D, -D), (-D, -D)];
    while step > 1e-10 {
        let mut moved = false;
        for (dx, dy) in DIRS {
            let c = z + Point::new(dx * step, dy * step);
            let v = f(c);
            if v > best {
                best = v;
                z = c;
                moved = true;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    (z, best)
}

fn dist(p: [f64; 2], q: [f64; 2]) -> f64 {
    (p[0] - q[0]).hypot(p[1] - q[1])
}

fn polygon_edges(v: &[[f64; 2]]) -> impl Iterator<Item = ([f64; 2], [f64; 2])> + '_ {
    (0..v.len()).map(move |i| (v[i], v[(i + 1) % v.len()]))
}

fn signed_area(v: &[[f64; 2]]) -> f64 {
    0.5 * polygon_edges(v).map(|(p, q)| p[0] * q[1] - q[0] * p[1]).sum::<f64>()
}

fn segment_distance(z: [f64; 2], p: [f64; 2], q: [f64; 2]) -> f64 {
    let d = [q[0] - p[0], q[1] - p[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 > 0.0 {
        (((z[0] - p[0]) * d[0] + (z[1] - p[1]) * d[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    dist(z, [p[0] + t * d[0], p[1] + t * d[1]])
}

pub(crate) fn point_in_polygon(v: &[[f64; 2]], z: [f64; 2]) -> bool {
    let mut inside = false;
    for (p, q) in polygon_edges(v) {
        if segment_distance(z, p, q) == 0.0 {
            return true;
        }
        if (p[1] > z[1]) != (q[1] > z[1]) {
            let x = p[0] + (z[1] - p[1]) / (q[1] - p[1]) * (q[0] - p[0]);
            if z[0] < x {
                inside = !inside;
            }
        }
    }
    inside
}

fn validate_polygon(v: &[[f64; 2]]) -> Result<()> {
    if v.len() < 3 {
        return Err(Error::InvalidDomain("polygon needs at least 3 vertices".into()));
    }
    if v.iter().flatten().any(|c| !c.is_finite()) {
        return Err(Error::InvalidDomain("polygon vertex is not finite".into()));
    }
    let area = signed_area(v).abs();
    let scale: f64 = polygon_edges(v).map(|(p, q)| dist(p, q)).sum();
    if area <= 1e-12 * scale * scale {
        return Err(Error::InvalidDomain(format!("degenerate polygon (area {area})")));
    }
    let n = v.len();
    for i in 0..n {
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_cross(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]) {
                return Err(Error::InvalidDomain("polygon edges intersect".into()));
            }
        }
    }
    Ok(())
}

fn segments_cross(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let orient = |p: [f64; 2], q: [f64; 2], r: [f64; 2]| (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}
