use std::collections::HashMap;

use spade::{ConstrainedDelaunayTriangulation, Point2, Triangulation};

use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::Point;

/// Smallest admissible signed triangle area.
pub const MIN_TRIANGLE_AREA: f64 = 1e-14;

const SMOOTHING_SWEEPS: usize = 4;
/// Lattice points closer than this fraction of the local size to the boundary are dropped.
const BOUNDARY_GAP: f64 = 0.45;
/// `(radius / h, size / h)` for the geometric grading toward a corner at the origin.
const CORNER_LAYERS: [(f64, f64); 3] = [(3.0, 0.5), (1.5, 0.25), (0.75, 0.125)];

/// A conforming triangulation with counter-clockwise triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    /// Whether each vertex lies on the domain boundary.
    pub boundary: Vec<bool>,
    /// Longest edge.
    pub h: f64,
    /// Boundary parameter of each boundary vertex (for projection on refinement).
    pub(crate) boundary_param: Vec<Option<f64>>,
}

impl Mesh {
    pub fn from_parts(vertices: Vec<[f64; 2]>, triangles: Vec<[usize; 3]>, boundary: Vec<bool>) -> Result<Self> {
        if boundary.len() != vertices.len() {
            return Err(Error::Mesh("boundary flags and vertices differ in length".into()));
        }
        if triangles.iter().flatten().any(|&i| i >= vertices.len()) {
            return Err(Error::Mesh("triangle references a missing vertex".into()));
        }
        let params = vec![None; vertices.len()];
        let mut mesh = Self { vertices, triangles, boundary, h: 0.0, boundary_param: params };
        mesh.orient()?;
        mesh.h = mesh.max_edge();
        Ok(mesh)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn signed_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t].map(|i| self.vertices[i]);
        0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.signed_area(t)).sum()
    }

    pub fn min_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.signed_area(t)).fold(f64::INFINITY, f64::min)
    }

    pub fn max_edge(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])])
            .map(|(i, j)| dist(self.vertices[i], self.vertices[j]))
            .fold(0.0, f64::max)
    }

    pub fn num_boundary(&self) -> usize {
        self.boundary.iter().filter(|&&b| b).count()
    }

    /// Copy with every vertex multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let mut m = self.clone();
        for v in &mut m.vertices {
            v[0] *= c;
            v[1] *= c;
        }
        m.h *= c;
        m.boundary_param = vec![None; m.vertices.len()];
        m
    }

    /// Edges with their number of incident triangles, in first-seen order.
    pub fn edges(&self) -> Vec<((usize, usize), usize)> {
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut out: Vec<((usize, usize), usize)> = Vec::new();
        for t in &self.triangles {
            for (i, j) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                let key = (i.min(j), i.max(j));
                match index.get(&key) {
                    Some(&k) => out[k].1 += 1,
                    None => {
                        index.insert(key, out.len());
                        out.push((key, 1));
                    }
                }
            }
        }
        out
    }

    /// Structural checks: positive areas, conforming edges, and boundary flags
    /// that match the edges with a single incident triangle.
    pub fn check(&self) -> Result<()> {
        let min = self.min_area();
        if !(min >= MIN_TRIANGLE_AREA) {
            return Err(Error::Mesh(format!("triangle with area {min:e}")));
        }
        let mut on_free_edge = vec![false; self.vertices.len()];
        for ((i, j), n) in self.edges() {
            match n {
                1 => {
                    on_free_edge[i] = true;
                    on_free_edge[j] = true;
                }
                2 => {}
                _ => return Err(Error::Mesh(format!("edge ({i}, {j}) shared by {n} triangles"))),
            }
        }
        if on_free_edge != self.boundary {
            return Err(Error::Mesh("boundary flags do not match the boundary edges".into()));
        }
        Ok(())
    }

    fn orient(&mut self) -> Result<()> {
        for t in 0..self.triangles.len() {
            if self.signed_area(t) < 0.0 {
                self.triangles[t].swap(1, 2);
            }
        }
        let min = self.min_area();
        if self.triangles.is_empty() || !(min >= MIN_TRIANGLE_AREA) {
            return Err(Error::Mesh(format!("degenerate triangle (area {min:e})")));
        }
        Ok(())
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Target element size at `z`.
fn size_at(domain: &Domain, h: f64, z: [f64; 2]) -> f64 {
    match domain {
        Domain::Petal => {
            let d = z[0].hypot(z[1]);
            CORNER_LAYERS
                .iter()
                .filter(|(r, _)| d < r * h)
                .map(|&(_, s)| s * h)
                .fold(h, f64::min)
        }
        _ => h,
    }
}

/// Boundary nodes as `(parameter, point)`, in boundary order.
fn boundary_nodes(domain: &Domain, h: f64) -> Vec<(f64, [f64; 2])> {
    let corners = domain.corner_parameters();
    if let Domain::Polygon { vertices } = domain {
        let n = vertices.len();
        let mut nodes = Vec::new();
        for (e, &t0) in corners.iter().enumerate() {
            let t1 = if e + 1 < n { corners[e + 1] } else { 1.0 };
            let (p, q) = (vertices[e], vertices[(e + 1) % n]);
            let pieces = (dist(p, q) / h).ceil().max(1.0) as usize;
            for j in 0..pieces {
                let s = j as f64 / pieces as f64;
                nodes.push((t0 + s * (t1 - t0), [p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])]));
            }
        }
        return nodes;
    }
    // equidistribute arc length measured in units of the local size
    const FINE: usize = 1 << 14;
    let pts: Vec<Point> = (0..=FINE).map(|i| domain.boundary_point(i as f64 / FINE as f64)).collect();
    let mut cum = vec![0.0; FINE + 1];
    for i in 0..FINE {
        let (a, b) = (pts[i], pts[(i + 1) % FINE]);
        let mid = 0.5 * (a + b);
        cum[i + 1] = cum[i] + (b - a).norm() / size_at(domain, h, [mid.re, mid.im]);
    }
    let count = cum[FINE].ceil().max(8.0) as usize;
    let mut nodes = Vec::with_capacity(count);
    let mut k = 0;
    for j in 0..count {
        let target = cum[FINE] * j as f64 / count as f64;
        while cum[k + 1] < target {
            k += 1;
        }
        let frac = if cum[k + 1] > cum[k] { (target - cum[k]) / (cum[k + 1] - cum[k]) } else { 0.0 };
        let t = (k as f64 + frac) / FINE as f64;
        let z = domain.boundary_point(t);
        nodes.push((t, [z.re, z.im]));
    }
    nodes
}

/// Triangular lattice points of spacing `s` inside the bounding box.
fn lattice(lo: [f64; 2], hi: [f64; 2], s: f64) -> impl Iterator<Item = [f64; 2]> {
    let dy = s * 3f64.sqrt() / 2.0;
    let rows = ((hi[1] - lo[1]) / dy).ceil() as usize + 1;
    let cols = ((hi[0] - lo[0]) / s).ceil() as usize + 2;
    (0..rows).flat_map(move |i| {
        let shift = if i % 2 == 1 { 0.5 * s } else { 0.0 };
        (0..cols).map(move |j| [lo[0] + shift + j as f64 * s - 0.5 * s, lo[1] + i as f64 * dy])
    })
}

fn interior_nodes(domain: &Domain, h: f64) -> Vec<[f64; 2]> {
    let (lo, hi) = domain.bounding_box();
    let mut sizes = vec![1.0];
    if matches!(domain, Domain::Petal) {
        sizes.extend(CORNER_LAYERS.iter().map(|&(_, s)| s));
    }
    let mut out = Vec::new();
    for s in sizes {
        let s = s * h;
        for p in lattice(lo, hi, s) {
            let z = Point::new(p[0], p[1]);
            if (size_at(domain, h, p) - s).abs() > 1e-12 * h || !domain.contains(z) {
                continue;
            }
            if domain.distance_to_boundary(z) > BOUNDARY_GAP * s {
                out.push(p);
            }
        }
    }
    out
}

/// Quasi-uniform triangulation with target size `h`; boundary vertices lie on
/// the exact boundary.
pub fn mesh_domain(domain: &Domain, h: f64) -> Result<Mesh> {
    domain.validate()?;
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::Mesh(format!("target size h = {h} must be positive")));
    }
    let rho = domain.inscribed_radius()?;
    if h >= rho {
        return Err(Error::Mesh(format!("target size h = {h} is not below the inscribed radius {rho}")));
    }
    let bnodes = boundary_nodes(domain, h);
    let inner = interior_nodes(domain, h);
    let nb = bnodes.len();
    let mut points: Vec<Point2<f64>> = bnodes.iter().map(|(_, p)| Point2::new(p[0], p[1])).collect();
    points.extend(inner.iter().map(|p| Point2::new(p[0], p[1])));
    let edges: Vec<[usize; 2]> = (0..nb).map(|i| [i, (i + 1) % nb]).collect();
    let total = points.len();
    let cdt = ConstrainedDelaunayTriangulation::<Point2<f64>>::bulk_load_cdt(points, edges)
        .map_err(|e| Error::Mesh(format!("triangulation failed: {e:?}")))?;
    if cdt.num_vertices() != total {
        return Err(Error::Mesh("duplicate mesh nodes".into()));
    }
    let vertices: Vec<[f64; 2]> = cdt.vertices().map(|v| [v.position().x, v.position().y]).collect();
    let mut triangles = Vec::new();
    for face in cdt.inner_faces() {
        let idx = face.vertices().map(|v| v.fix().index());
        let c = idx.iter().fold([0.0, 0.0], |acc, &i| [acc[0] + vertices[i][0] / 3.0, acc[1] + vertices[i][1] / 3.0]);
        if domain.contains(Point::new(c[0], c[1])) {
            triangles.push(idx);
        }
    }
    let boundary: Vec<bool> = (0..total).map(|i| i < nb).collect();
    let mut mesh = Mesh::from_parts(vertices, triangles, boundary)?;
    for (i, (t, _)) in bnodes.iter().enumerate() {
        mesh.boundary_param[i] = Some(*t);
    }
    smooth(&mut mesh);
    mesh.h = mesh.max_edge();
    mesh.check()?;
    Ok(mesh)
}

/// Laplacian smoothing of interior vertices; a sweep that would invert a
/// triangle is undone.
fn smooth(mesh: &mut Mesh) {
    let n = mesh.vertices.len();
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for ((i, j), _) in mesh.edges() {
        nbrs[i].push(j);
        nbrs[j].push(i);
    }
    for _ in 0..SMOOTHING_SWEEPS {
        let before = mesh.vertices.clone();
        for v in 0..n {
            if mesh.boundary[v] || nbrs[v].is_empty() {
                continue;
            }
            let k = nbrs[v].len() as f64;
            let s = nbrs[v].iter().fold([0.0, 0.0], |a, &j| [a[0] + before[j][0], a[1] + before[j][1]]);
            mesh.vertices[v] = [s[0] / k, s[1] / k];
        }
        if mesh.min_area() < MIN_TRIANGLE_AREA {
            mesh.vertices = before;
            break;
        }
    }
}

/// Midpoint of two periodic parameters along the shorter arc.
fn circular_mid(a: f64, b: f64) -> f64 {
    let mut d = (b - a).rem_euclid(1.0);
    if d > 0.5 {
        d -= 1.0;
    }
    (a + 0.5 * d).rem_euclid(1.0)
}

/// Splits every triangle into four; new boundary vertices are placed on the
/// exact boundary of `domain`.
pub fn refine(mesh: &Mesh, domain: &Domain) -> Result<Mesh> {
    let free: HashMap<(usize, usize), bool> = mesh.edges().into_iter().map(|(e, n)| (e, n == 1)).collect();
    let mut vertices = mesh.vertices.clone();
    let mut boundary = mesh.boundary.clone();
    let mut params = mesh.boundary_param.clone();
    let mut mids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut triangles = Vec::with_capacity(4 * mesh.triangles.len());
    for t in &mesh.triangles {
        let mut m = [0usize; 3];
        for (k, (i, j)) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])].into_iter().enumerate() {
            let key = (i.min(j), i.max(j));
            m[k] = *mids.entry(key).or_insert_with(|| {
                let (a, b) = (mesh.vertices[i], mesh.vertices[j]);
                let mut p = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
                let mut param = None;
                let on_boundary = free[&key];
                if on_boundary {
                    if let (Some(ta), Some(tb)) = (mesh.boundary_param[i], mesh.boundary_param[j]) {
                        let tm = circular_mid(ta, tb);
                        let z = domain.boundary_point(tm);
                        p = [z.re, z.im];
                        param = Some(tm);
                    }
                }
                vertices.push(p);
                boundary.push(on_boundary);
                params.push(param);
                vertices.len() - 1
            });
        }
        let [a, b, c] = *t;
        let [ab, bc, ca] = m;
        triangles.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
    }
    let mut out = Mesh { vertices, triangles, boundary, h: 0.0, boundary_param: params };
    out.h = out.max_edge();
    let min = out.min_area();
    if !(min >= MIN_TRIANGLE_AREA) {
        return Err(Error::Mesh(format!("refinement produced a triangle of area {min:e}")));
    }
    Ok(out)
}

/// `levels` nested meshes starting from size `h`.
pub fn nested_meshes(domain: &Domain, h: f64, levels: usize) -> Result<Vec<Mesh>> {
    let mut out = Vec::with_capacity(levels);
    if levels == 0 {
        return Ok(out);
    }
    out.push(mesh_domain(domain, h)?);
    for _ in 1..levels {
        let next = refine(out.last().expect("nonempty"), domain)?;
        out.push(next);
    }
    Ok(out)
}
