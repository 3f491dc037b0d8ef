use std::fmt::Write;

use super::mesh::Mesh;
use super::solve::EigenResult;

/// Plain-text mesh: `"V T"`, then `x y flag` per vertex, then `i j k` per triangle.
pub fn mesh_to_text(mesh: &Mesh) -> String {
    let mut s = String::new();
    writeln!(s, "{} {}", mesh.num_vertices(), mesh.num_triangles()).expect("write to string");
    for (v, &b) in mesh.vertices.iter().zip(&mesh.boundary) {
        writeln!(s, "{:.17e} {:.17e} {}", v[0], v[1], u8::from(b)).expect("write to string");
    }
    for t in &mesh.triangles {
        writeln!(s, "{} {} {}", t[0], t[1], t[2]).expect("write to string");
    }
    s
}

/// Convergence table with columns `h, lambda1, extrapolated, error_estimate`.
pub fn convergence_csv(result: &EigenResult) -> String {
    let mut s = String::from("h,lambda1,extrapolated,error_estimate\n");
    for m in &result.meshes {
        writeln!(s, "{:.12e},{:.12e},{:.12e},{:.12e}", m.h, m.lambda1(), result.extrapolated, result.error_estimate)
            .expect("write to string");
    }
    s
}
