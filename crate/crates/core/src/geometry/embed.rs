use super::{CentralFace, GeometryError, LinkageFrame, V3};

/// Triangulated 3x3 mesh: the central face, four side faces split into two
/// triangles each, and four corner triangles.
///
/// Vertices are `P_0..P_3`, then the outer ends `A_0..A_3` of the edges along
/// `V3`, then the outer ends `B_0..B_3` of the edges along `-V2`.
#[derive(Clone, Debug)]
pub struct Mesh3D {
    pub vertices: Vec<V3>,
    pub triangles: Vec<[usize; 3]>,
    /// Every distance that a rigid placement of the faces preserves.
    pub edges: Vec<(usize, usize)>,
}

const fn p(k: usize) -> usize {
    k % 4
}
const fn a(k: usize) -> usize {
    4 + k % 4
}
const fn b(k: usize) -> usize {
    8 + k % 4
}

fn topology() -> (Vec<[usize; 3]>, Vec<(usize, usize)>) {
    let mut tris = vec![[p(0), p(1), p(2)], [p(0), p(2), p(3)]];
    let mut edges = vec![(p(0), p(2)), (p(1), p(3))];
    for k in 0..4 {
        tris.push([p(k + 1), p(k), b(k)]);
        tris.push([p(k + 1), b(k), a(k + 1)]);
        tris.push([b(k), p(k), a(k)]);
        edges.extend([
            (p(k), p(k + 1)),
            (b(k), a(k + 1)),
            (p(k + 1), b(k)),
            (p(k), a(k + 1)),
            (p(k), a(k)),
            (p(k), b(k)),
            (a(k), b(k)),
        ]);
    }
    (tris, edges)
}

/// Places the frame around the fixed central face with outer edges of
/// length `outer`. The frame must close to within `1e-6`.
pub fn embed_mesh(face: &CentralFace, frame: &LinkageFrame, outer: f64) -> Result<Mesh3D, GeometryError> {
    if !(frame.residual < 1e-6) {
        return Err(GeometryError::InfeasibleEmbedding(format!("frame does not close (residual {:.3e})", frame.residual)));
    }
    let mut vertices = vec![V3::zeros(); 12];
    for k in 0..4 {
        let [_, _, v2, v3] = frame.quads[k];
        vertices[p(k)] = face.points[k];
        vertices[a(k)] = face.points[k] + v3 * outer;
        vertices[b(k)] = face.points[k] - v2 * outer;
    }
    let (triangles, edges) = topology();
    Ok(Mesh3D { vertices, triangles, edges })
}

impl Mesh3D {
    pub fn edge_lengths(&self) -> Vec<f64> {
        self.edges.iter().map(|&(i, j)| (self.vertices[i] - self.vertices[j]).norm()).collect()
    }

    /// Largest change of any rigid distance relative to `other`.
    pub fn length_drift(&self, other: &Mesh3D) -> f64 {
        self.edge_lengths()
            .iter()
            .zip(other.edge_lengths())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{sweep, Branch, Choice};
    use super::*;
    use crate::bricard::MeshCoeffs;
    use crate::verify::alpha_grid;
    use std::collections::HashMap;

    #[test]
    fn thirty_distinct_edges() {
        let (_, edges) = topology();
        let mut seen: Vec<(usize, usize)> = edges.iter().map(|&(i, j)| (i.min(j), i.max(j))).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 30);
    }

    #[test]
    fn triangles_are_consistently_oriented() {
        let (tris, _) = topology();
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &tris {
            for i in 0..3 {
                *directed.entry((t[i], t[(i + 1) % 3])).or_default() += 1;
            }
        }
        assert_eq!(tris.len(), 14);
        assert!(directed.values().all(|&n| n == 1));
    }

    #[test]
    fn interior_angles_complement_lambda() {
        let m = crate::construct::isogonal(&crate::construct::Seed::new(3)).unwrap().mesh;
        let (_, _, face) = CentralFace::search(&m, 64).unwrap();
        let pts = face.points;
        for k in 0..4 {
            let (u, w) = (pts[(k + 3) % 4] - pts[k], pts[(k + 1) % 4] - pts[k]);
            assert!((u.angle(&w) + face.lambda[k] - std::f64::consts::PI).abs() < 1e-9);
        }
        let sum: V3 = (0..4).map(|k| face.dirs[k] * face.len[k]).sum();
        assert!(sum.norm() < 1e-10);
    }

    #[test]
    fn symmetric_flexion_is_isometric() {
        let m = MeshCoeffs::symmetric();
        let face = CentralFace::for_mesh(&m, 0.0, Branch::Plus).unwrap();
        let frames = sweep(&m, &face, &alpha_grid(50), &Choice::Index(0));
        let meshes: Vec<Mesh3D> = frames.iter().map(|f| embed_mesh(&face, f.as_ref().unwrap(), 0.5).unwrap()).collect();
        for mm in &meshes[1..] {
            assert!(mm.length_drift(&meshes[0]) < 1e-7);
        }
    }
}
