//! Conforming triangular meshes, uniform refinement and point location.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Result, SchwarzError};

/// A conforming P1 triangulation with per-vertex Dirichlet markers.
///
/// Triangles are stored counter-clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    vertices: Vec<[f64; 2]>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<bool>,
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn signed_area(p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> f64 {
    0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]))
}

impl Mesh {
    /// Builds a mesh, orienting triangles counter-clockwise and marking every
    /// vertex on a boundary edge (an edge with one incident triangle).
    pub fn new(vertices: Vec<[f64; 2]>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let n = vertices.len();
        let mut mesh = Self { vertices, triangles, boundary: vec![false; n] };
        mesh.orient()?;
        let counts = mesh.check_conforming()?;
        for ((a, b), c) in counts {
            if c == 1 {
                mesh.boundary[a] = true;
                mesh.boundary[b] = true;
            }
        }
        Ok(mesh)
    }

    /// Builds a mesh with explicit boundary flags.
    pub fn with_boundary(vertices: Vec<[f64; 2]>, triangles: Vec<[usize; 3]>, boundary: Vec<bool>) -> Result<Self> {
        if boundary.len() != vertices.len() {
            return Err(SchwarzError::DimensionMismatch { expected: vertices.len(), got: boundary.len() });
        }
        let mut mesh = Self { vertices, triangles, boundary };
        mesh.orient()?;
        mesh.check_conforming()?;
        Ok(mesh)
    }

    fn orient(&mut self) -> Result<()> {
        let n = self.vertices.len();
        for (t, tri) in self.triangles.iter_mut().enumerate() {
            if tri.iter().any(|&v| v >= n) {
                return Err(SchwarzError::Config(format!("triangle {t} references a missing vertex")));
            }
            let area = signed_area(self.vertices[tri[0]], self.vertices[tri[1]], self.vertices[tri[2]]);
            if area == 0.0 {
                return Err(SchwarzError::Config(format!("triangle {t} is degenerate")));
            }
            if area < 0.0 {
                tri.swap(1, 2);
            }
        }
        Ok(())
    }

    fn check_conforming(&self) -> Result<HashMap<(usize, usize), usize>> {
        let counts = self.edge_counts();
        if let Some((e, c)) = counts.iter().find(|(_, &c)| c > 2) {
            return Err(SchwarzError::Config(format!("edge {e:?} is shared by {c} triangles")));
        }
        Ok(counts)
    }

    fn edge_counts(&self) -> HashMap<(usize, usize), usize> {
        let mut counts = HashMap::new();
        for tri in &self.triangles {
            for k in 0..3 {
                *counts.entry(edge_key(tri[k], tri[(k + 1) % 3])).or_insert(0) += 1;
            }
        }
        counts
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary(&self) -> &[bool] {
        &self.boundary
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edge_counts().len()
    }

    pub fn coords(&self, t: usize) -> [[f64; 2]; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn area(&self, t: usize) -> f64 {
        let [p, q, r] = self.coords(t);
        signed_area(p, q, r)
    }

    pub fn centroid(&self, t: usize) -> [f64; 2] {
        let [p, q, r] = self.coords(t);
        [(p[0] + q[0] + r[0]) / 3.0, (p[1] + q[1] + r[1]) / 3.0]
    }

    /// Barycentric coordinates of (x, y) in triangle t.
    pub fn barycentric(&self, t: usize, x: f64, y: f64) -> [f64; 3] {
        let [p, q, r] = self.coords(t);
        let area = signed_area(p, q, r);
        [signed_area([x, y], q, r) / area, signed_area(p, [x, y], r) / area, signed_area(p, q, [x, y]) / area]
    }

    /// Lowest-index triangle containing (x, y) and the barycentric weights.
    pub fn locate(&self, x: f64, y: f64) -> Option<(usize, [f64; 3])> {
        const EPS: f64 = 1e-12;
        (0..self.triangles.len()).find_map(|t| {
            let l = self.barycentric(t, x, y);
            l.iter().all(|&v| v >= -EPS).then_some((t, l))
        })
    }

    /// Edges in the order uniform refinement numbers their midpoints.
    pub fn edges_in_refinement_order(&self) -> Vec<(usize, usize)> {
        let mut seen = HashMap::new();
        let mut order = Vec::new();
        for tri in &self.triangles {
            for k in 0..3 {
                let e = edge_key(tri[k], tri[(k + 1) % 3]);
                if seen.insert(e, ()).is_none() {
                    order.push(e);
                }
            }
        }
        order
    }

    /// Vertices adjacent to each vertex through a triangle.
    pub fn vertex_triangles(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for (t, tri) in self.triangles.iter().enumerate() {
            for &v in tri {
                out[v].push(t);
            }
        }
        out
    }

    /// Plain-text form: vertex count, "x y flag" lines, triangle count, "i j k" lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{}", self.vertices.len()).unwrap();
        for (v, b) in self.vertices.iter().zip(&self.boundary) {
            writeln!(s, "{:e} {:e} {}", v[0], v[1], u8::from(*b)).unwrap();
        }
        writeln!(s, "{}", self.triangles.len()).unwrap();
        for t in &self.triangles {
            writeln!(s, "{} {} {}", t[0], t[1], t[2]).unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let perr = |line: usize, msg: &str| SchwarzError::Parse { line, msg: msg.to_string() };
        let mut it = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, l) = it.next().ok_or_else(|| perr(0, "missing vertex count"))?;
        let nv: usize = l.parse().map_err(|_| perr(ln, "bad vertex count"))?;
        let mut vertices = Vec::with_capacity(nv);
        let mut boundary = Vec::with_capacity(nv);
        for _ in 0..nv {
            let (ln, l) = it.next().ok_or_else(|| perr(0, "truncated vertex list"))?;
            let f: Vec<&str> = l.split_whitespace().collect();
            if f.len() != 3 {
                return Err(perr(ln, "expected 'x y flag'"));
            }
            let x: f64 = f[0].parse().map_err(|_| perr(ln, "bad x"))?;
            let y: f64 = f[1].parse().map_err(|_| perr(ln, "bad y"))?;
            let flag = match f[2] {
                "0" => false,
                "1" => true,
                _ => return Err(perr(ln, "flag must be 0 or 1")),
            };
            vertices.push([x, y]);
            boundary.push(flag);
        }
        let (ln, l) = it.next().ok_or_else(|| perr(0, "missing triangle count"))?;
        let nt: usize = l.parse().map_err(|_| perr(ln, "bad triangle count"))?;
        let mut triangles = Vec::with_capacity(nt);
        for _ in 0..nt {
            let (ln, l) = it.next().ok_or_else(|| perr(0, "truncated triangle list"))?;
            let f: Vec<usize> = l
                .split_whitespace()
                .map(|s| s.parse().map_err(|_| perr(ln, "bad vertex index")))
                .collect::<Result<_>>()?;
            if f.len() != 3 {
                return Err(perr(ln, "expected 'i j k'"));
            }
            triangles.push([f[0], f[1], f[2]]);
        }
        Self::with_boundary(vertices, triangles, boundary)
    }
}

/// Splits every triangle into four congruent children through its edge
/// midpoints. Parent vertices keep their indices; midpoints are appended in
/// first-encounter order over triangles and their edges.
pub fn uniform_refine(m: &Mesh) -> Mesh {
    let edge_counts = m.edge_counts();
    let mut vertices = m.vertices.clone();
    let mut boundary = m.boundary.clone();
    let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
    for (a, b) in m.edges_in_refinement_order() {
        let (pa, pb) = (m.vertices[a], m.vertices[b]);
        mid.insert((a, b), vertices.len());
        vertices.push([0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]);
        boundary.push(edge_counts[&(a, b)] == 1 && m.boundary[a] && m.boundary[b]);
    }
    let mut triangles = Vec::with_capacity(4 * m.triangles.len());
    for &[a, b, c] in &m.triangles {
        let ab = mid[&edge_key(a, b)];
        let bc = mid[&edge_key(b, c)];
        let ca = mid[&edge_key(c, a)];
        triangles.push([a, ab, ca]);
        triangles.push([ab, b, bc]);
        triangles.push([ca, bc, c]);
        triangles.push([ab, bc, ca]);
    }
    Mesh { vertices, triangles, boundary }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::meshes;

    #[test]
    fn single_triangle_refines_to_four() {
        let m = meshes::single_triangle();
        let f = uniform_refine(&m);
        assert_eq!((f.n_triangles(), f.n_vertices()), (4, 6));
        let parent = m.area(0);
        for t in 0..4 {
            assert!((f.area(t) - parent / 4.0).abs() < 1e-15);
        }
    }

    #[test]
    fn refinement_preserves_parent_vertices_bit_exactly() {
        let m = meshes::lshape_coarse();
        let f = uniform_refine(&m);
        assert_eq!(&f.vertices()[..m.n_vertices()], m.vertices());
        assert_eq!(f.n_triangles(), 4 * m.n_triangles());
        for t in 0..f.n_triangles() {
            assert!(f.area(t) > 0.0);
        }
        assert!(f.edge_counts().values().all(|&c| c <= 2));
    }

    #[test]
    fn clockwise_input_is_reoriented() {
        let m = Mesh::new(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]], vec![[0, 1, 2]]).unwrap();
        assert!(m.area(0) > 0.0);
    }

    #[test]
    fn nonconforming_and_degenerate_rejected() {
        let v = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, -1.0], [1.0, 1.0]];
        let three_on_edge = vec![[0, 1, 2], [0, 1, 3], [0, 1, 4]];
        assert!(Mesh::new(v.clone(), three_on_edge).is_err());
        let flat = Mesh::new(vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]], vec![[0, 1, 2]]);
        assert!(flat.is_err());
    }

    #[test]
    fn boundary_flags_follow_boundary_edges() {
        let m = meshes::unit_square(2);
        let interior: Vec<usize> = (0..m.n_vertices()).filter(|&v| !m.boundary()[v]).collect();
        assert_eq!(interior.len(), 1);
        assert_eq!(m.vertices()[interior[0]], [0.5, 0.5]);
        let f = uniform_refine(&m);
        let nb = f.boundary().iter().filter(|&&b| b).count();
        assert_eq!(nb, 16);
    }

    #[test]
    fn locate_prefers_lowest_index_on_shared_edge() {
        let m = meshes::unit_square(1);
        // the diagonal is shared by both triangles
        let (t, l) = m.locate(0.5, 0.5).unwrap();
        assert_eq!(t, 0);
        assert!((l.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(m.locate(1.5, 0.5).is_none());
    }

    #[test]
    fn text_round_trip() {
        let m = meshes::pbe_coarse();
        let back = Mesh::from_text(&m.to_text()).unwrap();
        assert_eq!(back, m);
        assert!(Mesh::from_text("2\n0 0 1\n").is_err());
    }
}
