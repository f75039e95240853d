//! Coarse meshes for the test problems and a few small fixtures.

use super::mesh::Mesh;

/// Reference triangle (0,0), (1,0), (0,1).
pub fn single_triangle() -> Mesh {
    Mesh::new(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], vec![[0, 1, 2]]).expect("valid mesh")
}

/// Unit square cut into m×m cells, each split along its (i,j)–(i+1,j+1)
/// diagonal. Vertices are numbered row by row from the bottom.
pub fn unit_square(m: usize) -> Mesh {
    assert!(m >= 1);
    let h = 1.0 / m as f64;
    let mut vertices = Vec::with_capacity((m + 1) * (m + 1));
    for j in 0..=m {
        for i in 0..=m {
            vertices.push([i as f64 * h, j as f64 * h]);
        }
    }
    let id = |i: usize, j: usize| j * (m + 1) + i;
    let mut triangles = Vec::with_capacity(2 * m * m);
    for j in 0..m {
        for i in 0..m {
            triangles.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            triangles.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    Mesh::new(vertices, triangles).expect("valid mesh")
}

/// Ten-element, nine-node coarse mesh of the unit square used by the
/// Poisson-Boltzmann surrogate. The middle row of vertices sits on y = 1/2.
pub fn pbe_coarse() -> Mesh {
    let vertices = vec![
        [0.0, 0.0],
        [0.5, 0.0],
        [1.0, 0.0],
        [0.25, 0.5],
        [0.5, 0.5],
        [0.75, 0.5],
        [0.0, 1.0],
        [0.5, 1.0],
        [1.0, 1.0],
    ];
    let triangles = vec![
        [0, 1, 3],
        [1, 4, 3],
        [1, 2, 5],
        [1, 5, 4],
        [2, 8, 5],
        [0, 3, 6],
        [3, 7, 6],
        [3, 4, 7],
        [4, 5, 7],
        [5, 8, 7],
    ];
    Mesh::new(vertices, triangles).expect("valid mesh")
}

/// Directions of the seven rays spanning the L-shape, 45° apart, counter-
/// clockwise from the positive x axis. Each ray ends at a corner or edge
/// midpoint of [−1,1]².
const L_RAYS: [[f64; 2]; 7] = [[1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [-1.0, 1.0], [-1.0, 0.0], [-1.0, -1.0], [0.0, -1.0]];

/// 36-element, 25-node coarse mesh of [−1,1]² minus [0,1]×[−1,0].
///
/// Vertices: the re-entrant corner, three rings of seven points at
/// sup-norm radius 1/4, 1/2 and 1 along the rays, and the centres of the
/// three 1/4-squares touching the corner. Every triangle has a right angle
/// and none is obtuse, so refinements keep an M-matrix stiffness. The mesh
/// is graded toward the corner.
pub fn lshape_coarse() -> Mesh {
    let mut vertices = vec![[0.0, 0.0]];
    let ring = |s: f64| L_RAYS.iter().map(move |d| [s * d[0], s * d[1]]);
    vertices.extend(ring(0.25));
    vertices.extend(ring(0.5));
    vertices.extend(ring(1.0));
    for j in [1, 3, 5] {
        vertices.push([0.125 * L_RAYS[j][0], 0.125 * L_RAYS[j][1]]);
    }
    let r1 = |j: usize| 1 + j;
    let r2 = |j: usize| 8 + j;
    let out = |j: usize| 15 + j;
    let centre = |j: usize| 22 + (j - 1) / 2;

    let mut triangles = Vec::with_capacity(36);
    for j in [1, 3, 5] {
        let c = centre(j);
        triangles.push([0, r1(j - 1), c]);
        triangles.push([r1(j - 1), r1(j), c]);
        triangles.push([r1(j), r1(j + 1), c]);
        triangles.push([r1(j + 1), 0, c]);
    }
    // quadrilaterals between rings are cut from the inner diagonal-ray point
    // to the outer axis point
    for j in 0..6 {
        let (o, e) = if j % 2 == 1 { (j, j + 1) } else { (j + 1, j) };
        triangles.push([r1(e), r1(o), r2(e)]);
        triangles.push([r1(o), r2(o), r2(e)]);
        triangles.push([r2(e), out(e), r2(o)]);
        triangles.push([out(e), out(o), r2(o)]);
    }
    Mesh::new(vertices, triangles).expect("valid mesh")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::mesh::uniform_refine;

    fn refine(m: &Mesh, times: usize) -> Mesh {
        (0..times).fold(m.clone(), |acc, _| uniform_refine(&acc))
    }

    fn total_area(m: &Mesh) -> f64 {
        (0..m.n_triangles()).map(|t| m.area(t)).sum()
    }

    #[test]
    fn pbe_counts() {
        let m = pbe_coarse();
        assert_eq!((m.n_triangles(), m.n_vertices()), (10, 9));
        assert!((total_area(&m) - 1.0).abs() < 1e-14);
        let f = refine(&m, 4);
        assert_eq!((f.n_triangles(), f.n_vertices()), (2560, 1329));
    }

    #[test]
    fn lshape_counts() {
        let m = lshape_coarse();
        assert_eq!((m.n_triangles(), m.n_vertices()), (36, 25));
        assert!((total_area(&m) - 3.0).abs() < 1e-14);
        let counts: Vec<usize> = (0..5).map(|k| refine(&m, k).n_triangles()).collect();
        assert_eq!(counts, vec![36, 144, 576, 2304, 9216]);
        assert_eq!(refine(&m, 4).n_vertices(), 4705);
    }

    #[test]
    fn lshape_has_no_obtuse_angle() {
        let m = lshape_coarse();
        for t in m.triangles() {
            for i in 0..3 {
                let [a, b, c] = [m.vertices()[t[i]], m.vertices()[t[(i + 1) % 3]], m.vertices()[t[(i + 2) % 3]]];
                let dot = (b[0] - a[0]) * (c[0] - a[0]) + (b[1] - a[1]) * (c[1] - a[1]);
                assert!(dot >= -1e-14, "obtuse at {a:?}");
            }
        }
    }

    #[test]
    fn lshape_boundary_lies_on_the_l() {
        let m = lshape_coarse();
        for (v, &b) in m.vertices().iter().zip(m.boundary()) {
            let on_outer = v[0].abs() == 1.0 || v[1].abs() == 1.0;
            let on_notch = (v[1] == 0.0 && v[0] >= 0.0) || (v[0] == 0.0 && v[1] <= 0.0);
            assert_eq!(b, on_outer || on_notch, "{v:?}");
        }
    }

    #[test]
    fn unit_square_sizes() {
        let m = unit_square(3);
        assert_eq!((m.n_vertices(), m.n_triangles()), (16, 18));
        assert_eq!(uniform_refine(&m).n_vertices(), 49);
    }
}
