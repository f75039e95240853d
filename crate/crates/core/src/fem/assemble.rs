//! P1 assembly with one-point (barycenter) quadrature and symmetric
//! Dirichlet elimination.

use super::mesh::Mesh;
use super::problem::ProblemSpec;
use crate::error::{Result, SchwarzError};
use crate::linalg::SparseMatrix;

/// Element stiffness ε·area·∇φᵢ·∇φⱼ for a counter-clockwise triangle.
pub fn element_stiffness(p: [[f64; 2]; 3], eps: f64) -> [[f64; 3]; 3] {
    let area = 0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]));
    // ∇φᵢ = (y_{i+1} − y_{i+2}, x_{i+2} − x_{i+1}) / (2·area)
    let g: Vec<[f64; 2]> = (0..3)
        .map(|i| {
            let (a, b) = (p[(i + 1) % 3], p[(i + 2) % 3]);
            [a[1] - b[1], b[0] - a[0]]
        })
        .collect();
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = eps * (g[i][0] * g[j][0] + g[i][1] * g[j][1]) / (4.0 * area);
        }
    }
    k
}

/// One-point quadrature of ∫ c φᵢ φⱼ: every basis function is 1/3 at the
/// barycenter.
pub fn element_mass(area: f64, c: f64) -> [[f64; 3]; 3] {
    [[c * area / 9.0; 3]; 3]
}

/// Global matrix and load vector before boundary conditions.
pub fn assemble_unconstrained(m: &Mesh, p: &ProblemSpec) -> Result<(SparseMatrix, Vec<f64>)> {
    let n = m.n_vertices();
    let mut trip = Vec::with_capacity(9 * m.n_triangles());
    for (t, tri) in m.triangles().iter().enumerate() {
        let [cx, cy] = m.centroid(t);
        let eps = (p.diffusion)(cx, cy);
        let kappa = (p.reaction)(cx, cy);
        if !(eps > 0.0) {
            return Err(SchwarzError::Config(format!("diffusion {eps} at ({cx}, {cy}) is not positive")));
        }
        if !(kappa >= 0.0) {
            return Err(SchwarzError::Config(format!("reaction {kappa} at ({cx}, {cy}) is negative")));
        }
        let k = element_stiffness(m.coords(t), eps);
        let mm = element_mass(m.area(t), kappa);
        for i in 0..3 {
            for j in 0..3 {
                trip.push((tri[i], tri[j], k[i][j] + mm[i][j]));
            }
        }
    }
    let mut f = vec![0.0; n];
    for s in &p.sources {
        let (t, lambda) = m.locate(s.x, s.y).ok_or(SchwarzError::OutsideDomain { x: s.x, y: s.y })?;
        for (v, l) in m.triangles()[t].iter().zip(lambda) {
            f[*v] += s.charge * l;
        }
    }
    Ok((SparseMatrix::from_triplets(n, n, trip), f))
}

/// Zeroes the rows and columns of constrained unknowns, puts 1 on their
/// diagonal and moves the known values to the right-hand side.
pub fn eliminate_dirichlet(
    k: &SparseMatrix,
    f: &[f64],
    constrained: &[bool],
    values: &[f64],
) -> (SparseMatrix, Vec<f64>) {
    let n = k.nrows();
    let mut rhs = f.to_vec();
    let mut trip = Vec::with_capacity(k.nnz());
    for (i, j, v) in k.triplets() {
        match (constrained[i], constrained[j]) {
            (false, false) => trip.push((i, j, v)),
            (false, true) => rhs[i] -= v * values[j],
            _ => {}
        }
    }
    for i in 0..n {
        if constrained[i] {
            trip.push((i, i, 1.0));
            rhs[i] = values[i];
        }
    }
    (SparseMatrix::from_triplets(n, n, trip), rhs)
}

/// Assembled and eliminated system; Dirichlet unknowns are the mesh's
/// boundary vertices.
pub fn assemble(m: &Mesh, p: &ProblemSpec) -> Result<(SparseMatrix, Vec<f64>)> {
    let (k, f) = assemble_unconstrained(m, p)?;
    let g: Vec<f64> =
        m.vertices().iter().zip(m.boundary()).map(|(v, &b)| if b { (p.dirichlet)(v[0], v[1]) } else { 0.0 }).collect();
    Ok(eliminate_dirichlet(&k, &f, m.boundary(), &g))
}
