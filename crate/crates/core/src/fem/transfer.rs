//! Prolongation between nested P1 spaces and Galerkin coarse operators.

use super::mesh::Mesh;
use crate::error::{Result, SchwarzError};
use crate::linalg::SparseMatrix;

/// Linear interpolation from `coarse` to `fine = uniform_refine(coarse)`.
///
/// Rows of retained vertices hold a single 1; midpoint rows hold ½, ½ on the
/// parent edge endpoints. Boundary rows use the same stencil.
pub fn build_prolongation(coarse: &Mesh, fine: &Mesh) -> Result<SparseMatrix> {
    let nc = coarse.n_vertices();
    let edges = coarse.edges_in_refinement_order();
    if fine.n_vertices() != nc + edges.len() || fine.n_triangles() != 4 * coarse.n_triangles() {
        return Err(SchwarzError::NotNested(format!(
            "fine mesh has {} vertices, expected {}",
            fine.n_vertices(),
            nc + edges.len()
        )));
    }
    if fine.vertices()[..nc] != *coarse.vertices() {
        return Err(SchwarzError::NotNested("coarse vertices are not a prefix of the fine ones".into()));
    }
    let mut trip: Vec<(usize, usize, f64)> = (0..nc).map(|i| (i, i, 1.0)).collect();
    for (k, &(a, b)) in edges.iter().enumerate() {
        let (pa, pb) = (coarse.vertices()[a], coarse.vertices()[b]);
        let m = [0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])];
        if fine.vertices()[nc + k] != m {
            return Err(SchwarzError::NotNested(format!("fine vertex {} is not the midpoint of ({a}, {b})", nc + k)));
        }
        trip.push((nc + k, a, 0.5));
        trip.push((nc + k, b, 0.5));
    }
    Ok(SparseMatrix::from_triplets(fine.n_vertices(), nc, trip))
}

/// Drops entries in constrained fine rows and constrained coarse columns, so
/// corrections never touch Dirichlet unknowns.
pub fn eliminate_transfer(p: &SparseMatrix, fine_constrained: &[bool], coarse_constrained: &[bool]) -> SparseMatrix {
    let t = p.triplets().filter(|&(i, j, _)| !fine_constrained[i] && !coarse_constrained[j]);
    SparseMatrix::from_triplets(p.nrows(), p.ncols(), t.collect::<Vec<_>>())
}

/// c·Pᵀ·A·P.
pub fn galerkin_coarsen(a_fine: &SparseMatrix, p: &SparseMatrix, c: f64) -> Result<SparseMatrix> {
    if a_fine.nrows() != a_fine.ncols() {
        return Err(SchwarzError::DimensionMismatch { expected: a_fine.nrows(), got: a_fine.ncols() });
    }
    if p.nrows() != a_fine.nrows() {
        return Err(SchwarzError::DimensionMismatch { expected: a_fine.nrows(), got: p.nrows() });
    }
    if !(c > 0.0) {
        return Err(SchwarzError::Config(format!("restriction scaling {c} must be positive")));
    }
    let ap = a_fine.matmul(p)?;
    Ok(p.transpose().matmul(&ap)?.scaled(c))
}

/// Puts 1 on the diagonal of constrained unknowns after clearing their rows
/// and columns.
pub fn pin_constrained(a: &SparseMatrix, constrained: &[bool]) -> SparseMatrix {
    let mut t: Vec<(usize, usize, f64)> =
        a.triplets().filter(|&(i, j, _)| !constrained[i] && !constrained[j]).collect();
    t.extend((0..a.nrows()).filter(|&i| constrained[i]).map(|i| (i, i, 1.0)));
    SparseMatrix::from_triplets(a.nrows(), a.ncols(), t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::mesh::uniform_refine;
    use crate::fem::meshes;

    #[test]
    fn stencils() {
        let c = meshes::single_triangle();
        let f = uniform_refine(&c);
        let p = build_prolongation(&c, &f).unwrap();
        for i in 0..3 {
            assert_eq!(p.row(i), (&[i][..], &[1.0][..]));
        }
        for i in 3..6 {
            assert_eq!(p.row(i).1, &[0.5, 0.5]);
        }
    }

    #[test]
    fn reproduces_linears() {
        let c = meshes::lshape_coarse();
        let f = uniform_refine(&c);
        let p = build_prolongation(&c, &f).unwrap();
        let lin = |v: &[f64; 2]| 0.3 - 1.7 * v[0] + 2.25 * v[1];
        let uc: Vec<f64> = c.vertices().iter().map(lin).collect();
        let uf = p.spmv(&uc).unwrap();
        for (v, u) in f.vertices().iter().zip(&uf) {
            assert!((lin(v) - u).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_unrelated_meshes() {
        let c = meshes::unit_square(2);
        assert!(build_prolongation(&c, &meshes::unit_square(4)).is_err());
        assert!(build_prolongation(&meshes::pbe_coarse(), &uniform_refine(&c)).is_err());
    }

    #[test]
    fn galerkin_scaling() {
        let i = SparseMatrix::identity(4);
        assert_eq!(galerkin_coarsen(&i, &i, 1.0).unwrap(), i);
        let a = SparseMatrix::laplacian_1d(5);
        let p = SparseMatrix::from_triplets(
            5,
            2,
            vec![(0, 0, 0.5), (1, 0, 1.0), (2, 0, 0.5), (2, 1, 0.5), (3, 1, 1.0), (4, 1, 0.5)],
        );
        let one = galerkin_coarsen(&a, &p, 1.0).unwrap();
        let two = galerkin_coarsen(&a, &p, 2.0).unwrap();
        assert_eq!(two, one.scaled(2.0));
        assert!(galerkin_coarsen(&a, &p, 0.0).is_err());
        assert!(galerkin_coarsen(&a, &SparseMatrix::identity(3), 1.0).is_err());
    }
}
