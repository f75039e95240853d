//! Lexicographic Gauss-Seidel sweeps.

use crate::error::{Result, SchwarzError};
use crate::linalg::{flops, SparseMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// ascending unknown index
    Forward,
    /// descending unknown index
    Backward,
}

impl Direction {
    pub fn letter(self) -> char {
        match self {
            Direction::Forward => 'f',
            Direction::Backward => 'b',
        }
    }
}

fn relax_row(a: &SparseMatrix, i: usize, x: &mut [f64], b: &[f64]) -> Result<()> {
    let (cols, vals) = a.row(i);
    let mut s = b[i];
    let mut d = 0.0;
    for (&j, &v) in cols.iter().zip(vals) {
        if j == i {
            d = v;
        } else {
            s -= v * x[j];
        }
    }
    if d == 0.0 {
        return Err(SchwarzError::ZeroDiagonal { row: i });
    }
    x[i] = s / d;
    Ok(())
}

/// One in-place sweep of x ← x + (D+L)⁻¹(b − Ax) (forward) or with D+U
/// (backward).
pub fn gs_sweep_in_place(a: &SparseMatrix, x: &mut [f64], b: &[f64], dir: Direction) -> Result<()> {
    let n = a.nrows();
    if x.len() != n || b.len() != n {
        return Err(SchwarzError::DimensionMismatch { expected: n, got: x.len().min(b.len()) });
    }
    match dir {
        Direction::Forward => (0..n).try_for_each(|i| relax_row(a, i, x, b))?,
        Direction::Backward => (0..n).rev().try_for_each(|i| relax_row(a, i, x, b))?,
    }
    flops::add(2 * a.nnz());
    Ok(())
}

pub fn gs_sweep(a: &SparseMatrix, x: &[f64], b: &[f64], dir: Direction) -> Result<Vec<f64>> {
    let mut y = x.to_vec();
    gs_sweep_in_place(a, &mut y, b, dir)?;
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{materialize, DenseMatrix, FnOperator};

    #[test]
    fn diagonal_is_exact_in_one_sweep() {
        let a = SparseMatrix::diag(&[2.0, 4.0]);
        assert_eq!(gs_sweep(&a, &[0.0, 0.0], &[2.0, 4.0], Direction::Forward).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn tridiagonal_hand_rolled() {
        let a = SparseMatrix::laplacian_1d(3);
        let x = gs_sweep(&a, &[0.0; 3], &[1.0; 3], Direction::Forward).unwrap();
        assert_eq!(x, vec![0.5, 0.75, 0.875]);
        let y = gs_sweep(&a, &[0.0; 3], &[1.0; 3], Direction::Backward).unwrap();
        assert_eq!(y, vec![0.875, 0.75, 0.5]);
    }

    #[test]
    fn zero_diagonal_rejected() {
        let a = SparseMatrix::from_triplets(2, 2, vec![(0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0)]);
        let err = gs_sweep(&a, &[0.0; 2], &[1.0; 2], Direction::Forward).unwrap_err();
        assert!(matches!(err, SchwarzError::ZeroDiagonal { row: 1 }));
    }

    #[test]
    fn forward_propagator_matches_splitting() {
        let mut rng = crate::linalg::random::rng(3);
        let a = crate::linalg::random::random_sparse_spd(&mut rng, 12, 3);
        let zero = vec![0.0; 12];
        let e = FnOperator::new(12, |x: &[f64]| gs_sweep(&a, x, &zero, Direction::Forward).unwrap());
        let e = materialize(&e, 12);
        // I − (D+L)⁻¹A
        let ad = a.to_dense();
        let mut dl = DenseMatrix::zeros(12, 12);
        for i in 0..12 {
            for j in 0..=i {
                dl[(i, j)] = ad[(i, j)];
            }
        }
        let m = dl.lu().unwrap().inverse().matmul(&ad).unwrap();
        let expect = DenseMatrix::identity(12).add_scaled(&m, -1.0);
        assert!(e.add_scaled(&expect, -1.0).max_abs() < 1e-13);
    }
}
