//! Seeded random instances for probes and test batteries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dense::DenseMatrix;
use super::sparse::SparseMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries uniform in [−1, 1).
pub fn random_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

pub fn random_matrix<R: Rng>(rng: &mut R, nrows: usize, ncols: usize) -> DenseMatrix {
    let rows: Vec<Vec<f64>> = (0..nrows).map(|_| random_vector(rng, ncols)).collect();
    DenseMatrix::from_rows(&rows)
}

/// GᵀG + n·I for a random G; well conditioned and SPD.
pub fn random_spd<R: Rng>(rng: &mut R, n: usize) -> DenseMatrix {
    let g = random_matrix(rng, n, n);
    let mut a = g.transpose().matmul(&g).expect("square");
    for i in 0..n {
        a[(i, i)] += n as f64;
    }
    a.symmetric_part()
}

/// Random symmetric diagonally dominant sparse matrix with about `per_row`
/// off-diagonal entries per row.
pub fn random_sparse_spd<R: Rng>(rng: &mut R, n: usize, per_row: usize) -> SparseMatrix {
    let mut t = Vec::new();
    let mut diag = vec![1.0; n];
    for i in 0..n {
        for _ in 0..per_row / 2 {
            let j = rng.random_range(0..n);
            if j == i {
                continue;
            }
            let v: f64 = rng.random_range(-1.0..0.0);
            t.push((i, j, v));
            t.push((j, i, v));
            diag[i] += v.abs();
            diag[j] += v.abs();
        }
    }
    t.extend(diag.iter().enumerate().map(|(i, &d)| (i, i, d)));
    SparseMatrix::from_triplets(n, n, t)
}
