//! Lanczos-based SPD smoke test.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};

use super::sparse::SparseMatrix;
use super::vector;
use crate::error::{Result, SchwarzError};

pub const SMOKE_SYMMETRY_TOL: f64 = 1e-12;
pub const SMOKE_LANCZOS_STEPS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpdSmoke {
    pub symmetry_defect: f64,
    pub min_ritz: f64,
    pub max_ritz: f64,
    pub passed: bool,
}

impl fmt::Display for SpdSmoke {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "symmetry defect {:.3e}, Ritz range [{:.6e}, {:.6e}]",
            self.symmetry_defect, self.min_ritz, self.max_ritz
        )
    }
}

/// Extreme Ritz values of the symmetric part of `a` after `steps` Lanczos
/// steps with full reorthogonalization.
pub fn lanczos_extremes(a: &SparseMatrix, steps: usize) -> Result<(f64, f64)> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(SchwarzError::DimensionMismatch { expected: n, got: a.ncols() });
    }
    let sym_apply = |x: &[f64]| -> Vec<f64> {
        let y = a.spmv(x).expect("square");
        let z = a.spmv_transpose(x).expect("square");
        y.iter().zip(&z).map(|(p, q)| 0.5 * (p + q)).collect()
    };
    Ok(lanczos_extremes_fn(n, sym_apply, steps))
}

/// Extreme Ritz values of a symmetric map given by its action.
pub fn lanczos_extremes_fn(n: usize, sym_apply: impl Fn(&[f64]) -> Vec<f64>, steps: usize) -> (f64, f64) {
    if n == 0 {
        return (0.0, 0.0);
    }
    let steps = steps.min(n);
    // deterministic start with all components excited
    let mut q: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i as f64) * 0.7).sin()).collect();
    let nrm = vector::norm2(&q);
    vector::scale(1.0 / nrm, &mut q);

    let mut basis: Vec<Vec<f64>> = vec![q];
    let mut alpha = Vec::with_capacity(steps);
    let mut beta: Vec<f64> = Vec::with_capacity(steps);
    for k in 0..steps {
        let mut w = sym_apply(&basis[k]);
        let a_k = vector::dot(&w, &basis[k]);
        alpha.push(a_k);
        for _ in 0..2 {
            for v in &basis {
                let c = vector::dot(&w, v);
                vector::axpy(-c, v, &mut w);
            }
        }
        let b_k = vector::norm2(&w);
        if k + 1 == steps || b_k <= 1e-14 * a_k.abs().max(1.0) {
            break;
        }
        beta.push(b_k);
        vector::scale(1.0 / b_k, &mut w);
        basis.push(w);
    }
    let m = alpha.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t).eigenvalues;
    let lo = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Symmetry defect below 1e-12 (relative) and a positive smallest Ritz value
/// after 50 Lanczos steps.
pub fn spd_smoke_test(a: &SparseMatrix) -> Result<SpdSmoke> {
    let symmetry_defect = a.symmetry_defect();
    let (min_ritz, max_ritz) = lanczos_extremes(a, SMOKE_LANCZOS_STEPS)?;
    Ok(SpdSmoke { symmetry_defect, min_ritz, max_ritz, passed: symmetry_defect < SMOKE_SYMMETRY_TOL && min_ritz > 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplacian_passes() {
        let s = spd_smoke_test(&SparseMatrix::laplacian_1d(30)).unwrap();
        assert!(s.passed, "{s}");
        // exact extremes 2 − 2cos(kπ/31)
        let lo = 2.0 - 2.0 * (std::f64::consts::PI / 31.0).cos();
        assert!((s.min_ritz - lo).abs() < 1e-10);
    }

    #[test]
    fn indefinite_fails() {
        let s = spd_smoke_test(&SparseMatrix::diag(&[3.0, 1.0, -0.5])).unwrap();
        assert!(!s.passed);
        assert!(s.min_ritz < 0.0);
    }

    #[test]
    fn asymmetric_fails() {
        let a = SparseMatrix::from_triplets(2, 2, vec![(0, 0, 2.0), (1, 1, 2.0), (0, 1, 0.5)]);
        assert!(!spd_smoke_test(&a).unwrap().passed);
    }
}
