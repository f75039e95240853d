//! Symmetry and positivity certificates for preconditioners.

use std::fmt;

use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SchwarzError};
use crate::linalg::{lanczos_extremes_fn, linearity_defect, materialize, random, vector, DenseMatrix, LinearOperator};

pub const SYMMETRY_TOL: f64 = 1e-10;
pub const LINEARITY_TOL: f64 = 1e-10;
/// Largest dimension that is materialized; above it only probes are used.
pub const DENSE_LIMIT: usize = 2000;
pub const PROBE_PAIRS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpdCertificate {
    /// max |B_ij − B_ji| / max |B_ij| (dense) or the worst probe ratio
    pub symmetry_defect: f64,
    /// smallest eigenvalue of (B + Bᵀ)/2
    pub min_eig: f64,
    pub max_eig: f64,
    pub dense: bool,
    pub passed: bool,
}

impl fmt::Display for SpdCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (defect {:.2e}, λ_min {:.4e})",
            if self.passed { "SPD" } else { "not SPD" },
            self.symmetry_defect,
            self.min_eig
        )
    }
}

/// Relative asymmetry and extreme eigenvalues of the symmetric part.
pub fn certify_dense(b: &DenseMatrix) -> SpdCertificate {
    let scale = b.max_abs();
    let symmetry_defect = if scale > 0.0 { b.max_asymmetry() / scale } else { 0.0 };
    let eig = SymmetricEigen::new(b.symmetric_part().to_nalgebra()).eigenvalues;
    let min_eig = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_eig = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    SpdCertificate {
        symmetry_defect,
        min_eig,
        max_eig,
        dense: true,
        passed: symmetry_defect < SYMMETRY_TOL && min_eig > 0.0,
    }
}

/// Certifies B = op. Materializes when n ≤ 2000, otherwise checks 64 random
/// pairs |(Bu,v) − (u,Bv)| and runs Lanczos on the symmetric part.
pub fn certify_spd<T: LinearOperator + ?Sized>(op: &T, n: usize) -> Result<SpdCertificate> {
    if op.dim() != n {
        return Err(SchwarzError::DimensionMismatch { expected: n, got: op.dim() });
    }
    let defect = linearity_defect(op, 4, 0xce27);
    if defect > LINEARITY_TOL {
        return Err(SchwarzError::Nonlinear { defect });
    }
    if n <= DENSE_LIMIT {
        return Ok(certify_dense(&materialize(op, n)));
    }
    let mut rng = random::rng(0x9a1f);
    let mut worst: f64 = 0.0;
    for _ in 0..PROBE_PAIRS {
        let u = random::random_vector(&mut rng, n);
        let v = random::random_vector(&mut rng, n);
        let bu = op.apply(&u);
        let bv = op.apply(&v);
        let scale = vector::norm2(&bu) * vector::norm2(&v) + vector::norm2(&u) * vector::norm2(&bv);
        worst = worst.max((vector::dot(&bu, &v) - vector::dot(&u, &bv)).abs() / scale.max(f64::MIN_POSITIVE));
    }
    let (min_eig, max_eig) = lanczos_extremes_fn(n, |x| op.apply(x), 80);
    Ok(SpdCertificate {
        symmetry_defect: worst,
        min_eig,
        max_eig,
        dense: false,
        passed: worst < SYMMETRY_TOL && min_eig > 0.0,
    })
}
