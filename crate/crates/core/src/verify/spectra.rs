//! A-norms, spectral radii, condition numbers and the symmetrization
//! penalty, computed on materialized operators.

use nalgebra::{Cholesky, DMatrix, Dyn, Schur, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SchwarzError};
use crate::linalg::{a_adjoint, materialize, DenseMatrix, LinearOperator, SparseMatrix};

/// Cholesky factor L of A = LLᵀ, used for the A-inner-product similarity.
pub struct AMetric {
    l: DMatrix<f64>,
}

impl AMetric {
    pub fn new(a: &SparseMatrix) -> Result<Self> {
        let chol = Cholesky::new(a.to_dense().to_nalgebra())
            .ok_or_else(|| SchwarzError::NotSpd("Cholesky factorization failed".into()))?;
        Ok(Self { l: chol.l() })
    }

    pub fn dim(&self) -> usize {
        self.l.nrows()
    }

    /// Lᵀ M L⁻ᵀ: its 2-norm is ‖M‖_A and it is symmetric iff M is
    /// A-self-adjoint.
    pub fn similarity(&self, m: &DenseMatrix) -> DMatrix<f64> {
        let mt = m.to_nalgebra().transpose();
        // X = M L⁻ᵀ  ⇔  L Xᵀ = Mᵀ
        let xt = self.l.solve_lower_triangular(&mt).expect("nonsingular factor");
        self.l.transpose() * xt.transpose()
    }

    /// ‖M‖_A by a dense singular value decomposition of the similarity.
    pub fn norm(&self, m: &DenseMatrix) -> f64 {
        let s = self.similarity(m);
        s.singular_values().iter().cloned().fold(0.0, f64::max)
    }
}

/// Dense reference for ‖E‖_A.
pub fn a_norm_dense(e: &DenseMatrix, a: &SparseMatrix) -> Result<f64> {
    Ok(AMetric::new(a)?.norm(e))
}

pub const POWER_TOL: f64 = 1e-8;
pub const POWER_MAX_STEPS: usize = 5000;

/// ‖E‖_A as the square root of the top eigenvalue of E*E, by power iteration
/// in the A-inner product. E* comes from the dense A-adjoint.
pub fn a_norm<T: LinearOperator + ?Sized>(e: &T, a: &SparseMatrix) -> Result<f64> {
    let n = a.nrows();
    let em = materialize(e, n);
    let es = a_adjoint(&em, a)?;
    let ainner = |x: &[f64], y: &[f64]| -> f64 {
        let ax = a.spmv(x).expect("dimension");
        ax.iter().zip(y).map(|(p, q)| p * q).sum()
    };
    // deterministic start with every component excited, A-normalized
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 1.3).sin()).collect();
    let nx = ainner(&x, &x).sqrt();
    x.iter_mut().for_each(|v| *v /= nx);
    let mut prev = f64::NAN;
    let mut last = 0.0;
    for _ in 0..POWER_MAX_STEPS {
        let ex = em.matvec(&x)?;
        let lambda = ainner(&ex, &ex);
        if lambda == 0.0 {
            return Ok(0.0);
        }
        let y = es.matvec(&ex)?;
        let ny = ainner(&y, &y).sqrt();
        if (lambda - last).abs() <= POWER_TOL * lambda {
            return Ok(lambda.sqrt());
        }
        prev = last;
        last = lambda;
        x = y.into_iter().map(|v| v / ny).collect();
    }
    Err(SchwarzError::NoConvergence { steps: POWER_MAX_STEPS, last: last.sqrt(), previous: prev.sqrt() })
}

/// Largest |λ| of a dense matrix.
pub fn spectral_radius_dense(m: &DenseMatrix) -> f64 {
    let n = m.nrows();
    if n == 0 {
        return 0.0;
    }
    let mat = m.to_nalgebra();
    if m.max_asymmetry() == 0.0 {
        return SymmetricEigen::new(mat).eigenvalues.iter().fold(0.0, |r: f64, v| r.max(v.abs()));
    }
    // deflating at machine epsilon can stall the shifted QR on clustered
    // spectra, so loosen step by step
    for eps in SCHUR_DEFLATION {
        if let Some(s) = Schur::<f64, Dyn>::try_new(mat.clone(), eps, SCHUR_MAX_STEPS) {
            return s.complex_eigenvalues().iter().fold(0.0, |r: f64, v| r.max(v.norm()));
        }
    }
    power_radius(m)
}

const SCHUR_DEFLATION: [f64; 4] = [4.0 * f64::EPSILON, 1e-15, 1e-14, 1e-13];
const SCHUR_MAX_STEPS: usize = 20_000;

/// Gelfand estimate ‖Mᵏx‖^{1/k}; fallback when the Schur iteration stalls.
fn power_radius(m: &DenseMatrix) -> f64 {
    let n = m.nrows();
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut log_growth = 0.0;
    let steps = 2000;
    for _ in 0..steps {
        x = m.matvec(&x).expect("square");
        let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if nx == 0.0 {
            return 0.0;
        }
        log_growth += nx.ln();
        x.iter_mut().for_each(|v| *v /= nx);
    }
    (log_growth / steps as f64).exp()
}

pub fn spectral_radius<T: LinearOperator + ?Sized>(op: &T, n: usize) -> f64 {
    spectral_radius_dense(&materialize(op, n))
}

/// The chain ρ(EE) ≤ ‖EE‖_A ≤ ‖E‖_A² = ‖EE*‖_A = ρ(EE*), plus the
/// comparison ‖E₁E₁*‖_A ≤ ‖E₂E₂*‖_A for E₁ = EE, E₂ = EE*.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltyReport {
    pub rho_ee: f64,
    pub norm_ee: f64,
    pub norm_e_sq: f64,
    pub norm_eestar: f64,
    pub rho_eestar: f64,
    pub norm_e1e1star: f64,
    pub norm_e2e2star: f64,
}

pub const PENALTY_TOL: f64 = 1e-8;

impl PenaltyReport {
    /// Whether every link holds with slack `tol` relative to max(1, ‖E‖_A²).
    pub fn holds(&self, tol: f64) -> bool {
        let s = tol * self.norm_e_sq.max(1.0);
        self.rho_ee <= self.norm_ee + s
            && self.norm_ee <= self.norm_e_sq + s
            && (self.norm_e_sq - self.norm_eestar).abs() <= s
            && (self.norm_e_sq - self.rho_eestar).abs() <= s
            && self.norm_e1e1star <= self.norm_e2e2star + s * self.norm_e_sq.max(1.0)
    }

    /// ‖E‖_A² − ρ(EE): what symmetrizing costs relative to two plain steps.
    pub fn penalty(&self) -> f64 {
        self.norm_e_sq - self.rho_ee
    }
}

pub fn penalty_report_dense(e: &DenseMatrix, a: &SparseMatrix) -> Result<PenaltyReport> {
    let metric = AMetric::new(a)?;
    let es = a_adjoint(e, a)?;
    let ee = e.matmul(e)?;
    let eestar = e.matmul(&es)?;
    let norm_e = metric.norm(e);
    let e1s = a_adjoint(&ee, a)?;
    let e2s = a_adjoint(&eestar, a)?;
    Ok(PenaltyReport {
        rho_ee: spectral_radius_dense(&ee),
        norm_ee: metric.norm(&ee),
        norm_e_sq: norm_e * norm_e,
        norm_eestar: metric.norm(&eestar),
        rho_eestar: spectral_radius_dense(&eestar),
        norm_e1e1star: metric.norm(&ee.matmul(&e1s)?),
        norm_e2e2star: metric.norm(&eestar.matmul(&e2s)?),
    })
}

pub fn penalty_report<T: LinearOperator + ?Sized>(e: &T, a: &SparseMatrix) -> Result<PenaltyReport> {
    penalty_report_dense(&materialize(e, a.nrows()), a)
}

/// Extreme eigenvalues of BA in the A-inner product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionEstimate {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub kappa: f64,
    /// −λ_min(E) and λ_max(E) for E = I − BA
    pub c1: f64,
    pub c2: f64,
}

/// κ_A(BA) from the symmetric similarity LᵀBL of BA.
pub fn condition_estimate_dense(b: &DenseMatrix, a: &SparseMatrix) -> Result<ConditionEstimate> {
    let metric = AMetric::new(a)?;
    let lb = metric.l.transpose() * b.to_nalgebra() * &metric.l;
    let sym = (&lb + lb.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym).eigenvalues;
    let lambda_min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    let lambda_max = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(lambda_min > 0.0) {
        return Err(SchwarzError::NotSpd(format!("BA has eigenvalue {lambda_min:e} in the A-inner product")));
    }
    Ok(ConditionEstimate {
        lambda_min,
        lambda_max,
        kappa: lambda_max / lambda_min,
        c1: lambda_max - 1.0,
        c2: 1.0 - lambda_min,
    })
}

pub fn condition_estimate<T: LinearOperator + ?Sized>(b: &T, a: &SparseMatrix) -> Result<ConditionEstimate> {
    condition_estimate_dense(&materialize(b, a.nrows()), a)
}

/// E = I − BA densely.
pub fn error_propagator_dense(b: &DenseMatrix, a: &SparseMatrix) -> Result<DenseMatrix> {
    let ba = b.matmul(&a.to_dense())?;
    Ok(DenseMatrix::identity(a.nrows()).add_scaled(&ba, -1.0))
}
