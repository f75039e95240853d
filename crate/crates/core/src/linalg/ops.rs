//! Matrix-free linear operators, inner products, materialization and the
//! A-adjoint.

use rand::Rng;

use super::dense::DenseMatrix;
use super::lanczos::spd_smoke_test;
use super::random;
use super::sparse::SparseMatrix;
use super::vector;
use crate::error::{Result, SchwarzError};

/// A square linear map on ℝⁿ known through its action.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64]) -> Vec<f64>;

    /// One stationary step u ← u + ω·B(f − Au). Sweeping methods override
    /// this to start from u instead of forming the residual.
    fn stationary_step(&self, a: &SparseMatrix, u: &mut [f64], f: &[f64], omega: f64) {
        let r = a.residual(u, f);
        let z = self.apply(&r);
        vector::axpy(omega, &z, u);
    }

    /// The action without a positive scalar damping factor, for solvers
    /// whose iterates do not depend on that factor.
    fn apply_undamped(&self, x: &[f64]) -> Vec<f64> {
        self.apply(x)
    }
}

impl LinearOperator for SparseMatrix {
    fn dim(&self) -> usize {
        self.nrows()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows()];
        self.spmv_into(x, &mut y);
        y
    }
}

impl LinearOperator for DenseMatrix {
    fn dim(&self) -> usize {
        self.nrows()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.matvec(x).expect("operator dimension")
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        (**self).apply(x)
    }
    fn stationary_step(&self, a: &SparseMatrix, u: &mut [f64], f: &[f64], omega: f64) {
        (**self).stationary_step(a, u, f, omega)
    }
    fn apply_undamped(&self, x: &[f64]) -> Vec<f64> {
        (**self).apply_undamped(x)
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        (**self).apply(x)
    }
    fn stationary_step(&self, a: &SparseMatrix, u: &mut [f64], f: &[f64], omega: f64) {
        (**self).stationary_step(a, u, f, omega)
    }
    fn apply_undamped(&self, x: &[f64]) -> Vec<f64> {
        (**self).apply_undamped(x)
    }
}

/// Wraps a closure as an operator.
pub struct FnOperator<F> {
    n: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> Vec<f64>> FnOperator<F> {
    pub fn new(n: usize, f: F) -> Self {
        Self { n, f }
    }
}

impl<F: Fn(&[f64]) -> Vec<f64>> LinearOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.n
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        (self.f)(x)
    }
}

pub struct Identity(pub usize);

impl LinearOperator for Identity {
    fn dim(&self) -> usize {
        self.0
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.to_vec()
    }
}

/// ω·B
pub struct Scaled<T> {
    pub op: T,
    pub omega: f64,
}

impl<T: LinearOperator> LinearOperator for Scaled<T> {
    fn dim(&self) -> usize {
        self.op.dim()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.op.apply(x);
        vector::scale(self.omega, &mut y);
        y
    }
    fn apply_undamped(&self, x: &[f64]) -> Vec<f64> {
        if self.omega > 0.0 {
            self.op.apply_undamped(x)
        } else {
            self.apply(x)
        }
    }
}

/// Error propagator E = I − ω·B·A of the linear iteration driven by B.
pub struct ErrorPropagator<'a, B: ?Sized> {
    pub a: &'a SparseMatrix,
    pub b: &'a B,
    pub omega: f64,
}

impl<'a, B: LinearOperator + ?Sized> ErrorPropagator<'a, B> {
    pub fn new(a: &'a SparseMatrix, b: &'a B) -> Self {
        Self { a, b, omega: 1.0 }
    }
}

impl<B: LinearOperator + ?Sized> LinearOperator for ErrorPropagator<'_, B> {
    fn dim(&self) -> usize {
        self.a.nrows()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let ax = self.a.apply(x);
        let bax = self.b.apply(&ax);
        let mut y = x.to_vec();
        vector::axpy(-self.omega, &bax, &mut y);
        y
    }
}

/// The two inner products used throughout: Euclidean and (x, y)_A = (Ax, y).
#[derive(Debug, Clone, Copy)]
pub enum InnerProduct<'a> {
    Euclidean,
    AWeighted(&'a SparseMatrix),
}

impl<'a> InnerProduct<'a> {
    /// A-weighted inner product; `a` must pass the SPD smoke test.
    pub fn a_weighted(a: &'a SparseMatrix) -> Result<Self> {
        let smoke = spd_smoke_test(a)?;
        if !smoke.passed {
            return Err(SchwarzError::NotSpd(smoke.to_string()));
        }
        Ok(Self::AWeighted(a))
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != y.len() {
            return Err(SchwarzError::DimensionMismatch { expected: x.len(), got: y.len() });
        }
        match self {
            Self::Euclidean => Ok(vector::dot(x, y)),
            Self::AWeighted(a) => Ok(vector::dot(&a.spmv(x)?, y)),
        }
    }

    pub fn norm(&self, x: &[f64]) -> Result<f64> {
        Ok(self.inner(x, x)?.max(0.0).sqrt())
    }
}

/// Dense matrix whose j-th column is `op(e_j)`.
pub fn materialize<T: LinearOperator + ?Sized>(op: &T, n: usize) -> DenseMatrix {
    let cols: Vec<Vec<f64>> = (0..n).map(|j| op.apply(&vector::unit(n, j))).collect();
    DenseMatrix::from_columns(n, &cols)
}

/// Largest relative defect of op(αx + βy) − α·op(x) − β·op(y) over random probes.
pub fn linearity_defect<T: LinearOperator + ?Sized>(op: &T, probes: usize, seed: u64) -> f64 {
    let n = op.dim();
    let mut rng = random::rng(seed);
    let mut worst = 0.0_f64;
    for _ in 0..probes {
        let x = random::random_vector(&mut rng, n);
        let y = random::random_vector(&mut rng, n);
        let (alpha, beta): (f64, f64) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let combo: Vec<f64> = x.iter().zip(&y).map(|(a, b)| alpha * a + beta * b).collect();
        let lhs = op.apply(&combo);
        let ox = op.apply(&x);
        let oy = op.apply(&y);
        let rhs: Vec<f64> = ox.iter().zip(&oy).map(|(a, b)| alpha * a + beta * b).collect();
        let scale = vector::max_abs(&lhs).max(vector::max_abs(&rhs)).max(f64::MIN_POSITIVE);
        let diff = lhs.iter().zip(&rhs).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        worst = worst.max(diff / scale);
    }
    worst
}

/// A-adjoint M* = A⁻¹ Mᵀ A, computed through a dense factorization of A.
pub fn a_adjoint(m: &DenseMatrix, a: &SparseMatrix) -> Result<DenseMatrix> {
    let n = a.nrows();
    if !m.is_square() || m.nrows() != n {
        return Err(SchwarzError::DimensionMismatch { expected: n, got: m.nrows() });
    }
    let smoke = spd_smoke_test(a)?;
    if !smoke.passed {
        return Err(SchwarzError::NotSpd(smoke.to_string()));
    }
    let lu = a.to_dense().lu()?;
    let mt_a = m.transpose().matmul(&a.to_dense())?;
    let cols: Vec<Vec<f64>> = (0..n).map(|j| lu.solve(&mt_a.column(j))).collect::<Result<_>>()?;
    Ok(DenseMatrix::from_columns(n, &cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{random_matrix, random_sparse_spd, random_vector, rng};

    #[test]
    fn euclidean_inner() {
        assert_eq!(InnerProduct::Euclidean.inner(&[3.0, 4.0], &[3.0, 4.0]).unwrap(), 25.0);
    }

    #[test]
    fn a_weighted_scaled_identity() {
        let a = SparseMatrix::identity(2).scaled(2.0);
        let ip = InnerProduct::a_weighted(&a).unwrap();
        assert_eq!(ip.inner(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), 2.0);
    }

    #[test]
    fn a_weighted_rejects_indefinite() {
        let a = SparseMatrix::diag(&[1.0, -1.0]);
        assert!(matches!(InnerProduct::a_weighted(&a), Err(SchwarzError::NotSpd(_))));
    }

    #[test]
    fn inner_dimension_mismatch() {
        assert!(InnerProduct::Euclidean.inner(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn a_weighted_is_symmetric() {
        let mut r = rng(11);
        for _ in 0..20 {
            let a = random_sparse_spd(&mut r, 20, 4);
            let ip = InnerProduct::AWeighted(&a);
            let x = random_vector(&mut r, 20);
            let y = random_vector(&mut r, 20);
            let (xy, yx) = (ip.inner(&x, &y).unwrap(), ip.inner(&y, &x).unwrap());
            assert!((xy - yx).abs() < 1e-13 * xy.abs().max(1.0));
        }
    }

    #[test]
    fn materialize_sparse_and_identity() {
        let a = SparseMatrix::laplacian_1d(4);
        assert_eq!(materialize(&a, 4), a.to_dense());
        assert_eq!(materialize(&Identity(5), 5), DenseMatrix::identity(5));
    }

    #[test]
    fn linearity_probe_on_matrix() {
        let mut r = rng(5);
        let m = random_matrix(&mut r, 12, 12);
        assert!(linearity_defect(&m, 8, 1) < 1e-12);
        let nonlinear = FnOperator::new(3, |x: &[f64]| x.iter().map(|v| v * v).collect());
        assert!(linearity_defect(&nonlinear, 4, 1) > 1e-3);
    }

    #[test]
    fn adjoint_of_symmetric_with_identity_a() {
        let mut r = rng(2);
        let m = random_matrix(&mut r, 5, 5).symmetric_part();
        let adj = a_adjoint(&m, &SparseMatrix::identity(5)).unwrap();
        assert!(adj.add_scaled(&m, -1.0).max_abs() < 1e-14);
    }

    #[test]
    fn adjoint_defining_property_and_involution() {
        let mut r = rng(9);
        let a = random_sparse_spd(&mut r, 30, 6);
        let m = random_matrix(&mut r, 30, 30);
        let adj = a_adjoint(&m, &a).unwrap();
        let ip = InnerProduct::AWeighted(&a);
        for _ in 0..5 {
            let u = random_vector(&mut r, 30);
            let v = random_vector(&mut r, 30);
            let lhs = ip.inner(&m.matvec(&u).unwrap(), &v).unwrap();
            let rhs = ip.inner(&u, &adj.matvec(&v).unwrap()).unwrap();
            assert!((lhs - rhs).abs() < 1e-11 * lhs.abs().max(1.0));
        }
        let back = a_adjoint(&adj, &a).unwrap();
        assert!(back.add_scaled(&m, -1.0).frobenius_norm() <= 1e-10 * m.frobenius_norm());
    }
}
