//! Sparse and dense linear algebra: SpMV, inner products, dense solves,
//! operator materialization and the A-adjoint.

pub mod dense;
pub mod flops;
pub mod io;
pub mod lanczos;
pub mod ops;
pub mod random;
pub mod sparse;
pub mod vector;

pub use dense::{dense_solve, DenseMatrix, Lu};
pub use lanczos::{lanczos_extremes_fn, spd_smoke_test, SpdSmoke};
pub use ops::{
    a_adjoint, linearity_defect, materialize, ErrorPropagator, FnOperator, Identity, InnerProduct, LinearOperator,
    Scaled,
};
pub use sparse::SparseMatrix;
