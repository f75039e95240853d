//! Multiplicative and additive Schwarz preconditioners for SPD systems.
//!
//! The crate builds the four classical Schwarz methods (V-cycle multigrid,
//! additive multigrid, multiplicative and additive overlapping domain
//! decomposition) as matrix-free preconditioner actions `r ↦ B r`, and
//! accelerates them with preconditioned conjugate gradients or Bi-CGstab.
//! A verification layer materializes the implicitly defined operators at
//! desk scale and certifies symmetry and positivity of `B`, A-norms and
//! spectral radii of error propagators, and the symmetrization penalty
//! `ρ(EE) ≤ ‖EE‖_A ≤ ‖E‖_A² = ρ(EE*)`.
//!
//! Modules, bottom-up:
//!
//! - [`linalg`]: CSR matrices, dense LU, inner products, A-adjoint.
//! - [`fem`]: P1 triangles, uniform refinement, assembly, transfer operators.
//! - [`smooth`]: Gauss-Seidel sweeps and `f`/`b` smoother schedules.
//! - [`schwarz`]: the preconditioner actions and overlapping subdomains.
//! - [`krylov`]: stationary iteration, PCG and Bi-CGstab.
//! - [`verify`]: certificates, norms, spectra and theorem checklists.
//! - [`bench`]: test problems, experiment grids and table output.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod error;
pub mod fem;
pub mod krylov;
pub mod linalg;
pub mod schwarz;
pub mod smooth;
pub mod verify;

pub use error::{Result, SchwarzError};
