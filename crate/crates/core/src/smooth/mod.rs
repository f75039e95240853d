//! Gauss-Seidel smoothers and the schedule algebra over {f, b}.

pub mod gauss_seidel;
pub mod schedule;

pub use gauss_seidel::{gs_sweep, gs_sweep_in_place, Direction};
pub use schedule::{adjoint_schedule, apply_schedule, Schedule, SubdomainSolverKind};
