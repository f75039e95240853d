//! P1 triangular finite elements: meshes, refinement, assembly and the
//! transfer operators of a nested hierarchy.

pub mod assemble;
pub mod hierarchy;
pub mod mesh;
pub mod meshes;
pub mod problem;
pub mod transfer;

pub use assemble::{assemble, assemble_unconstrained, element_mass, element_stiffness, eliminate_dirichlet};
pub use hierarchy::{build_hierarchy, CoarseMode, Hierarchy, Level, Transfer};
pub use mesh::{uniform_refine, Mesh};
pub use problem::{PointSource, ProblemSpec};
pub use transfer::{build_prolongation, galerkin_coarsen};
