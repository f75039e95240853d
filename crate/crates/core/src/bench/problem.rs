//! Test problems with a manufactured discrete reference solution.

use crate::error::{Result, SchwarzError};
use crate::fem::{build_hierarchy, meshes, CoarseMode, Hierarchy, ProblemSpec};
use crate::krylov::{pcg_solve, StoppingRule};
use crate::schwarz::{build_decomposition, Decomposition, MgConfig, Multigrid};

use super::config::ProblemName;

/// Relative residual of the reference solve.
pub const REFERENCE_TOL: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct BenchProblem {
    pub name: ProblemName,
    pub hierarchy: Hierarchy,
    pub decomposition: Decomposition,
    /// f = A u_ref, so u_ref is the discrete solution to rounding
    pub rhs: Vec<f64>,
    pub reference: Vec<f64>,
}

pub fn problem_spec(name: ProblemName) -> ProblemSpec {
    match name {
        ProblemName::Pbe2d => ProblemSpec::pbe_surrogate(),
        ProblemName::Lshape => ProblemSpec::lshape(),
        ProblemName::Square => ProblemSpec::laplace(|x, y| x + y),
    }
}

pub fn base_mesh(name: ProblemName) -> crate::fem::Mesh {
    match name {
        ProblemName::Pbe2d => meshes::pbe_coarse(),
        ProblemName::Lshape => meshes::lshape_coarse(),
        ProblemName::Square => meshes::unit_square(3),
    }
}

/// Builds the hierarchy, the overlapping decomposition and the reference
/// solution. The assembled load is solved by PCG with a symmetric V-cycle
/// and the right-hand side is then reset to A u_ref.
pub fn build_problem(name: ProblemName, levels: usize, mode: CoarseMode, overlap: usize) -> Result<BenchProblem> {
    let hierarchy = build_hierarchy(&problem_spec(name), &base_mesh(name), levels, mode)?;
    let decomposition = build_decomposition(&hierarchy, overlap)?;
    let mg = Multigrid::multiplicative(&hierarchy, MgConfig::symmetric("fb")?)?;
    let rule = StoppingRule::residual(500).with_tol(REFERENCE_TOL);
    let report = pcg_solve(hierarchy.a(), &mg, &hierarchy.rhs, &rule)?;
    if !report.converged {
        return Err(SchwarzError::NoConvergence {
            steps: report.iterations,
            last: *report.history.last().unwrap_or(&f64::NAN),
            previous: report.history.iter().rev().nth(1).copied().unwrap_or(f64::NAN),
        });
    }
    let reference = report.solution;
    let rhs = hierarchy.a().spmv(&reference)?;
    Ok(BenchProblem { name, hierarchy, decomposition, rhs, reference })
}
