//! Additive multigrid: the damped stationary iteration depends on omega,
//! the CG-accelerated one does not.

use schwarz::bench::{build_problem, ProblemName};
use schwarz::fem::CoarseMode;
use schwarz::krylov::{pcg_solve, stationary_solve, StoppingRule};
use schwarz::schwarz::{MgConfig, Multigrid};

fn main() -> schwarz::Result<()> {
    let p = build_problem(ProblemName::Lshape, 5, CoarseMode::Galerkin, 1)?;
    let a = p.hierarchy.a();
    let rule = StoppingRule::a_norm(p.reference.clone(), 1000);
    for omega in [0.3, 0.45, 0.6] {
        let b = Multigrid::additive(&p.hierarchy, MgConfig::additive("fb", omega)?)?;
        let plain = stationary_solve(a, &b, &p.rhs, 1.0, &rule)?;
        let cg = pcg_solve(a, &b, &p.rhs, &rule)?;
        println!(
            "omega {omega}: unaccelerated {:?} after {}, CG {} iterations",
            plain.reason, plain.iterations, cg.iterations
        );
    }
    Ok(())
}
