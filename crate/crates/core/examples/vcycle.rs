//! Unaccelerated V-cycle iterations on the L-shape with a few smoothing
//! strategies, printing the A-norm error per step.

use schwarz::bench::{build_problem, ProblemName};
use schwarz::fem::CoarseMode;
use schwarz::krylov::{stationary_solve, StoppingRule};
use schwarz::schwarz::{MgConfig, Multigrid};

fn main() -> schwarz::Result<()> {
    let p = build_problem(ProblemName::Lshape, 5, CoarseMode::Galerkin, 1)?;
    let rule = StoppingRule::a_norm(p.reference.clone(), 100);
    for (pre, post) in [("f", "0"), ("f", "b"), ("ff", "ff")] {
        let mg = Multigrid::multiplicative(&p.hierarchy, MgConfig::new(pre, post)?)?;
        let r = stationary_solve(p.hierarchy.a(), &mg, &p.rhs, 1.0, &rule)?;
        let head: Vec<String> = r.history.iter().take(6).map(|e| format!("{e:.1e}")).collect();
        println!(
            "({pre},{post}): {} iterations, mean rate {:.3}, errors {} ...",
            r.iterations,
            r.mean_rate(),
            head.join(" ")
        );
    }
    Ok(())
}
