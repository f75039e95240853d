//! Overlapping domain decomposition on the L-shape: one subdomain per coarse
//! element plus a coarse space, swept multiplicatively or summed additively.

use schwarz::bench::{build_problem, ProblemName};
use schwarz::fem::CoarseMode;
use schwarz::krylov::{bicgstab_solve, pcg_solve, stationary_solve, StoppingRule};
use schwarz::schwarz::{DdPreconditioner, Sweep};
use schwarz::smooth::SubdomainSolverKind;

fn main() -> schwarz::Result<()> {
    let p = build_problem(ProblemName::Lshape, 4, CoarseMode::Galerkin, 1)?;
    let a = p.hierarchy.a();
    let sizes: Vec<usize> = p.decomposition.subdomains.iter().map(|s| s.len()).collect();
    println!(
        "{} subdomains, sizes {}..{}, {} unknowns",
        sizes.len(),
        sizes.iter().min().unwrap(),
        sizes.iter().max().unwrap(),
        a.nrows()
    );
    let rule = StoppingRule::a_norm(p.reference.clone(), 500);
    for solver in [SubdomainSolverKind::Exact, SubdomainSolverKind::Nonsymmetric] {
        let d = p.decomposition.clone().with_solver(solver)?;
        for sweep in [Sweep::Forw, Sweep::ForwBack, Sweep::ForwForw] {
            let b = DdPreconditioner::multiplicative(&d, sweep)?;
            let it = stationary_solve(a, &b, &p.rhs, 1.0, &rule)?.iterations;
            let bi = bicgstab_solve(a, &b, &p.rhs, &rule)?.iterations;
            println!("mult {sweep} {}: unaccelerated {it}, Bi-CGstab {bi}", solver.name());
        }
        let b = DdPreconditioner::additive(&d, 1.0)?;
        println!("add {}: CG {}", solver.name(), pcg_solve(a, &b, &p.rhs, &rule)?.iterations);
    }
    Ok(())
}
