//! CG versus Bi-CGstab over symmetric and nonsymmetric V-cycles, with the
//! work spent per iteration.

use schwarz::bench::{build_problem, ProblemName};
use schwarz::fem::CoarseMode;
use schwarz::krylov::{bicgstab_solve, pcg_solve, StoppingRule};
use schwarz::schwarz::{MgConfig, Multigrid};

fn main() -> schwarz::Result<()> {
    let p = build_problem(ProblemName::Lshape, 5, CoarseMode::Galerkin, 1)?;
    let a = p.hierarchy.a();
    let rule = StoppingRule::a_norm(p.reference.clone(), 100);
    for (pre, post) in [("f", "b"), ("f", "0"), ("ff", "ff")] {
        let b = Multigrid::multiplicative(&p.hierarchy, MgConfig::new(pre, post)?)?;
        let cg = pcg_solve(a, &b, &p.rhs, &rule)?;
        let bi = bicgstab_solve(a, &b, &p.rhs, &rule)?;
        println!(
            "({pre},{post}) CG: {:?} after {} ({:.2} Mflop{}), Bi-CGstab: {:?} after {} ({:.2} Mflop)",
            cg.reason,
            cg.iterations,
            cg.flops as f64 / 1e6,
            if cg.uncertified { ", B not symmetric" } else { "" },
            bi.reason,
            bi.iterations,
            bi.flops as f64 / 1e6
        );
    }
    Ok(())
}
