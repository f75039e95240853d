//! Two nonsymmetric V-cycle steps against one symmetrized step:
//! rho(EE) <= |EE|_A <= |E|_A^2 = rho(EE*).

use schwarz::fem::{build_hierarchy, meshes, CoarseMode, ProblemSpec};
use schwarz::linalg::ErrorPropagator;
use schwarz::schwarz::{MgConfig, Multigrid};
use schwarz::verify::penalty_report;

fn main() -> schwarz::Result<()> {
    let h = build_hierarchy(&ProblemSpec::lshape(), &meshes::lshape_coarse(), 3, CoarseMode::Galerkin)?;
    for (pre, post) in [("f", "0"), ("ff", "0"), ("f", "f"), ("f", "b")] {
        let mg = Multigrid::multiplicative(&h, MgConfig::new(pre, post)?)?;
        let p = penalty_report(&ErrorPropagator::new(h.a(), &mg), h.a())?;
        println!(
            "({pre},{post}) rho(EE) {:.4}  |EE|_A {:.4}  |E|_A^2 {:.4}  penalty {:.4}",
            p.rho_ee,
            p.norm_ee,
            p.norm_e_sq,
            p.penalty()
        );
    }
    Ok(())
}
