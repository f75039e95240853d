//! Sufficient-condition checklists next to direct SPD certificates, with
//! the condition number and its contraction bound.

use schwarz::fem::{build_hierarchy, meshes, CoarseMode, ProblemSpec};
use schwarz::linalg::materialize;
use schwarz::schwarz::{MgConfig, Multigrid};
use schwarz::verify::{
    a_norm_dense, certify_dense, check_theorem_conditions, condition_estimate_dense, error_propagator_dense,
    MethodSetup,
};

fn main() -> schwarz::Result<()> {
    let h = build_hierarchy(&ProblemSpec::lshape(), &meshes::lshape_coarse(), 3, CoarseMode::Galerkin)?;
    for (pre, post) in [("f", "b"), ("f", "f"), ("ff", "bb")] {
        let cfg = MgConfig::new(pre, post)?;
        let list = check_theorem_conditions(&MethodSetup::MultMg { h: &h, cfg: &cfg })?;
        print!("({pre},{post}) {list}");
        let b = materialize(&Multigrid::multiplicative(&h, cfg)?, h.dim());
        let cert = certify_dense(&b);
        println!("  certificate: {cert}");
        if cert.passed {
            let delta = a_norm_dense(&error_propagator_dense(&b, h.a())?, h.a())?;
            let k = condition_estimate_dense(&b, h.a())?;
            println!(
                "  kappa {:.3} <= (1+d)/(1-d) = {:.3} with d = {delta:.3}",
                k.kappa,
                (1.0 + delta) / (1.0 - delta)
            );
        }
    }
    Ok(())
}
