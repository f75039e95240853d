//! Builds the two benchmark hierarchies and prints their sizes and the
//! Galerkin defect between assembled and coarsened operators.

use schwarz::fem::{build_hierarchy, meshes, CoarseMode, ProblemSpec};

fn main() -> schwarz::Result<()> {
    for (name, spec, mesh) in [
        ("lshape", ProblemSpec::lshape(), meshes::lshape_coarse()),
        ("pbe2d", ProblemSpec::pbe_surrogate(), meshes::pbe_coarse()),
    ] {
        let h = build_hierarchy(&spec, &mesh, 5, CoarseMode::Discretized)?;
        println!("{name}");
        let defects = h.galerkin_defects()?;
        for (k, l) in h.levels.iter().enumerate() {
            let defect = if k == 0 { String::new() } else { format!("  |A_(k-1) - P'A_k P| = {:.2e}", defects[k - 1]) };
            println!("  level {k}: {:>5} unknowns, {:>6} nonzeros{defect}", l.dim(), l.a.nnz());
        }
    }
    Ok(())
}
