//! Exports a hierarchy as MatrixMarket files and reads the fine operator
//! back.

use schwarz::fem::{build_hierarchy, meshes, CoarseMode, ProblemSpec};
use schwarz::linalg::io::read_matrix_market;

fn main() -> schwarz::Result<()> {
    let h = build_hierarchy(&ProblemSpec::lshape(), &meshes::lshape_coarse(), 3, CoarseMode::Galerkin)?;
    let dir = std::env::temp_dir().join("schwarz-hierarchy");
    h.export(&dir)?;
    let mut names: Vec<String> =
        std::fs::read_dir(&dir)?.filter_map(|e| e.ok()).map(|e| e.file_name().to_string_lossy().into_owned()).collect();
    names.sort();
    println!("wrote {} to {}", names.join(", "), dir.display());
    let a = read_matrix_market(dir.join(format!("A_{}.mtx", h.n_levels() - 1)))?;
    println!("fine operator read back: {}x{}, {} nonzeros, equal: {}", a.nrows(), a.ncols(), a.nnz(), &a == h.a());
    Ok(())
}
