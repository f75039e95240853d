//! Gauss-Seidel schedules: adjoints, and how far each is from symmetric.

use schwarz::linalg::SparseMatrix;
use schwarz::smooth::Schedule;
use schwarz::verify::{certify_dense, smoother_matrix};

fn main() -> schwarz::Result<()> {
    let a = SparseMatrix::laplacian_1d(30);
    for word in ["f", "b", "fb", "ff", "ffbb", "fbfb"] {
        let s = Schedule::new(word)?;
        let cert = certify_dense(&smoother_matrix(&s, &a)?);
        println!(
            "{word:>5}: adjoint {:>5}, self-adjoint {:<5} relative asymmetry {:.2e}",
            s.adjoint().word(),
            s.is_self_adjoint(),
            cert.symmetry_defect
        );
    }
    Ok(())
}
