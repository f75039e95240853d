//! Numerical certification on materialized operators: SPD certificates,
//! A-norms, spectral radii, condition numbers, the symmetrization penalty
//! and per-theorem checklists.

pub mod certify;
pub mod spectra;
pub mod theorems;

pub use certify::{certify_dense, certify_spd, SpdCertificate};
pub use spectra::{
    a_norm, a_norm_dense, condition_estimate, condition_estimate_dense, error_propagator_dense, penalty_report,
    penalty_report_dense, spectral_radius, spectral_radius_dense, AMetric, ConditionEstimate, PenaltyReport,
    PENALTY_TOL,
};
pub use theorems::{
    b_contraction, check_convergence_conditions, check_theorem_conditions, check_variational_convergence,
    smoother_matrix, Checklist, Condition, MethodSetup,
};

#[cfg(test)]
mod tests {
    use super::theorems::{COND_ADJOINT, COND_RESTRICTION};
    use super::*;
    use crate::fem::{build_hierarchy, meshes, CoarseMode, Hierarchy, ProblemSpec};
    use crate::linalg::{random, DenseMatrix, LinearOperator, SparseMatrix};
    use crate::schwarz::{MgConfig, Multigrid};
    use crate::smooth::Schedule;

    fn square(levels: usize) -> Hierarchy {
        build_hierarchy(&ProblemSpec::laplace(|x, y| x * y), &meshes::unit_square(2), levels, CoarseMode::Galerkin)
            .unwrap()
    }

    fn inverse(a: &SparseMatrix) -> DenseMatrix {
        a.to_dense().lu().unwrap().inverse()
    }

    #[test]
    fn trivial_norms_and_radii() {
        let a = SparseMatrix::laplacian_1d(6);
        let i = DenseMatrix::identity(6);
        assert!((a_norm_dense(&i, &a).unwrap() - 1.0).abs() < 1e-12);
        assert!((spectral_radius_dense(&i) - 1.0).abs() < 1e-12);
        let nil = DenseMatrix::from_rows(&[vec![0.0, 1.0, 2.0], vec![0.0, 0.0, 3.0], vec![0.0, 0.0, 0.0]]);
        assert!(spectral_radius_dense(&nil) < 1e-6);
    }

    #[test]
    fn forward_gs_radius_below_a_norm() {
        let a = SparseMatrix::laplacian_1d(20);
        let s = smoother_matrix(&Schedule::new("f").unwrap(), &a).unwrap();
        let e = error_propagator_dense(&s, &a).unwrap();
        let rho = spectral_radius_dense(&e);
        let norm = a_norm_dense(&e, &a).unwrap();
        assert!(rho < norm - 1e-4, "{rho} vs {norm}");
        // power iteration agrees with the dense SVD
        assert!((a_norm(&e, &a).unwrap() - norm).abs() < 1e-6);
        // forward GS on a tridiagonal matrix: ρ = cos²(π/(n+1))
        let exact = (std::f64::consts::PI / 21.0).cos().powi(2);
        assert!((rho - exact).abs() < 1e-8);
    }

    #[test]
    fn radius_equals_a_norm_for_spd_b() {
        let h = square(3);
        let mg = Multigrid::multiplicative(&h, MgConfig::new("f", "b").unwrap()).unwrap();
        let b = crate::linalg::materialize(&mg, mg.dim());
        assert!(certify_dense(&b).passed);
        let e = error_propagator_dense(&b, h.a()).unwrap();
        let rho = spectral_radius_dense(&e);
        let norm = a_norm_dense(&e, h.a()).unwrap();
        assert!((rho - norm).abs() < 1e-7 * norm);
    }

    #[test]
    fn penalty_chain_equality_case() {
        let a = SparseMatrix::laplacian_1d(8);
        // Jacobi propagator is A-self-adjoint
        let d: Vec<f64> = a.diagonal().iter().map(|v| 0.5 / v).collect();
        let e = error_propagator_dense(&SparseMatrix::diag(&d).to_dense(), &a).unwrap();
        let p = penalty_report_dense(&e, &a).unwrap();
        for v in [p.norm_ee, p.norm_e_sq, p.norm_eestar, p.rho_eestar] {
            assert!((v - p.rho_ee).abs() < 1e-10);
        }
        assert!(p.holds(PENALTY_TOL));
    }

    #[test]
    fn penalty_chain_strict_for_forward_only_cycle() {
        let h = square(2);
        let mg = Multigrid::multiplicative(&h, MgConfig::new("f", "").unwrap()).unwrap();
        let b = crate::linalg::materialize(&mg, mg.dim());
        let p = penalty_report_dense(&error_propagator_dense(&b, h.a()).unwrap(), h.a()).unwrap();
        assert!(p.holds(PENALTY_TOL));
        assert!(p.rho_ee < p.norm_ee - 1e-6 && p.norm_ee < p.norm_e_sq - 1e-6, "{p:?}");
        assert!(p.penalty() > 0.0);
    }

    #[test]
    fn penalty_chain_on_random_propagators() {
        let mut rng = random::rng(17);
        for _ in 0..10 {
            let a = SparseMatrix::from_dense(&random::random_spd(&mut rng, 12));
            let b = random::random_matrix(&mut rng, 12, 12);
            let e = error_propagator_dense(&b, &a).unwrap();
            assert!(penalty_report_dense(&e, &a).unwrap().holds(PENALTY_TOL));
        }
    }

    #[test]
    fn condition_estimates() {
        let a = SparseMatrix::laplacian_1d(20);
        let exact = condition_estimate_dense(&inverse(&a), &a).unwrap();
        assert!((exact.kappa - 1.0).abs() < 1e-10);

        // Jacobi: BA = D⁻¹A has real positive spectrum; compare with Schur
        let d: Vec<f64> = a.diagonal().iter().map(|v| 1.0 / v).collect();
        let b = SparseMatrix::diag(&d).to_dense();
        let est = condition_estimate_dense(&b, &a).unwrap();
        let ba = b.matmul(&a.to_dense()).unwrap();
        let eig = ba.to_nalgebra().symmetric_eigenvalues();
        let (lo, hi) = eig.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)));
        assert!((est.lambda_min - lo).abs() < 1e-9 && (est.lambda_max - hi).abs() < 1e-9);

        let delta = a_norm_dense(&error_propagator_dense(&b.scaled(0.5), &a).unwrap(), &a).unwrap();
        let half = condition_estimate_dense(&b.scaled(0.5), &a).unwrap();
        assert!(delta < 1.0);
        assert!(half.kappa <= (1.0 + delta) / (1.0 - delta) * (1.0 + 1e-12));
    }

    #[test]
    fn condition_estimate_rejects_indefinite() {
        let a = SparseMatrix::laplacian_1d(4);
        assert!(condition_estimate_dense(&DenseMatrix::identity(4).scaled(-1.0), &a).is_err());
    }

    #[test]
    fn symmetric_vcycle_passes_every_condition() {
        let h = square(3);
        let cfg = MgConfig::new("f", "b").unwrap();
        let list = check_theorem_conditions(&MethodSetup::MultMg { h: &h, cfg: &cfg }).unwrap();
        assert!(list.all_passed(), "{list}");
        assert_eq!(list.conditions.len(), 7);
        assert!(check_variational_convergence(&h, &cfg).unwrap().all_passed());
        assert!(check_convergence_conditions(&h, &cfg).unwrap().all_passed());
    }

    #[test]
    fn non_adjoint_post_smoother_is_flagged() {
        let h = square(3);
        let cfg = MgConfig::new("f", "f").unwrap();
        let list = check_theorem_conditions(&MethodSetup::MultMg { h: &h, cfg: &cfg }).unwrap();
        let c = list.get(COND_ADJOINT).unwrap();
        assert!(!c.passed && c.evidence > 1e-6);
        assert_eq!(list.failed(), vec![COND_ADJOINT]);
    }

    #[test]
    fn injection_restriction_is_flagged() {
        let mut h = square(3);
        let r = h.injection(2);
        h.set_restriction(2, r).unwrap();
        let cfg = MgConfig::new("f", "b").unwrap();
        let list = check_theorem_conditions(&MethodSetup::MultMg { h: &h, cfg: &cfg }).unwrap();
        assert!(!list.get(COND_RESTRICTION).unwrap().passed);
    }

    #[test]
    fn spd_certificates() {
        let a = SparseMatrix::laplacian_1d(10);
        assert!(certify_spd(&a, 10).unwrap().passed);
        let f = smoother_matrix(&Schedule::new("f").unwrap(), &a).unwrap();
        let c = certify_dense(&f);
        assert!(!c.passed && c.symmetry_defect > 1e-6);
        assert!(certify_spd(&a, 11).is_err());
    }
}
