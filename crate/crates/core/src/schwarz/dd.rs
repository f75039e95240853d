//! Overlapping domain decomposition: subdomains from the coarsest mesh and
//! the multiplicative and additive Schwarz actions built on them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SchwarzError};
use crate::fem::Hierarchy;
use crate::linalg::{flops, vector, DenseMatrix, LinearOperator, Lu, SparseMatrix};
use crate::smooth::SubdomainSolverKind;

#[derive(Debug, Clone)]
pub struct Subdomain {
    /// sorted fine unknowns
    pub indices: Vec<usize>,
    /// principal submatrix of A on `indices`
    pub a: SparseMatrix,
    lu: Option<Lu>,
}

impl Subdomain {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct CoarseSpace {
    /// I_0: coarse to fine
    pub prolongation: SparseMatrix,
    /// I^0 = c_0·I_0ᵀ
    pub restriction: SparseMatrix,
    pub a: SparseMatrix,
    pub c: f64,
    lu: Lu,
}

/// Order of subdomain visits in one multiplicative application.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sweep {
    /// one forward pass, then the coarse space
    Forw,
    /// forward pass, coarse space, reverse pass
    ForwBack,
    /// two rounds of (forward pass, coarse space)
    ForwForw,
}

impl Sweep {
    pub fn name(self) -> &'static str {
        match self {
            Sweep::Forw => "forw",
            Sweep::ForwBack => "forw_back",
            Sweep::ForwForw => "forw_forw",
        }
    }
}

impl fmt::Display for Sweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Sweep {
    type Err = SchwarzError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forw" => Ok(Sweep::Forw),
            "forw_back" | "forw/back" => Ok(Sweep::ForwBack),
            "forw_forw" | "forw/forw" => Ok(Sweep::ForwForw),
            other => Err(SchwarzError::Config(format!("unknown sweep '{other}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    /// fine operator A
    pub a: SparseMatrix,
    pub subdomains: Vec<Subdomain>,
    pub coarse: Option<CoarseSpace>,
    pub solver: SubdomainSolverKind,
    /// how many times the coarse correction is repeated per visit
    pub coarse_visits: usize,
}

/// One subdomain per coarsest element: the fine vertices of the closed
/// element, grown by `overlap` layers of fine triangles. The coarse space is
/// the coarsest level with the composite prolongation.
pub fn build_decomposition(h: &Hierarchy, overlap: usize) -> Result<Decomposition> {
    let fine = &h.finest().mesh;
    let coarse_mesh = &h.levels[0].mesh;
    let depth = h.n_levels() - 1;
    let per = 4usize.pow(depth as u32);
    let vt = fine.vertex_triangles();
    let constrained = fine.boundary();
    let mut subdomains = Vec::with_capacity(coarse_mesh.n_triangles());
    for t in 0..coarse_mesh.n_triangles() {
        let mut member = vec![false; fine.n_vertices()];
        for child in t * per..(t + 1) * per {
            for &v in &fine.triangles()[child] {
                member[v] = true;
            }
        }
        for _ in 0..overlap {
            let current: Vec<usize> = (0..member.len()).filter(|&v| member[v]).collect();
            for v in current {
                for &tri in &vt[v] {
                    for &w in &fine.triangles()[tri] {
                        member[w] = true;
                    }
                }
            }
        }
        let indices: Vec<usize> = (0..member.len()).filter(|&v| member[v]).collect();
        if indices.iter().all(|&v| constrained[v]) {
            return Err(SchwarzError::EmptySubdomain(t));
        }
        subdomains.push(indices);
    }
    let coarse = CoarseSpace::new(h.composite_prolongation(0)?, h.levels[0].a.clone(), 1.0)?;
    Decomposition::from_index_sets(h.a().clone(), subdomains, Some(coarse), SubdomainSolverKind::Exact)
}

impl CoarseSpace {
    pub fn new(prolongation: SparseMatrix, a: SparseMatrix, c: f64) -> Result<Self> {
        let restriction = prolongation.transpose().scaled(c);
        let lu = a.to_dense().lu()?;
        Ok(Self { prolongation, restriction, a, c, lu })
    }

    fn correct(&self, r: &[f64]) -> Result<Vec<f64>> {
        let rc = self.restriction.spmv(r)?;
        let xc = self.lu.solve(&rc)?;
        self.prolongation.spmv(&xc)
    }
}

impl Decomposition {
    pub fn from_index_sets(
        a: SparseMatrix,
        sets: Vec<Vec<usize>>,
        coarse: Option<CoarseSpace>,
        solver: SubdomainSolverKind,
    ) -> Result<Self> {
        let mut covered = vec![false; a.nrows()];
        let mut subdomains = Vec::with_capacity(sets.len());
        for (k, mut indices) in sets.into_iter().enumerate() {
            indices.sort_unstable();
            indices.dedup();
            if indices.is_empty() {
                return Err(SchwarzError::EmptySubdomain(k));
            }
            for &i in &indices {
                covered[i] = true;
            }
            let local = a.principal_submatrix(&indices);
            subdomains.push(Subdomain { indices, a: local, lu: None });
        }
        if let Some(i) = covered.iter().position(|&c| !c) {
            return Err(SchwarzError::Config(format!("unknown {i} is not covered by any subdomain")));
        }
        let mut d = Self { a, subdomains, coarse, solver, coarse_visits: 1 };
        d.set_solver(solver)?;
        Ok(d)
    }

    /// Switches the local solver, factoring local matrices when exact.
    pub fn set_solver(&mut self, solver: SubdomainSolverKind) -> Result<()> {
        self.solver = solver;
        for s in &mut self.subdomains {
            s.lu = match solver {
                SubdomainSolverKind::Exact if s.lu.is_none() => Some(s.a.to_dense().lu()?),
                SubdomainSolverKind::Exact => s.lu.take(),
                _ => None,
            };
        }
        Ok(())
    }

    pub fn with_solver(mut self, solver: SubdomainSolverKind) -> Result<Self> {
        self.set_solver(solver)?;
        Ok(self)
    }

    pub fn without_coarse(mut self) -> Self {
        self.coarse = None;
        self
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    fn local_solve(&self, s: &Subdomain, r: &[f64], reverse: bool) -> Result<Vec<f64>> {
        match self.solver.schedule(reverse) {
            None => s.lu.as_ref().expect("exact solver is factored").solve(r),
            Some(sched) => sched.solve(&s.a, r),
        }
    }

    fn local_schedule_is_legal(&self, sweep: Option<Sweep>) -> Result<()> {
        if self.solver == SubdomainSolverKind::Adjointed && sweep != Some(Sweep::ForwBack) {
            return Err(SchwarzError::Config("adjointed local solves need a forward/backward sweep pair".into()));
        }
        Ok(())
    }

    /// (r − A u) restricted to the rows of one subdomain.
    fn local_residual(&self, s: &Subdomain, r: &[f64], u: &[f64]) -> Vec<f64> {
        let mut nnz = 0;
        let out = s
            .indices
            .iter()
            .map(|&i| {
                let (cols, vals) = self.a.row(i);
                nnz += cols.len();
                r[i] - cols.iter().zip(vals).map(|(&j, &v)| v * u[j]).sum::<f64>()
            })
            .collect();
        flops::add(2 * nnz + s.len());
        out
    }

    fn pass(&self, r: &[f64], u: &mut [f64], reverse: bool) -> Result<()> {
        let order: Box<dyn Iterator<Item = &Subdomain>> =
            if reverse { Box::new(self.subdomains.iter().rev()) } else { Box::new(self.subdomains.iter()) };
        for s in order {
            let rl = self.local_residual(s, r, u);
            let e = self.local_solve(s, &rl, reverse)?;
            for (&i, ei) in s.indices.iter().zip(&e) {
                u[i] += ei;
            }
            flops::add(s.len());
        }
        Ok(())
    }

    fn coarse_step(&self, r: &[f64], u: &mut [f64]) -> Result<()> {
        if let Some(c) = &self.coarse {
            for _ in 0..self.coarse_visits {
                let res = self.a.residual(u, r);
                let e = c.correct(&res)?;
                vector::axpy(1.0, &e, u);
            }
        }
        Ok(())
    }

    /// Dense local solver R_k of subdomain k on a forward or reverse pass.
    pub fn local_solver_matrix(&self, k: usize, reverse: bool) -> Result<DenseMatrix> {
        let s = &self.subdomains[k];
        let m = s.len();
        let cols = (0..m).map(|j| self.local_solve(s, &vector::unit(m, j), reverse)).collect::<Result<Vec<_>>>()?;
        Ok(DenseMatrix::from_columns(m, &cols))
    }

    /// One forward pass over the subdomains from u = 0, without the coarse
    /// space.
    pub fn forward_pass(&self, r: &[f64]) -> Result<Vec<f64>> {
        let mut u = vec![0.0; r.len()];
        self.pass(r, &mut u, false)?;
        Ok(u)
    }

    /// One multiplicative application from u = 0.
    pub fn mult(&self, sweep: Sweep, r: &[f64]) -> Result<Vec<f64>> {
        let mut u = vec![0.0; r.len()];
        self.mult_from(sweep, &mut u, r)?;
        Ok(u)
    }

    /// One multiplicative sweep on Au = f starting from the given u.
    pub fn mult_from(&self, sweep: Sweep, u: &mut [f64], f: &[f64]) -> Result<()> {
        self.local_schedule_is_legal(Some(sweep))?;
        if f.len() != self.dim() || u.len() != self.dim() {
            return Err(SchwarzError::DimensionMismatch { expected: self.dim(), got: f.len().min(u.len()) });
        }
        match sweep {
            Sweep::Forw => {
                self.pass(f, u, false)?;
                self.coarse_step(f, u)?;
            }
            Sweep::ForwBack => {
                self.pass(f, u, false)?;
                self.coarse_step(f, u)?;
                self.pass(f, u, true)?;
            }
            Sweep::ForwForw => {
                for _ in 0..2 {
                    self.pass(f, u, false)?;
                    self.coarse_step(f, u)?;
                }
            }
        }
        Ok(())
    }

    /// ω (Σ_k I_k R_k I_kᵀ r + I_0 R_0 c_0 I_0ᵀ r), all from the same r.
    pub fn add(&self, r: &[f64], omega: f64) -> Result<Vec<f64>> {
        self.local_schedule_is_legal(None)?;
        if r.len() != self.dim() {
            return Err(SchwarzError::DimensionMismatch { expected: self.dim(), got: r.len() });
        }
        let mut u = vec![0.0; r.len()];
        for s in &self.subdomains {
            let rl: Vec<f64> = s.indices.iter().map(|&i| r[i]).collect();
            let e = self.local_solve(s, &rl, false)?;
            for (&i, ei) in s.indices.iter().zip(&e) {
                u[i] += ei;
            }
            flops::add(s.len());
        }
        if let Some(c) = &self.coarse {
            let e = c.correct(r)?;
            vector::axpy(1.0, &e, &mut u);
        }
        vector::scale(omega, &mut u);
        Ok(u)
    }
}

pub fn apply_mult_dd(d: &Decomposition, sweep: Sweep, r: &[f64]) -> Result<Vec<f64>> {
    d.mult(sweep, r)
}

pub fn apply_add_dd(d: &Decomposition, r: &[f64], omega: f64) -> Result<Vec<f64>> {
    d.add(r, omega)
}

/// A decomposition bound to a sweep (multiplicative) or a damping
/// (additive), usable as a linear operator.
pub struct DdPreconditioner<'d> {
    pub d: &'d Decomposition,
    /// None selects the additive method
    pub sweep: Option<Sweep>,
    pub omega: f64,
}

impl<'d> DdPreconditioner<'d> {
    pub fn multiplicative(d: &'d Decomposition, sweep: Sweep) -> Result<Self> {
        d.local_schedule_is_legal(Some(sweep))?;
        Ok(Self { d, sweep: Some(sweep), omega: 1.0 })
    }

    pub fn additive(d: &'d Decomposition, omega: f64) -> Result<Self> {
        d.local_schedule_is_legal(None)?;
        if !(omega > 0.0) {
            return Err(SchwarzError::Config(format!("damping {omega} must be positive")));
        }
        Ok(Self { d, sweep: None, omega })
    }

    pub fn try_apply(&self, r: &[f64]) -> Result<Vec<f64>> {
        match self.sweep {
            Some(s) => self.d.mult(s, r),
            None => self.d.add(r, self.omega),
        }
    }
}

impl LinearOperator for DdPreconditioner<'_> {
    fn dim(&self) -> usize {
        self.d.dim()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.try_apply(x).expect("domain decomposition application")
    }

    /// Multiplicative sweeps start from u directly.
    fn stationary_step(&self, a: &SparseMatrix, u: &mut [f64], f: &[f64], omega: f64) {
        match self.sweep {
            Some(s) if omega == 1.0 && (std::ptr::eq(a, &self.d.a) || *a == self.d.a) => {
                self.d.mult_from(s, u, f).expect("domain decomposition application")
            }
            _ => {
                let r = a.residual(u, f);
                let z = self.apply(&r);
                vector::axpy(omega, &z, u);
            }
        }
    }

    fn apply_undamped(&self, x: &[f64]) -> Vec<f64> {
        match self.sweep {
            Some(_) => self.apply(x),
            None => self.d.add(x, 1.0).expect("domain decomposition application"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{build_hierarchy, meshes, CoarseMode, ProblemSpec};
    use crate::linalg::{linearity_defect, materialize};

    fn square(levels: usize) -> Hierarchy {
        build_hierarchy(&ProblemSpec::laplace(|x, y| x + y), &meshes::unit_square(2), levels, CoarseMode::Galerkin)
            .unwrap()
    }

    fn relative_asymmetry(m: &DenseMatrix) -> f64 {
        m.max_asymmetry() / m.max_abs()
    }

    #[test]
    fn one_subdomain_with_exact_solve_is_the_inverse() {
        let h = square(2);
        let n = h.dim();
        let d = Decomposition::from_index_sets(h.a().clone(), vec![(0..n).collect()], None, SubdomainSolverKind::Exact)
            .unwrap();
        let b = materialize(&DdPreconditioner::multiplicative(&d, Sweep::Forw).unwrap(), n);
        let inv = h.a().to_dense().lu().unwrap().inverse();
        assert!(b.add_scaled(&inv, -1.0).max_abs() < 1e-12);
    }

    #[test]
    fn disjoint_additive_is_damped_block_jacobi() {
        let h = square(2);
        let n = h.dim();
        let half = n / 2;
        let sets = vec![(0..half).collect::<Vec<_>>(), (half..n).collect()];
        let d = Decomposition::from_index_sets(h.a().clone(), sets.clone(), None, SubdomainSolverKind::Exact).unwrap();
        let b = materialize(&DdPreconditioner::additive(&d, 0.5).unwrap(), n);
        let mut expect = DenseMatrix::zeros(n, n);
        for set in &sets {
            let inv = h.a().principal_submatrix(set).to_dense().lu().unwrap().inverse();
            for (a, &i) in set.iter().enumerate() {
                for (c, &j) in set.iter().enumerate() {
                    expect[(i, j)] = 0.5 * inv[(a, c)];
                }
            }
        }
        assert!(b.add_scaled(&expect, -1.0).max_abs() < 1e-12);
    }

    #[test]
    fn decomposition_covers_with_overlap() {
        let h = build_hierarchy(&ProblemSpec::lshape(), &meshes::lshape_coarse(), 3, CoarseMode::Galerkin).unwrap();
        let d0 = build_decomposition(&h, 0).unwrap();
        let d1 = build_decomposition(&h, 1).unwrap();
        assert_eq!(d1.subdomains.len(), 36);
        for (a, b) in d0.subdomains.iter().zip(&d1.subdomains) {
            assert!(b.len() > a.len());
            assert!(a.indices.iter().all(|i| b.indices.contains(i)));
        }
        // a closed coarse triangle refined twice holds 15 fine vertices
        assert!(d0.subdomains.iter().all(|s| s.len() == 15));
        let c = d1.coarse.as_ref().unwrap();
        assert_eq!((c.prolongation.nrows(), c.prolongation.ncols()), (h.dim(), h.levels[0].dim()));
    }

    #[test]
    fn symmetric_sweeps_give_symmetric_b() {
        let h = square(3);
        let d = build_decomposition(&h, 1).unwrap();
        let n = h.dim();
        for (solver, sweep, symmetric) in [
            (SubdomainSolverKind::Exact, Sweep::ForwBack, true),
            (SubdomainSolverKind::Symmetric, Sweep::ForwBack, true),
            (SubdomainSolverKind::Adjointed, Sweep::ForwBack, true),
            (SubdomainSolverKind::Nonsymmetric, Sweep::ForwBack, false),
            (SubdomainSolverKind::Exact, Sweep::Forw, false),
            (SubdomainSolverKind::Exact, Sweep::ForwForw, false),
        ] {
            let d = d.clone().with_solver(solver).unwrap();
            let b = materialize(&DdPreconditioner::multiplicative(&d, sweep).unwrap(), n);
            let asym = relative_asymmetry(&b);
            assert_eq!(asym < 1e-10, symmetric, "{solver:?} {sweep}: {asym}");
            if !symmetric {
                assert!(asym > 1e-6);
            }
        }
    }

    #[test]
    fn repeated_exact_coarse_visit_changes_nothing() {
        let h = square(3);
        let mut d = build_decomposition(&h, 1).unwrap();
        let n = h.dim();
        let once = materialize(&DdPreconditioner::multiplicative(&d, Sweep::ForwBack).unwrap(), n);
        d.coarse_visits = 3;
        let thrice = materialize(&DdPreconditioner::multiplicative(&d, Sweep::ForwBack).unwrap(), n);
        assert!(once.add_scaled(&thrice, -1.0).max_abs() < 1e-10 * once.max_abs());
    }

    #[test]
    fn adjointed_needs_forward_backward() {
        let h = square(2);
        let d = build_decomposition(&h, 1).unwrap().with_solver(SubdomainSolverKind::Adjointed).unwrap();
        assert!(DdPreconditioner::multiplicative(&d, Sweep::Forw).is_err());
        assert!(DdPreconditioner::additive(&d, 1.0).is_err());
        assert!(DdPreconditioner::multiplicative(&d, Sweep::ForwBack).is_ok());
    }

    #[test]
    fn local_solver_matrices() {
        let h = square(3);
        let d = build_decomposition(&h, 1).unwrap().with_solver(SubdomainSolverKind::Adjointed).unwrap();
        let f = d.local_solver_matrix(0, false).unwrap();
        let b = d.local_solver_matrix(0, true).unwrap();
        assert!(b.add_scaled(&f.transpose(), -1.0).max_abs() < 1e-12 * f.max_abs());
        assert!(f.max_asymmetry() > 1e-6 * f.max_abs());
    }

    #[test]
    fn actions_are_linear_and_warm_steps_agree() {
        let h = square(3);
        let d = build_decomposition(&h, 1).unwrap().with_solver(SubdomainSolverKind::Nonsymmetric).unwrap();
        let m = DdPreconditioner::multiplicative(&d, Sweep::ForwForw).unwrap();
        assert!(linearity_defect(&m, 4, 9) < 1e-12);
        assert!(linearity_defect(&DdPreconditioner::additive(&d, 0.45).unwrap(), 4, 9) < 1e-12);
        let f: Vec<f64> = (0..d.dim()).map(|i| (i as f64).sin()).collect();
        let mut warm: Vec<f64> = (0..d.dim()).map(|i| (i as f64 * 0.3).cos()).collect();
        let mut cold = warm.clone();
        m.stationary_step(&d.a, &mut warm, &f, 1.0);
        let r = d.a.residual(&cold, &f);
        vector::axpy(1.0, &m.apply(&r), &mut cold);
        for (x, y) in warm.iter().zip(&cold) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn coverage_is_checked() {
        let h = square(2);
        let err = Decomposition::from_index_sets(h.a().clone(), vec![vec![0, 1]], None, SubdomainSolverKind::Exact);
        assert!(err.is_err());
        let err = Decomposition::from_index_sets(h.a().clone(), vec![vec![]], None, SubdomainSolverKind::Exact);
        assert!(matches!(err, Err(SchwarzError::EmptySubdomain(0))));
    }
}
