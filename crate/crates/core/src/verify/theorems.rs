//! Per-theorem checklists of the sufficient conditions for an SPD
//! preconditioner, each with its numeric evidence.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::certify::certify_dense;
use super::spectra::AMetric;
use crate::error::Result;
use crate::fem::Hierarchy;
use crate::linalg::{materialize, spd_smoke_test, DenseMatrix, FnOperator, LinearOperator, SparseMatrix};
use crate::schwarz::{Decomposition, MgConfig, Multigrid, Sweep};
use crate::smooth::{Schedule, SubdomainSolverKind};

/// Relative defect below which two operators count as equal.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Slack on closed conditions (≤ 1, ≥ 0).
pub const CLOSED_TOL: f64 = 1e-12;

/// A method configuration to be checked.
pub enum MethodSetup<'a> {
    MultMg { h: &'a Hierarchy, cfg: &'a MgConfig },
    AddMg { h: &'a Hierarchy, cfg: &'a MgConfig },
    MultDd { d: &'a Decomposition, sweep: Sweep },
    AddDd { d: &'a Decomposition },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub passed: bool,
    /// the measured quantity compared against the threshold
    pub evidence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checklist {
    pub theorem: String,
    pub conditions: Vec<Condition>,
}

impl Checklist {
    fn new(theorem: &str) -> Self {
        Self { theorem: theorem.to_string(), conditions: Vec::new() }
    }

    fn push(&mut self, name: &str, passed: bool, evidence: f64) {
        self.conditions.push(Condition { name: name.to_string(), passed, evidence });
    }

    pub fn all_passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.conditions.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

impl fmt::Display for Checklist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.theorem)?;
        for c in &self.conditions {
            writeln!(f, "  [{}] {} ({:.3e})", if c.passed { "ok" } else { "FAIL" }, c.name, c.evidence)?;
        }
        Ok(())
    }
}

pub const COND_SPD: &str = "A_k SPD";
pub const COND_RESTRICTION: &str = "restriction = c·Pᵀ";
pub const COND_ADJOINT: &str = "post-smoother = pre-smoother transposed";
pub const COND_COARSE_SYM: &str = "coarsest solver symmetric";
pub const COND_FINE_CONTRACTION: &str = "‖I − R_J A‖_A < 1";
pub const COND_LEVEL_CONTRACTION: &str = "‖I − R_k A_k‖_A ≤ 1";
pub const COND_COARSE_NONNEG: &str = "coarsest solver nonnegative";
pub const COND_B_CONTRACTION: &str = "‖I − BA‖_A < 1";
pub const COND_VARIATIONAL: &str = "variational coarse operators";
pub const COND_SWEEP: &str = "forward/backward sweep";
pub const COND_LOCAL_ADJOINT: &str = "reverse local solver = forward local solver transposed";
pub const COND_PASS_CONTRACTION: &str = "‖Π(I − I_k R_k I^k A)‖_A < 1";
pub const COND_LOCAL_SPD: &str = "local solvers SPD";
pub const COND_FINE_SPD: &str = "finest smoother SPD";
pub const COND_LEVEL_NONNEG: &str = "level smoothers symmetric nonnegative";

fn relative_asymmetry(m: &DenseMatrix) -> f64 {
    let s = m.max_abs();
    if s == 0.0 {
        0.0
    } else {
        m.max_asymmetry() / s
    }
}

/// max |R − c·Pᵀ| / max |c·Pᵀ|
pub fn restriction_defect(restriction: &SparseMatrix, prolongation: &SparseMatrix, c: f64) -> Result<f64> {
    let cpt = prolongation.transpose().scaled(c);
    let scale = cpt.max_abs().max(f64::MIN_POSITIVE);
    Ok(restriction.add_scaled(&cpt, -1.0)?.max_abs() / scale)
}

/// Materialized approximate inverse of a schedule run from zero.
pub fn smoother_matrix(s: &Schedule, a: &SparseMatrix) -> Result<DenseMatrix> {
    let n = a.nrows();
    // probe once so errors surface here rather than inside materialize
    s.solve(a, &vec![0.0; n])?;
    Ok(materialize(&FnOperator::new(n, |r: &[f64]| s.solve(a, r).expect("checked")), n))
}

/// ‖I − S A‖_A
fn contraction(s: &DenseMatrix, a: &SparseMatrix) -> Result<f64> {
    let e = DenseMatrix::identity(a.nrows()).add_scaled(&s.matmul(&a.to_dense())?, -1.0);
    Ok(AMetric::new(a)?.norm(&e))
}

fn transpose_defect(forward: &DenseMatrix, backward: &DenseMatrix) -> f64 {
    let scale = forward.max_abs().max(backward.max_abs());
    if scale == 0.0 {
        0.0
    } else {
        backward.add_scaled(&forward.transpose(), -1.0).max_abs() / scale
    }
}

fn nonneg(min_eig: f64, scale: f64) -> bool {
    min_eig >= -CLOSED_TOL * scale.max(1.0)
}

fn level_spd(h: &Hierarchy, list: &mut Checklist) -> Result<()> {
    let mut worst = f64::INFINITY;
    let mut ok = true;
    for l in &h.levels {
        let s = spd_smoke_test(&l.a)?;
        ok &= s.passed;
        worst = worst.min(s.min_ritz);
    }
    list.push(COND_SPD, ok, worst);
    Ok(())
}

fn restrictions(h: &Hierarchy, list: &mut Checklist) -> Result<()> {
    let mut worst: f64 = 0.0;
    for l in &h.levels[1..] {
        let t = l.transfer.as_ref().expect("fine levels carry a transfer");
        let ok_c = t.c > 0.0;
        let d = restriction_defect(&t.restriction, &t.prolongation, t.c)?;
        worst = worst.max(if ok_c { d } else { f64::INFINITY });
    }
    list.push(COND_RESTRICTION, worst < IDENTITY_TOL, worst);
    Ok(())
}

fn coarsest_inverse(h: &Hierarchy) -> Result<DenseMatrix> {
    Ok(h.levels[0].a.to_dense().lu()?.inverse())
}

fn mult_mg(h: &Hierarchy, cfg: &MgConfig) -> Result<Checklist> {
    let mut list = Checklist::new("multiplicative multigrid (V-cycle)");
    level_spd(h, &mut list)?;
    restrictions(h, &mut list)?;
    let top = h.n_levels() - 1;
    let mut adj: f64 = 0.0;
    let mut level_norm: f64 = 0.0;
    let mut fine_norm = 0.0;
    for (k, l) in h.levels.iter().enumerate().skip(1) {
        let r = smoother_matrix(&cfg.pre, &l.a)?;
        let rbar = smoother_matrix(&cfg.post, &l.a)?;
        adj = adj.max(transpose_defect(&r, &rbar));
        let c = contraction(&r, &l.a)?;
        if k == top {
            fine_norm = c;
        } else {
            level_norm = level_norm.max(c);
        }
    }
    list.push(COND_ADJOINT, adj < IDENTITY_TOL, adj);
    let inv = coarsest_inverse(h)?;
    let asym = relative_asymmetry(&inv);
    list.push(COND_COARSE_SYM, asym < IDENTITY_TOL, asym);
    list.push(COND_FINE_CONTRACTION, fine_norm < 1.0, fine_norm);
    list.push(COND_LEVEL_CONTRACTION, level_norm <= 1.0 + CLOSED_TOL, level_norm);
    let cert = certify_dense(&inv);
    list.push(COND_COARSE_NONNEG, nonneg(cert.min_eig, cert.max_eig.abs()), cert.min_eig);
    Ok(list)
}

fn add_mg(h: &Hierarchy, cfg: &MgConfig) -> Result<Checklist> {
    let mut list = Checklist::new("additive multigrid");
    restrictions(h, &mut list)?;
    let nu = cfg.level_smoother();
    let top = h.n_levels() - 1;
    let fine = certify_dense(&smoother_matrix(&nu, &h.levels[top].a)?);
    list.push(
        COND_FINE_SPD,
        fine.passed,
        if fine.passed { fine.min_eig } else { fine.symmetry_defect.max(-fine.min_eig) },
    );
    let mut ok = true;
    let mut worst = f64::INFINITY;
    let mut mats = vec![coarsest_inverse(h)?];
    for l in &h.levels[1..top] {
        mats.push(smoother_matrix(&nu, &l.a)?);
    }
    for m in &mats {
        let c = certify_dense(m);
        ok &= c.symmetry_defect < IDENTITY_TOL && nonneg(c.min_eig, c.max_eig.abs());
        worst = worst.min(c.min_eig);
    }
    list.push(COND_LEVEL_NONNEG, ok, worst);
    Ok(list)
}

fn coarse_conditions(d: &Decomposition, list: &mut Checklist, nonneg_name: Option<&str>) -> Result<()> {
    match &d.coarse {
        None => {
            list.push(COND_RESTRICTION, true, 0.0);
            list.push(COND_COARSE_SYM, true, 0.0);
            if let Some(n) = nonneg_name {
                list.push(n, true, 0.0);
            }
        }
        Some(c) => {
            let def = restriction_defect(&c.restriction, &c.prolongation, c.c)?;
            list.push(COND_RESTRICTION, def < IDENTITY_TOL && c.c > 0.0, def);
            let inv = c.a.to_dense().lu()?.inverse();
            let cert = certify_dense(&inv);
            list.push(COND_COARSE_SYM, cert.symmetry_defect < IDENTITY_TOL, cert.symmetry_defect);
            if let Some(n) = nonneg_name {
                list.push(n, nonneg(cert.min_eig, cert.max_eig.abs()), cert.min_eig);
            }
        }
    }
    Ok(())
}

fn mult_dd(d: &Decomposition, sweep: Sweep) -> Result<Checklist> {
    let mut list = Checklist::new("multiplicative domain decomposition");
    let smoke = spd_smoke_test(&d.a)?;
    list.push(COND_SPD, smoke.passed, smoke.min_ritz);
    list.push(COND_SWEEP, sweep == Sweep::ForwBack, if sweep == Sweep::ForwBack { 0.0 } else { 1.0 });
    coarse_conditions(d, &mut list, None)?;
    let mut adj: f64 = 0.0;
    if d.solver != SubdomainSolverKind::Exact || sweep == Sweep::ForwBack {
        for k in 0..d.subdomains.len() {
            let f = d.local_solver_matrix(k, false)?;
            let b = d.local_solver_matrix(k, sweep == Sweep::ForwBack)?;
            adj = adj.max(transpose_defect(&f, &b));
        }
    }
    list.push(COND_LOCAL_ADJOINT, adj < IDENTITY_TOL, adj);
    let n = d.dim();
    let pass = FnOperator::new(n, |x: &[f64]| {
        let ax = d.a.spmv(x).expect("dimension");
        let u = d.forward_pass(&ax).expect("local solves");
        x.iter().zip(&u).map(|(p, q)| p - q).collect()
    });
    let e1 = materialize(&pass, n);
    let norm = AMetric::new(&d.a)?.norm(&e1);
    list.push(COND_PASS_CONTRACTION, norm < 1.0, norm);
    coarse_nonneg(d, &mut list)?;
    Ok(list)
}

fn coarse_nonneg(d: &Decomposition, list: &mut Checklist) -> Result<()> {
    match &d.coarse {
        None => list.push(COND_COARSE_NONNEG, true, 0.0),
        Some(c) => {
            let cert = certify_dense(&c.a.to_dense().lu()?.inverse());
            list.push(COND_COARSE_NONNEG, nonneg(cert.min_eig, cert.max_eig.abs()), cert.min_eig);
        }
    }
    Ok(())
}

fn add_dd(d: &Decomposition) -> Result<Checklist> {
    let mut list = Checklist::new("additive domain decomposition");
    coarse_conditions(d, &mut list, Some(COND_COARSE_NONNEG))?;
    let mut ok = true;
    let mut worst = f64::INFINITY;
    for k in 0..d.subdomains.len() {
        let c = certify_dense(&d.local_solver_matrix(k, false)?);
        ok &= c.passed;
        worst = worst.min(if c.symmetry_defect < IDENTITY_TOL { c.min_eig } else { -c.symmetry_defect });
    }
    list.push(COND_LOCAL_SPD, ok, worst);
    Ok(list)
}

/// Sufficient conditions for B to be SPD, per method: V-cycle (seven
/// conditions), additive MG, multiplicative DD, additive DD.
pub fn check_theorem_conditions(setup: &MethodSetup<'_>) -> Result<Checklist> {
    match *setup {
        MethodSetup::MultMg { h, cfg } => mult_mg(h, cfg),
        MethodSetup::AddMg { h, cfg } => add_mg(h, cfg),
        MethodSetup::MultDd { d, sweep } => mult_dd(d, sweep),
        MethodSetup::AddDd { d } => add_dd(d),
    }
}

/// Conditions 1–4 of the V-cycle checklist plus ‖I − BA‖_A < 1.
pub fn check_convergence_conditions(h: &Hierarchy, cfg: &MgConfig) -> Result<Checklist> {
    let full = mult_mg(h, cfg)?;
    let mut list = Checklist::new("multiplicative multigrid, convergent B");
    for name in [COND_SPD, COND_RESTRICTION, COND_ADJOINT, COND_COARSE_SYM] {
        list.conditions.push(full.get(name).expect("present").clone());
    }
    let norm = b_contraction(h, cfg)?;
    list.push(COND_B_CONTRACTION, norm < 1.0, norm);
    Ok(list)
}

/// Variational coarse operators, exact coarsest solve and ν₂ = adjoint(ν₁),
/// with the measured ‖I − BA‖_A.
pub fn check_variational_convergence(h: &Hierarchy, cfg: &MgConfig) -> Result<Checklist> {
    let mut list = Checklist::new("variational V-cycle");
    let defect = h.galerkin_defects()?.into_iter().fold(0.0, f64::max);
    list.push(COND_VARIATIONAL, defect < 1e-12 * h.a().max_abs().max(1.0), defect);
    let adj = cfg.post == cfg.pre.adjoint();
    list.push(COND_ADJOINT, adj, if adj { 0.0 } else { 1.0 });
    let norm = b_contraction(h, cfg)?;
    list.push(COND_B_CONTRACTION, norm < 1.0, norm);
    Ok(list)
}

/// ‖I − BA‖_A for the V-cycle.
pub fn b_contraction(h: &Hierarchy, cfg: &MgConfig) -> Result<f64> {
    let mg = Multigrid::multiplicative(h, cfg.clone())?;
    let b = materialize(&mg, mg.dim());
    contraction(&b, h.a())
}
