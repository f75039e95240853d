//! Running single experiments and grids of them.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SchwarzError};
use crate::fem::CoarseMode;
use crate::krylov::{bicgstab_solve, pcg_solve, stationary_solve, Reason, SolveReport, StoppingRule};
use crate::linalg::LinearOperator;
use crate::schwarz::{DdPreconditioner, Decomposition, DirectSolve, MgConfig, Multigrid};
use crate::verify::{certify_spd, check_theorem_conditions, MethodSetup};

use super::config::{Accelerator, BenchConfig, BenchMethod, ExperimentConfig, ProblemName};
use super::problem::{build_problem, BenchProblem};

/// Levels of the desk-scale copy used for certification.
pub const CERTIFY_LEVELS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Status {
    Converged { iterations: usize },
    Diverged { iterations: usize },
    MaxIterations { limit: usize },
    Breakdown { iterations: usize },
    Failed { message: String },
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Converged { iterations } => write!(f, "{iterations}"),
            Status::Diverged { .. } => f.write_str("DIV"),
            Status::MaxIterations { limit } => write!(f, "≫{limit}"),
            Status::Breakdown { .. } => f.write_str("BRK"),
            Status::Failed { .. } => f.write_str("ERR"),
        }
    }
}

/// Desk-scale certification of the preconditioner used by a row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertSummary {
    /// every sufficient condition of the applicable theorem holds
    pub conditions: bool,
    pub spd: bool,
    pub symmetry_defect: f64,
    pub min_eig: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub config: ExperimentConfig,
    pub status: Status,
    /// relative A-norm error per iteration, entry 0 is 1
    pub history: Vec<f64>,
    pub flops: u64,
    pub flops_per_iteration: f64,
    /// PCG was run on a B that failed the symmetry probe
    pub uncertified: bool,
    pub certification: Option<CertSummary>,
}

impl TableRow {
    pub fn label(&self) -> String {
        self.config.row_label()
    }

    pub fn cell(&self) -> String {
        self.status.to_string()
    }

    pub fn converged(&self) -> bool {
        matches!(self.status, Status::Converged { .. })
    }

    pub fn iterations(&self) -> Option<usize> {
        match self.status {
            Status::Converged { iterations } => Some(iterations),
            _ => None,
        }
    }

    fn failed(config: &ExperimentConfig, e: SchwarzError) -> Self {
        Self {
            config: config.clone(),
            status: Status::Failed { message: e.to_string() },
            history: Vec::new(),
            flops: 0,
            flops_per_iteration: 0.0,
            uncertified: false,
            certification: None,
        }
    }
}

fn status_of(r: &SolveReport, cfg: &ExperimentConfig) -> Status {
    match r.reason {
        Reason::Tolerance => Status::Converged { iterations: r.iterations },
        Reason::Divergence => Status::Diverged { iterations: r.iterations },
        Reason::MaxIterations => Status::MaxIterations { limit: cfg.max_iterations },
        Reason::Breakdown => Status::Breakdown { iterations: r.iterations },
    }
}

/// Damping actually applied: cfg.omega for unaccelerated additive runs,
/// 1 otherwise.
pub fn effective_omega(cfg: &ExperimentConfig) -> f64 {
    if cfg.method.is_additive() && cfg.accelerator == Accelerator::None {
        cfg.omega
    } else {
        1.0
    }
}

fn mg_config(cfg: &ExperimentConfig) -> MgConfig {
    MgConfig { pre: cfg.pre.clone(), post: cfg.post.clone(), omega: effective_omega(cfg) }
}

fn local_decomposition(cfg: &ExperimentConfig, p: &BenchProblem) -> Result<Decomposition> {
    let mut d = p.decomposition.clone();
    d.set_solver(cfg.subdomain_solver)?;
    Ok(d)
}

fn solve_with(cfg: &ExperimentConfig, p: &BenchProblem, b: &dyn LinearOperator) -> Result<SolveReport> {
    let rule = StoppingRule::a_norm(p.reference.clone(), cfg.max_iterations).with_tol(cfg.tol);
    let a = p.hierarchy.a();
    match cfg.accelerator {
        // the damping lives inside B for additive methods
        Accelerator::None => stationary_solve(a, b, &p.rhs, 1.0, &rule),
        Accelerator::Cg => pcg_solve(a, b, &p.rhs, &rule),
        Accelerator::Bicgstab => bicgstab_solve(a, b, &p.rhs, &rule),
    }
}

fn try_run(cfg: &ExperimentConfig, p: &BenchProblem) -> Result<SolveReport> {
    cfg.validate()?;
    if p.hierarchy.mode != cfg.coarse_mode || p.name != cfg.problem || p.hierarchy.n_levels() != cfg.levels {
        return Err(SchwarzError::Config("problem does not match the experiment".into()));
    }
    let h = &p.hierarchy;
    match cfg.method {
        BenchMethod::MultMg => solve_with(cfg, p, &Multigrid::multiplicative(h, mg_config(cfg))?),
        BenchMethod::AddMg => solve_with(cfg, p, &Multigrid::additive(h, mg_config(cfg))?),
        BenchMethod::MultDd => {
            let d = local_decomposition(cfg, p)?;
            solve_with(cfg, p, &DdPreconditioner::multiplicative(&d, cfg.sweep)?)
        }
        BenchMethod::AddDd => {
            let d = local_decomposition(cfg, p)?;
            solve_with(cfg, p, &DdPreconditioner::additive(&d, effective_omega(cfg))?)
        }
        BenchMethod::Direct => solve_with(cfg, p, &DirectSolve::new(h.a())?),
    }
}

/// Runs one cell. Errors become a `Failed` status rather than aborting.
pub fn run_experiment(cfg: &ExperimentConfig, p: &BenchProblem) -> TableRow {
    match try_run(cfg, p) {
        Ok(r) => TableRow {
            config: cfg.clone(),
            status: status_of(&r, cfg),
            flops: r.flops,
            flops_per_iteration: r.flops_per_iteration(),
            uncertified: r.uncertified,
            history: r.history,
            certification: None,
        },
        Err(e) => TableRow::failed(cfg, e),
    }
}

/// Checks the applicable theorem and certifies B on a 3-level copy of the
/// problem.
pub fn certify_experiment(cfg: &ExperimentConfig, cache: &mut ProblemCache) -> Result<CertSummary> {
    let p = cache.get(cfg.problem, CERTIFY_LEVELS.min(cfg.levels), cfg.coarse_mode, cfg.overlap)?;
    let h = &p.hierarchy;
    let n = h.dim();
    let mg = mg_config(cfg);
    let d = local_decomposition(cfg, p)?;
    let (conditions, cert) = match cfg.method {
        BenchMethod::MultMg => (
            check_theorem_conditions(&MethodSetup::MultMg { h, cfg: &mg })?,
            certify_spd(&Multigrid::multiplicative(h, mg.clone())?, n)?,
        ),
        BenchMethod::AddMg => (
            check_theorem_conditions(&MethodSetup::AddMg { h, cfg: &mg })?,
            certify_spd(&Multigrid::additive(h, mg.clone())?, n)?,
        ),
        BenchMethod::MultDd => (
            check_theorem_conditions(&MethodSetup::MultDd { d: &d, sweep: cfg.sweep })?,
            certify_spd(&DdPreconditioner::multiplicative(&d, cfg.sweep)?, n)?,
        ),
        BenchMethod::AddDd => (
            check_theorem_conditions(&MethodSetup::AddDd { d: &d })?,
            certify_spd(&DdPreconditioner::additive(&d, 1.0)?, n)?,
        ),
        BenchMethod::Direct => {
            let cert = certify_spd(&DirectSolve::new(h.a())?, n)?;
            return Ok(CertSummary {
                conditions: true,
                spd: cert.passed,
                symmetry_defect: cert.symmetry_defect,
                min_eig: cert.min_eig,
            });
        }
    };
    Ok(CertSummary {
        conditions: conditions.all_passed(),
        spd: cert.passed,
        symmetry_defect: cert.symmetry_defect,
        min_eig: cert.min_eig,
    })
}

type ProblemKey = (ProblemName, usize, CoarseMode, usize);

/// Problems built once per (problem, levels, mode, overlap).
#[derive(Default)]
pub struct ProblemCache {
    problems: HashMap<ProblemKey, BenchProblem>,
}

impl ProblemCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, name: ProblemName, levels: usize, mode: CoarseMode, overlap: usize) -> Result<&BenchProblem> {
        let key = (name, levels, mode, overlap);
        if let Entry::Vacant(slot) = self.problems.entry(key) {
            slot.insert(build_problem(name, levels, mode, overlap)?);
        }
        Ok(&self.problems[&key])
    }

    pub fn for_experiment(&mut self, cfg: &ExperimentConfig) -> Result<&BenchProblem> {
        self.get(cfg.problem, cfg.levels, cfg.coarse_mode, cfg.overlap)
    }
}

/// Runs every cell of a table in config order.
pub fn run_grid(cfg: &BenchConfig, certify: bool, cache: &mut ProblemCache) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for e in cfg.experiments()? {
        let mut row = match cache.for_experiment(&e) {
            Ok(p) => run_experiment(&e, p),
            Err(err) => TableRow::failed(&e, err),
        };
        if certify {
            row.certification = certify_experiment(&e, cache).ok();
        }
        rows.push(row);
    }
    Ok(rows)
}
