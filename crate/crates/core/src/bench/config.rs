//! Experiment configuration. A config file is TOML describing one table:
//! shared settings plus a list of rows; each row is run for every
//! accelerator and coarse mode listed.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SchwarzError};
use crate::fem::CoarseMode;
use crate::krylov::DEFAULT_TOL;
use crate::schwarz::{Method, Sweep};
use crate::smooth::{Schedule, SubdomainSolverKind};

/// Damping for unaccelerated additive runs.
pub const DEFAULT_OMEGA: f64 = 0.45;
pub const DEFAULT_LEVELS: usize = 5;
pub const DEFAULT_MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemName {
    /// linearized Poisson-Boltzmann surrogate
    Pbe2d,
    Lshape,
    /// Laplace on the unit square, u = x + y on the boundary
    Square,
}

impl ProblemName {
    pub fn name(self) -> &'static str {
        match self {
            ProblemName::Pbe2d => "pbe2d",
            ProblemName::Lshape => "lshape",
            ProblemName::Square => "square",
        }
    }
}

impl FromStr for ProblemName {
    type Err = SchwarzError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pbe2d" => Ok(ProblemName::Pbe2d),
            "lshape" => Ok(ProblemName::Lshape),
            "square" => Ok(ProblemName::Square),
            other => Err(SchwarzError::Config(format!("unknown problem '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Accelerator {
    None,
    Cg,
    Bicgstab,
}

impl Accelerator {
    pub const ALL: [Accelerator; 3] = [Accelerator::None, Accelerator::Cg, Accelerator::Bicgstab];

    pub fn name(self) -> &'static str {
        match self {
            Accelerator::None => "none",
            Accelerator::Cg => "cg",
            Accelerator::Bicgstab => "bicgstab",
        }
    }

    /// Column heading used in tables.
    pub fn heading(self) -> &'static str {
        match self {
            Accelerator::None => "UNACCEL",
            Accelerator::Cg => "CG",
            Accelerator::Bicgstab => "BiCG",
        }
    }
}

impl fmt::Display for Accelerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The preconditioner under test; `direct` is the B = A⁻¹ sanity case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchMethod {
    MultMg,
    AddMg,
    MultDd,
    AddDd,
    Direct,
}

impl BenchMethod {
    pub fn schwarz(self) -> Option<Method> {
        match self {
            BenchMethod::MultMg => Some(Method::MultMg),
            BenchMethod::AddMg => Some(Method::AddMg),
            BenchMethod::MultDd => Some(Method::MultDd),
            BenchMethod::AddDd => Some(Method::AddDd),
            BenchMethod::Direct => None,
        }
    }

    pub fn name(self) -> &'static str {
        self.schwarz().map_or("direct", Method::name)
    }

    pub fn is_additive(self) -> bool {
        self.schwarz().is_some_and(Method::is_additive)
    }
}

/// One row of a table: the smoothing strategy or the DD variant.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowSpec {
    /// ν₁ (mult MG) or the level smoother ν (add MG)
    #[serde(default)]
    pub pre: Option<Schedule>,
    /// ν₂ (mult MG)
    #[serde(default)]
    pub post: Option<Schedule>,
    #[serde(default)]
    pub sweep: Option<Sweep>,
    #[serde(default)]
    pub solver: Option<String>,
}

/// Table-level settings as read from the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub name: String,
    pub problem: ProblemName,
    #[serde(default = "default_levels")]
    pub levels: usize,
    pub method: BenchMethod,
    #[serde(default = "default_modes")]
    pub coarse_modes: Vec<CoarseMode>,
    #[serde(default = "default_accelerators")]
    pub accelerators: Vec<Accelerator>,
    #[serde(default = "default_omega")]
    pub omega: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    /// cap for unaccelerated runs when it differs from the Krylov cap
    #[serde(default)]
    pub unaccelerated_max_iterations: Option<usize>,
    #[serde(default = "default_overlap")]
    pub overlap: usize,
    /// run the qualitative regime suite on this table
    #[serde(default)]
    pub regime_checks: bool,
    pub rows: Vec<RowSpec>,
}

fn default_levels() -> usize {
    DEFAULT_LEVELS
}
fn default_modes() -> Vec<CoarseMode> {
    vec![CoarseMode::Galerkin]
}
fn default_accelerators() -> Vec<Accelerator> {
    Accelerator::ALL.to_vec()
}
fn default_omega() -> f64 {
    DEFAULT_OMEGA
}
fn default_tol() -> f64 {
    DEFAULT_TOL
}
fn default_max_iterations() -> usize {
    DEFAULT_MAX_ITERATIONS
}
fn default_overlap() -> usize {
    1
}

/// A single run: one cell of a table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub problem: ProblemName,
    pub levels: usize,
    pub coarse_mode: CoarseMode,
    pub method: BenchMethod,
    pub pre: Schedule,
    pub post: Schedule,
    pub sweep: Sweep,
    pub subdomain_solver: SubdomainSolverKind,
    pub overlap: usize,
    pub accelerator: Accelerator,
    /// damping of unaccelerated additive runs; Krylov runs use 1
    pub omega: f64,
    pub tol: f64,
    pub max_iterations: usize,
}

impl ExperimentConfig {
    /// A config with MG defaults, for programmatic use.
    pub fn new(problem: ProblemName, levels: usize, method: BenchMethod, accelerator: Accelerator) -> Self {
        Self {
            problem,
            levels,
            coarse_mode: CoarseMode::Galerkin,
            method,
            pre: Schedule::new("f").expect("valid"),
            post: Schedule::new("b").expect("valid"),
            sweep: Sweep::ForwBack,
            subdomain_solver: SubdomainSolverKind::Exact,
            overlap: 1,
            accelerator,
            omega: if method.is_additive() { DEFAULT_OMEGA } else { 1.0 },
            tol: DEFAULT_TOL,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }

    /// Row label in the published layout: "f b" for a V-cycle, "ffbb" for an
    /// additive level smoother, "forw_back exact" for DD.
    pub fn row_label(&self) -> String {
        match self.method {
            BenchMethod::MultMg => format!("{} {}", self.pre, self.post),
            BenchMethod::AddMg => self.pre.to_string(),
            BenchMethod::MultDd => format!("{} {}", self.sweep, self.subdomain_solver.name()),
            BenchMethod::AddDd => self.subdomain_solver.name().to_string(),
            BenchMethod::Direct => "A^-1".to_string(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) {
            return Err(SchwarzError::Config(format!("omega {} must be positive", self.omega)));
        }
        if !(self.tol > 0.0) {
            return Err(SchwarzError::Config(format!("tol {} must be positive", self.tol)));
        }
        if self.levels < 2 {
            return Err(SchwarzError::Config(format!("levels {} must be at least 2", self.levels)));
        }
        Ok(())
    }
}

impl BenchConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: BenchConfig = toml::from_str(text).map_err(|e| SchwarzError::Config(e.to_string()))?;
        cfg.experiments()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    fn row_experiment(&self, row: &RowSpec) -> Result<ExperimentConfig> {
        let mut e = ExperimentConfig::new(self.problem, self.levels, self.method, Accelerator::None);
        e.omega = self.omega;
        e.tol = self.tol;
        e.overlap = self.overlap;
        match self.method {
            BenchMethod::MultMg => {
                e.pre = row.pre.clone().ok_or_else(|| SchwarzError::Config("mult_mg row needs pre".into()))?;
                e.post = row.post.clone().unwrap_or_else(Schedule::empty);
            }
            BenchMethod::AddMg => {
                e.pre = row.pre.clone().ok_or_else(|| SchwarzError::Config("add_mg row needs pre".into()))?;
                e.post = Schedule::empty();
            }
            BenchMethod::MultDd | BenchMethod::AddDd => {
                e.sweep = row.sweep.unwrap_or(Sweep::ForwBack);
                e.subdomain_solver = row.solver.as_deref().unwrap_or("exact").parse()?;
                if self.method == BenchMethod::MultDd
                    && e.subdomain_solver == SubdomainSolverKind::Adjointed
                    && e.sweep != Sweep::ForwBack
                {
                    return Err(SchwarzError::Config("adjointed local solver needs sweep forw_back".into()));
                }
            }
            BenchMethod::Direct => {}
        }
        Ok(e)
    }

    /// Every cell in table order: rows outermost, then accelerators, then
    /// coarse modes.
    pub fn experiments(&self) -> Result<Vec<ExperimentConfig>> {
        if self.rows.is_empty() {
            return Err(SchwarzError::Config(format!("table '{}' has no rows", self.name)));
        }
        let mut out = Vec::new();
        for row in &self.rows {
            let base = self.row_experiment(row)?;
            for &acc in &self.accelerators {
                for &mode in &self.coarse_modes {
                    let mut e = base.clone();
                    e.accelerator = acc;
                    e.coarse_mode = mode;
                    e.max_iterations = match acc {
                        Accelerator::None => self.unaccelerated_max_iterations.unwrap_or(self.max_iterations),
                        _ => self.max_iterations,
                    };
                    e.validate()?;
                    out.push(e);
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
name = "sample"
problem = "lshape"
levels = 3
method = "mult_mg"
accelerators = ["none", "bicgstab"]
rows = [ { pre = "f", post = "0" }, { pre = "ff", post = "bb" } ]
"#;

    #[test]
    fn expands_rows_by_accelerator() {
        let cfg = BenchConfig::from_toml(SAMPLE).unwrap();
        let e = cfg.experiments().unwrap();
        assert_eq!(e.len(), 4);
        assert_eq!(e[0].row_label(), "f 0");
        assert_eq!(e[1].accelerator, Accelerator::Bicgstab);
        assert_eq!(e[3].row_label(), "ff bb");
        assert_eq!(e[0].tol, 1e-10);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(BenchConfig::from_toml(&SAMPLE.replace("\"f\"", "\"fx\"")).is_err());
        assert!(BenchConfig::from_toml(&SAMPLE.replace("levels = 3", "levels = 3\nomega = -1.0")).is_err());
        assert!(BenchConfig::from_toml(&SAMPLE.replace("levels = 3", "levels = 3\nbogus = 1")).is_err());
        let dd = "name='x'\nproblem='lshape'\nmethod='mult_dd'\nrows=[{sweep='forw', solver='adjointed'}]";
        assert!(BenchConfig::from_toml(dd).is_err());
    }
}
