//! Schwarz preconditioners as matrix-free maps r ↦ Br.
//!
//! Each action is one application of the corresponding stationary method
//! to Au = r from a zero initial guess.

pub mod dd;
pub mod mg;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use dd::{
    apply_add_dd, apply_mult_dd, build_decomposition, CoarseSpace, DdPreconditioner, Decomposition, Subdomain, Sweep,
};
pub use mg::{apply_add_mg, apply_mult_mg, MgConfig, MgKind, Multigrid};

use crate::error::{Result, SchwarzError};
use crate::linalg::{LinearOperator, Lu, SparseMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    MultMg,
    AddMg,
    MultDd,
    AddDd,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::MultMg => "mult_mg",
            Method::AddMg => "add_mg",
            Method::MultDd => "mult_dd",
            Method::AddDd => "add_dd",
        }
    }

    pub fn is_additive(self) -> bool {
        matches!(self, Method::AddMg | Method::AddDd)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = SchwarzError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mult_mg" => Ok(Method::MultMg),
            "add_mg" => Ok(Method::AddMg),
            "mult_dd" => Ok(Method::MultDd),
            "add_dd" => Ok(Method::AddDd),
            other => Err(SchwarzError::Config(format!("unknown method '{other}'"))),
        }
    }
}

/// B = A⁻¹ through a dense factorization; the reference preconditioner.
#[derive(Debug, Clone)]
pub struct DirectSolve {
    lu: Lu,
}

impl DirectSolve {
    pub fn new(a: &SparseMatrix) -> Result<Self> {
        Ok(Self { lu: a.to_dense().lu()? })
    }
}

impl LinearOperator for DirectSolve {
    fn dim(&self) -> usize {
        self.lu.dim()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.lu.solve(x).expect("dimension")
    }
}

/// Any of the preconditioners, bound to its hierarchy or decomposition.
pub enum PreconditionerAction<'a> {
    Mg(Multigrid<'a>),
    Dd(DdPreconditioner<'a>),
    Direct(DirectSolve),
}

impl PreconditionerAction<'_> {
    pub fn try_apply(&self, r: &[f64]) -> Result<Vec<f64>> {
        match self {
            PreconditionerAction::Mg(m) => m.try_apply(r),
            PreconditionerAction::Dd(d) => d.try_apply(r),
            PreconditionerAction::Direct(d) => Ok(d.apply(r)),
        }
    }
}

impl LinearOperator for PreconditionerAction<'_> {
    fn dim(&self) -> usize {
        match self {
            PreconditionerAction::Mg(m) => m.dim(),
            PreconditionerAction::Dd(d) => d.dim(),
            PreconditionerAction::Direct(d) => d.dim(),
        }
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        match self {
            PreconditionerAction::Mg(m) => m.apply(x),
            PreconditionerAction::Dd(d) => d.apply(x),
            PreconditionerAction::Direct(d) => d.apply(x),
        }
    }
    fn apply_undamped(&self, x: &[f64]) -> Vec<f64> {
        match self {
            PreconditionerAction::Mg(m) => m.apply_undamped(x),
            PreconditionerAction::Dd(d) => d.apply_undamped(x),
            PreconditionerAction::Direct(d) => d.apply(x),
        }
    }
}
