//! Multiplicative (V-cycle) and additive multigrid preconditioners.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SchwarzError};
use crate::fem::Hierarchy;
use crate::linalg::{flops, vector, LinearOperator, Lu, SparseMatrix};
use crate::smooth::Schedule;

/// Smoothing strategy (ν₁, ν₂) and the additive damping ω.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MgConfig {
    /// ν₁, pre-smoothing R_k
    pub pre: Schedule,
    /// ν₂, post-smoothing R̄_k
    pub post: Schedule,
    /// damping of the additive sum; unused by the V-cycle
    pub omega: f64,
}

impl MgConfig {
    pub fn new(pre: &str, post: &str) -> Result<Self> {
        Ok(Self { pre: Schedule::new(pre)?, post: Schedule::new(post)?, omega: 1.0 })
    }

    /// Post-smoother set to the adjoint of the pre-smoother.
    pub fn symmetric(pre: &str) -> Result<Self> {
        let pre = Schedule::new(pre)?;
        let post = pre.adjoint();
        Ok(Self { pre, post, omega: 1.0 })
    }

    /// Additive level smoother ν applied once per level.
    pub fn additive(nu: &str, omega: f64) -> Result<Self> {
        Ok(Self { pre: Schedule::new(nu)?, post: Schedule::empty(), omega })
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    /// Smoother used by the additive method: ν₁ followed by ν₂.
    pub fn level_smoother(&self) -> Schedule {
        self.pre.then(&self.post)
    }

    pub fn label(&self) -> String {
        format!("{},{}", self.pre, self.post)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MgKind {
    Multiplicative,
    Additive,
}

/// A multigrid preconditioner bound to a hierarchy, with the coarsest
/// operator factored once.
#[derive(Debug, Clone)]
pub struct Multigrid<'h> {
    h: &'h Hierarchy,
    cfg: MgConfig,
    kind: MgKind,
    coarse: Lu,
}

impl<'h> Multigrid<'h> {
    pub fn new(h: &'h Hierarchy, cfg: MgConfig, kind: MgKind) -> Result<Self> {
        if h.n_levels() < 2 {
            return Err(SchwarzError::Config("multigrid needs at least 2 levels".into()));
        }
        if kind == MgKind::Additive && !(cfg.omega > 0.0) {
            return Err(SchwarzError::Config(format!("damping {} must be positive", cfg.omega)));
        }
        let coarse = h.levels[0].a.to_dense().lu()?;
        Ok(Self { h, cfg, kind, coarse })
    }

    pub fn multiplicative(h: &'h Hierarchy, cfg: MgConfig) -> Result<Self> {
        Self::new(h, cfg, MgKind::Multiplicative)
    }

    pub fn additive(h: &'h Hierarchy, cfg: MgConfig) -> Result<Self> {
        Self::new(h, cfg, MgKind::Additive)
    }

    pub fn config(&self) -> &MgConfig {
        &self.cfg
    }

    pub fn hierarchy(&self) -> &Hierarchy {
        self.h
    }

    pub fn try_apply(&self, r: &[f64]) -> Result<Vec<f64>> {
        let top = self.h.n_levels() - 1;
        if r.len() != self.h.dim() {
            return Err(SchwarzError::DimensionMismatch { expected: self.h.dim(), got: r.len() });
        }
        match self.kind {
            MgKind::Multiplicative => self.vcycle(top, r),
            MgKind::Additive => {
                let mut x = self.additive_sum(top, r, &self.cfg.level_smoother())?;
                vector::scale(self.cfg.omega, &mut x);
                Ok(x)
            }
        }
    }

    /// D_k r: pre-smooth from zero, coarse-correct, post-smooth.
    fn vcycle(&self, k: usize, r: &[f64]) -> Result<Vec<f64>> {
        if k == 0 {
            return self.coarse.solve(r);
        }
        let mut x = vec![0.0; r.len()];
        self.cycle(k, &mut x, r)?;
        Ok(x)
    }

    /// One V-cycle on A_k x = r starting from the given x (k ≥ 1).
    fn cycle(&self, k: usize, x: &mut [f64], r: &[f64]) -> Result<()> {
        let level = &self.h.levels[k];
        let t = level.transfer.as_ref().expect("fine levels carry a transfer");
        self.cfg.pre.apply(&level.a, x, r)?;
        let res = level.a.residual(x, r);
        let rc = t.restriction.spmv(&res)?;
        let xc = self.vcycle(k - 1, &rc)?;
        let corr = t.prolongation.spmv(&xc)?;
        vector::axpy(1.0, &corr, x);
        self.cfg.post.apply(&level.a, x, r)
    }

    /// Σ_{j ≤ k} I_j R_j I^j r, computed by restricting down and prolonging
    /// the accumulated corrections back up.
    fn additive_sum(&self, k: usize, r: &[f64], smoother: &Schedule) -> Result<Vec<f64>> {
        if k == 0 {
            return self.coarse.solve(r);
        }
        let level = &self.h.levels[k];
        let t = level.transfer.as_ref().expect("fine levels carry a transfer");
        let rc = t.restriction.spmv(r)?;
        let xc = self.additive_sum(k - 1, &rc, smoother)?;
        let mut x = t.prolongation.spmv(&xc)?;
        let local = smoother.solve(&level.a, r)?;
        vector::axpy(1.0, &local, &mut x);
        Ok(x)
    }
}

impl LinearOperator for Multigrid<'_> {
    fn dim(&self) -> usize {
        self.h.dim()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.try_apply(x).expect("multigrid application")
    }

    /// The V-cycle run on Au = f from u equals u + B(f − Au) without the
    /// outer residual.
    fn stationary_step(&self, a: &SparseMatrix, u: &mut [f64], f: &[f64], omega: f64) {
        if self.kind == MgKind::Multiplicative && omega == 1.0 && (std::ptr::eq(a, self.h.a()) || a == self.h.a()) {
            self.cycle(self.h.n_levels() - 1, u, f).expect("multigrid application");
        } else {
            let r = a.residual(u, f);
            let z = self.apply(&r);
            vector::axpy(omega, &z, u);
        }
    }

    fn apply_undamped(&self, x: &[f64]) -> Vec<f64> {
        match self.kind {
            MgKind::Multiplicative => self.apply(x),
            MgKind::Additive => {
                self.additive_sum(self.h.n_levels() - 1, x, &self.cfg.level_smoother()).expect("multigrid application")
            }
        }
    }
}

/// B r for the V-cycle defined by the hierarchy and (ν₁, ν₂).
pub fn apply_mult_mg(h: &Hierarchy, c: &MgConfig, r: &[f64]) -> Result<Vec<f64>> {
    Multigrid::multiplicative(h, c.clone())?.try_apply(r)
}

/// B r = ω Σ_k I_k R_k I^k r with an exact coarsest solve.
pub fn apply_add_mg(h: &Hierarchy, c: &MgConfig, r: &[f64]) -> Result<Vec<f64>> {
    Multigrid::additive(h, c.clone())?.try_apply(r)
}

/// Work of one application, in flops, measured on a zero-free probe.
pub fn measure_application<T: LinearOperator + ?Sized>(op: &T) -> u64 {
    let probe = vec![1.0; op.dim()];
    flops::measure(|| op.apply(&probe)).1
}
