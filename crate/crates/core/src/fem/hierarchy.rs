//! Nested mesh hierarchies with per-level operators and transfers.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::assemble::assemble;
use super::mesh::{uniform_refine, Mesh};
use super::problem::ProblemSpec;
use super::transfer::{build_prolongation, eliminate_transfer, galerkin_coarsen, pin_constrained};
use crate::error::{Result, SchwarzError};
use crate::linalg::io::write_matrix_market;
use crate::linalg::SparseMatrix;

/// How coarse operators are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoarseMode {
    /// A_{k-1} = c·Pᵀ A_k P
    Galerkin,
    /// A_{k-1} assembled on the coarse mesh
    Discretized,
}

/// Transfer from the next coarser level into this one.
#[derive(Debug, Clone)]
pub struct Transfer {
    /// I_{k-1}^k with constrained rows and columns removed.
    pub prolongation: SparseMatrix,
    /// I_k^{k-1}; c·Pᵀ unless deliberately replaced.
    pub restriction: SparseMatrix,
    pub c: f64,
}

#[derive(Debug, Clone)]
pub struct Level {
    pub mesh: Mesh,
    pub a: SparseMatrix,
    /// None on the coarsest level.
    pub transfer: Option<Transfer>,
}

impl Level {
    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn constrained(&self) -> &[bool] {
        self.mesh.boundary()
    }
}

/// Levels ordered coarsest first; the right-hand side belongs to the finest.
#[derive(Debug, Clone)]
pub struct Hierarchy {
    pub levels: Vec<Level>,
    pub rhs: Vec<f64>,
    pub mode: CoarseMode,
}

/// Refines `base` `levels − 1` times and assembles the finest system; coarse
/// operators follow `mode`. All scalings c_k are 1.
pub fn build_hierarchy(p: &ProblemSpec, base: &Mesh, levels: usize, mode: CoarseMode) -> Result<Hierarchy> {
    if levels < 2 {
        return Err(SchwarzError::Config(format!("a hierarchy needs at least 2 levels, got {levels}")));
    }
    let mut meshes = vec![base.clone()];
    for _ in 1..levels {
        let next = uniform_refine(meshes.last().unwrap());
        meshes.push(next);
    }
    let mut transfers = Vec::with_capacity(levels - 1);
    for k in 1..levels {
        let p_raw = build_prolongation(&meshes[k - 1], &meshes[k])?;
        let pk = eliminate_transfer(&p_raw, meshes[k].boundary(), meshes[k - 1].boundary());
        transfers.push(pk);
    }
    let (a_fine, rhs) = assemble(&meshes[levels - 1], p)?;
    let mut ops = vec![a_fine];
    for k in (1..levels).rev() {
        let a_coarse = match mode {
            CoarseMode::Galerkin => {
                let g = galerkin_coarsen(ops.last().unwrap(), &transfers[k - 1], 1.0)?;
                pin_constrained(&g, meshes[k - 1].boundary())
            }
            CoarseMode::Discretized => assemble(&meshes[k - 1], p)?.0,
        };
        ops.push(a_coarse);
    }
    ops.reverse();
    let mut out = Vec::with_capacity(levels);
    let mut transfers = transfers.into_iter();
    for (k, (mesh, a)) in meshes.into_iter().zip(ops).enumerate() {
        let transfer = if k == 0 {
            None
        } else {
            let prolongation = transfers.next().unwrap();
            let restriction = prolongation.transpose();
            Some(Transfer { prolongation, restriction, c: 1.0 })
        };
        out.push(Level { mesh, a, transfer });
    }
    Ok(Hierarchy { levels: out, rhs, mode })
}

impl Hierarchy {
    pub fn n_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn finest(&self) -> &Level {
        self.levels.last().unwrap()
    }

    pub fn a(&self) -> &SparseMatrix {
        &self.finest().a
    }

    pub fn dim(&self) -> usize {
        self.finest().dim()
    }

    /// Keeps levels `from..` (coarsest dropped first); needs at least two.
    pub fn truncated(&self, from: usize) -> Result<Self> {
        if self.levels.len() < from + 2 {
            return Err(SchwarzError::Config("truncation leaves fewer than 2 levels".into()));
        }
        let mut levels = self.levels[from..].to_vec();
        levels[0].transfer = None;
        Ok(Self { levels, rhs: self.rhs.clone(), mode: self.mode })
    }

    /// Replaces the restriction into level k − 1 (used to build designated
    /// violations of the transpose condition).
    pub fn set_restriction(&mut self, k: usize, r: SparseMatrix) -> Result<()> {
        let t = self.levels[k]
            .transfer
            .as_mut()
            .ok_or_else(|| SchwarzError::Config(format!("level {k} has no transfer")))?;
        if r.nrows() != t.prolongation.ncols() || r.ncols() != t.prolongation.nrows() {
            return Err(SchwarzError::DimensionMismatch { expected: t.prolongation.ncols(), got: r.nrows() });
        }
        t.restriction = r;
        Ok(())
    }

    /// Injection restriction on level k: coarse vertex i takes fine value i.
    pub fn injection(&self, k: usize) -> SparseMatrix {
        let nc = self.levels[k - 1].dim();
        let nf = self.levels[k].dim();
        let free = self.levels[k - 1].constrained();
        SparseMatrix::from_triplets(nc, nf, (0..nc).filter(|&i| !free[i]).map(|i| (i, i, 1.0)).collect::<Vec<_>>())
    }

    /// Product of prolongations from level k to the finest level.
    pub fn composite_prolongation(&self, k: usize) -> Result<SparseMatrix> {
        let mut p = SparseMatrix::identity(self.levels[k].dim());
        for l in k + 1..self.levels.len() {
            p = self.levels[l].transfer.as_ref().unwrap().prolongation.matmul(&p)?;
        }
        Ok(p)
    }

    /// max |A_{k-1} − c·Pᵀ A_k P| over unconstrained entries, for each k ≥ 1.
    pub fn galerkin_defects(&self) -> Result<Vec<f64>> {
        (1..self.levels.len())
            .map(|k| {
                let t = self.levels[k].transfer.as_ref().unwrap();
                let g = galerkin_coarsen(&self.levels[k].a, &t.prolongation, t.c)?;
                let g = pin_constrained(&g, self.levels[k - 1].constrained());
                Ok(self.levels[k - 1].a.add_scaled(&g, -1.0)?.max_abs())
            })
            .collect()
    }

    /// Writes `A_k.mtx` and `P_k.mtx` per level plus `manifest.json`.
    pub fn export(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        let mut entries = Vec::new();
        for (k, l) in self.levels.iter().enumerate() {
            let a_file = format!("A_{k}.mtx");
            write_matrix_market(dir.join(&a_file), &l.a, true)?;
            let (p_file, c) = match &l.transfer {
                Some(t) => {
                    let f = format!("P_{k}.mtx");
                    write_matrix_market(dir.join(&f), &t.prolongation, false)?;
                    (Some(f), Some(t.c))
                }
                None => (None, None),
            };
            entries.push(ManifestLevel {
                level: k,
                dim: l.dim(),
                elements: l.mesh.n_triangles(),
                a: a_file,
                p: p_file,
                c,
            });
        }
        let manifest = Manifest { mode: self.mode, levels: entries };
        let text = serde_json::to_string_pretty(&manifest).map_err(|e| SchwarzError::Config(e.to_string()))?;
        fs::write(dir.join("manifest.json"), text)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestLevel {
    pub level: usize,
    pub dim: usize,
    pub elements: usize,
    pub a: String,
    pub p: Option<String>,
    pub c: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub mode: CoarseMode,
    pub levels: Vec<ManifestLevel>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::meshes;

    #[test]
    fn galerkin_mode_is_variational() {
        let h = build_hierarchy(&ProblemSpec::pbe_surrogate(), &meshes::pbe_coarse(), 3, CoarseMode::Galerkin).unwrap();
        for d in h.galerkin_defects().unwrap() {
            assert!(d < 1e-12, "{d}");
        }
        assert_eq!(h.levels.iter().map(Level::dim).collect::<Vec<_>>(), vec![9, 27, 93]);
    }

    #[test]
    fn constant_coefficients_agree_across_modes() {
        let p = ProblemSpec::lshape();
        let g = build_hierarchy(&p, &meshes::lshape_coarse(), 3, CoarseMode::Galerkin).unwrap();
        let d = build_hierarchy(&p, &meshes::lshape_coarse(), 3, CoarseMode::Discretized).unwrap();
        for (lg, ld) in g.levels.iter().zip(&d.levels) {
            assert!(lg.a.add_scaled(&ld.a, -1.0).unwrap().max_abs() < 1e-12);
        }
    }

    #[test]
    fn discontinuous_coefficients_break_galerkin() {
        let h =
            build_hierarchy(&ProblemSpec::pbe_surrogate(), &meshes::pbe_coarse(), 3, CoarseMode::Discretized).unwrap();
        assert!(h.galerkin_defects().unwrap().iter().all(|&d| d > 1e-3));
    }

    #[test]
    fn one_level_rejected() {
        assert!(build_hierarchy(&ProblemSpec::lshape(), &meshes::lshape_coarse(), 1, CoarseMode::Galerkin).is_err());
    }

    #[test]
    fn composite_prolongation_spans_levels() {
        let h = build_hierarchy(&ProblemSpec::lshape(), &meshes::lshape_coarse(), 3, CoarseMode::Galerkin).unwrap();
        let p = h.composite_prolongation(0).unwrap();
        assert_eq!((p.nrows(), p.ncols()), (313, 25));
    }
}
