//! Linear diffusion-reaction problems −∇·(ε∇u) + κ̄²u = Σ zᵢ δ(x − xᵢ) with
//! Dirichlet data.

use std::f64::consts::PI;
use std::fmt;

pub type ScalarField = Box<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSource {
    pub x: f64,
    pub y: f64,
    pub charge: f64,
}

pub struct ProblemSpec {
    pub diffusion: ScalarField,
    pub reaction: ScalarField,
    pub sources: Vec<PointSource>,
    pub dirichlet: ScalarField,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec").field("sources", &self.sources).finish_non_exhaustive()
    }
}

impl ProblemSpec {
    /// −Δu = 0 with the given boundary values.
    pub fn laplace(dirichlet: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            diffusion: Box::new(|_, _| 1.0),
            reaction: Box::new(|_, _| 0.0),
            sources: Vec::new(),
            dirichlet: Box::new(dirichlet),
        }
    }

    /// Laplace on the L-shape with u = √r sin(θ/2), θ ∈ [0, 2π).
    pub fn lshape() -> Self {
        Self::laplace(lshape_exact)
    }

    /// Linearized Poisson-Boltzmann surrogate on the unit square.
    pub fn pbe_surrogate() -> Self {
        let sources = PBE_CHARGES.iter().map(|&[x, y]| PointSource { x, y, charge: 1.0 }).collect::<Vec<_>>();
        let boundary_sources = sources.clone();
        Self {
            diffusion: Box::new(|x, y| if in_molecule(x, y) { EPS_INSIDE } else { EPS_OUTSIDE }),
            reaction: Box::new(|x, y| if in_molecule(x, y) { 0.0 } else { 1.0 }),
            sources,
            dirichlet: Box::new(move |x, y| screened_coulomb(&boundary_sources, x, y)),
        }
    }
}

pub fn lshape_exact(x: f64, y: f64) -> f64 {
    let r = x.hypot(y);
    let mut theta = y.atan2(x);
    if theta < 0.0 {
        theta += 2.0 * PI;
    }
    r.sqrt() * (0.5 * theta).sin()
}

pub const EPS_INSIDE: f64 = 1.0;
pub const EPS_OUTSIDE: f64 = 80.0;

/// Pentagon straddling the middle row of coarse vertices; none of its sides
/// lie on a coarse edge.
pub const MOLECULE: [[f64; 2]; 5] = [[0.38, 0.33], [0.64, 0.36], [0.68, 0.52], [0.52, 0.64], [0.34, 0.52]];

pub const PBE_CHARGES: [[f64; 2]; 3] = [[0.42, 0.40], [0.58, 0.43], [0.5, 0.55]];

/// Even-odd crossing test against [`MOLECULE`].
pub fn in_molecule(x: f64, y: f64) -> bool {
    let mut inside = false;
    let n = MOLECULE.len();
    for i in 0..n {
        let [xi, yi] = MOLECULE[i];
        let [xj, yj] = MOLECULE[(i + n - 1) % n];
        if (yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi {
            inside = !inside;
        }
    }
    inside
}

fn screened_coulomb(sources: &[PointSource], x: f64, y: f64) -> f64 {
    sources
        .iter()
        .map(|s| {
            let r = (x - s.x).hypot(y - s.y);
            s.charge * (-r).exp() / (4.0 * PI * EPS_OUTSIDE * r)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lshape_solution_values() {
        assert!(lshape_exact(0.7, 0.0).abs() < 1e-15);
        // θ = 3π/2 on the negative y axis
        assert!((lshape_exact(0.0, -0.5) - 0.5).abs() < 1e-15);
        assert!((lshape_exact(0.0, 1.0) - (PI / 4.0).sin()).abs() < 1e-15);
        assert!((lshape_exact(-1.0, 0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn charges_sit_inside_molecule() {
        for [x, y] in PBE_CHARGES {
            assert!(in_molecule(x, y));
        }
        assert!(!in_molecule(0.1, 0.1));
        assert!(!in_molecule(0.9, 0.5));
    }
}
