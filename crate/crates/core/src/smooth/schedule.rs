//! Smoother schedules: words over {f, b} applied left to right.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::gauss_seidel::{gs_sweep_in_place, Direction};
use crate::error::{Result, SchwarzError};
use crate::linalg::SparseMatrix;

/// A sequence of forward/backward Gauss-Seidel sweeps. The empty schedule is
/// the zero smoother and prints as `0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Schedule(Vec<Direction>);

impl Schedule {
    pub fn new(seq: &str) -> Result<Self> {
        let seq = seq.trim();
        if seq == "0" {
            return Ok(Self::default());
        }
        seq.chars()
            .map(|c| match c {
                'f' => Ok(Direction::Forward),
                'b' => Ok(Direction::Backward),
                other => Err(SchwarzError::InvalidSchedule(format!("'{other}' in \"{seq}\""))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn sweeps(&self) -> &[Direction] {
        &self.0
    }

    /// Letters as written, empty for the zero smoother.
    pub fn word(&self) -> String {
        self.0.iter().map(|d| d.letter()).collect()
    }

    /// Reverse the word and swap f ↔ b.
    pub fn adjoint(&self) -> Self {
        Self(
            self.0
                .iter()
                .rev()
                .map(|d| match d {
                    Direction::Forward => Direction::Backward,
                    Direction::Backward => Direction::Forward,
                })
                .collect(),
        )
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.adjoint() == *self
    }

    /// s followed by t.
    pub fn then(&self, t: &Schedule) -> Self {
        Self(self.0.iter().chain(&t.0).copied().collect())
    }

    /// Applies the sweeps in order to x, in place.
    pub fn apply(&self, a: &SparseMatrix, x: &mut [f64], b: &[f64]) -> Result<()> {
        self.0.iter().try_for_each(|&d| gs_sweep_in_place(a, x, b, d))
    }

    /// Action of the smoother as an approximate inverse: the schedule run on
    /// Ax = r from x = 0.
    pub fn solve(&self, a: &SparseMatrix, r: &[f64]) -> Result<Vec<f64>> {
        let mut x = vec![0.0; r.len()];
        self.apply(a, &mut x, r)?;
        Ok(x)
    }
}

pub fn adjoint_schedule(s: &Schedule) -> Schedule {
    s.adjoint()
}

pub fn apply_schedule(s: &Schedule, a: &SparseMatrix, x: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    let mut y = x.to_vec();
    s.apply(a, &mut y, b)?;
    Ok(y)
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&self.word())
        }
    }
}

impl FromStr for Schedule {
    type Err = SchwarzError;
    fn from_str(s: &str) -> Result<Self> {
        Self::new(s)
    }
}

impl TryFrom<String> for Schedule {
    type Error = SchwarzError;
    fn try_from(s: String) -> Result<Self> {
        Self::new(&s)
    }
}

impl From<Schedule> for String {
    fn from(s: Schedule) -> String {
        s.to_string()
    }
}

/// Local solver used on each overlapping subdomain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubdomainSolverKind {
    /// dense LU of the local matrix
    Exact,
    /// two symmetric Gauss-Seidel iterations, "fbfb"
    Symmetric,
    /// four forward sweeps, "ffff"
    Nonsymmetric,
    /// "ffff" on forward passes and its adjoint "bbbb" on reverse passes
    Adjointed,
}

impl SubdomainSolverKind {
    /// Schedule used on a forward (`reverse = false`) or reverse pass; None
    /// for exact solves.
    pub fn schedule(self, reverse: bool) -> Option<Schedule> {
        let word = match (self, reverse) {
            (SubdomainSolverKind::Exact, _) => return None,
            (SubdomainSolverKind::Symmetric, _) => "fbfb",
            (SubdomainSolverKind::Nonsymmetric, _) => "ffff",
            (SubdomainSolverKind::Adjointed, false) => "ffff",
            (SubdomainSolverKind::Adjointed, true) => "bbbb",
        };
        Some(Schedule::new(word).expect("valid word"))
    }

    pub fn name(self) -> &'static str {
        match self {
            SubdomainSolverKind::Exact => "exact",
            SubdomainSolverKind::Symmetric => "symmetric",
            SubdomainSolverKind::Nonsymmetric => "nonsymmetric",
            SubdomainSolverKind::Adjointed => "adjointed",
        }
    }
}

impl FromStr for SubdomainSolverKind {
    type Err = SchwarzError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Self::Exact),
            "symmetric" => Ok(Self::Symmetric),
            "nonsymmetric" => Ok(Self::Nonsymmetric),
            "adjointed" => Ok(Self::Adjointed),
            other => Err(SchwarzError::Config(format!("unknown subdomain solver '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{materialize, FnOperator};

    fn smoother(s: &Schedule, a: &SparseMatrix) -> crate::linalg::DenseMatrix {
        let n = a.nrows();
        materialize(&FnOperator::new(n, |r: &[f64]| s.solve(a, r).unwrap()), n)
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(Schedule::new("").unwrap(), Schedule::empty());
        assert_eq!(Schedule::new("0").unwrap().to_string(), "0");
        assert_eq!(Schedule::new("ffb").unwrap().to_string(), "ffb");
        assert!(Schedule::new("fx").is_err());
    }

    #[test]
    fn adjoint_words() {
        let adj = |w: &str| Schedule::new(w).unwrap().adjoint().word();
        assert_eq!(adj("f"), "b");
        assert_eq!(adj("ffbb"), "ffbb");
        assert_eq!(adj("ff"), "bb");
        assert_eq!(adj("ffb"), "fbb");
        assert_eq!(adj(""), "");
        assert!(Schedule::new("fb").unwrap().is_self_adjoint());
    }

    #[test]
    fn empty_schedule_is_identity_on_x() {
        let a = SparseMatrix::laplacian_1d(4);
        let x = vec![1.0, -2.0, 3.0, 0.5];
        assert_eq!(apply_schedule(&Schedule::empty(), &a, &x, &[0.0; 4]).unwrap(), x);
    }

    #[test]
    fn composition_is_bit_exact() {
        let a = SparseMatrix::laplacian_1d(7);
        let b: Vec<f64> = (0..7).map(|i| (i as f64).sin()).collect();
        let x0 = vec![0.1; 7];
        let fb = apply_schedule(&Schedule::new("fb").unwrap(), &a, &x0, &b).unwrap();
        let f = apply_schedule(&Schedule::new("f").unwrap(), &a, &x0, &b).unwrap();
        let then_b = apply_schedule(&Schedule::new("b").unwrap(), &a, &f, &b).unwrap();
        assert_eq!(fb, then_b);
    }

    #[test]
    fn adjoint_schedule_is_transpose() {
        let mut rng = crate::linalg::random::rng(11);
        let a = crate::linalg::random::random_sparse_spd(&mut rng, 15, 4);
        for w in ["f", "ffb", "fff", "bfbf"] {
            let s = Schedule::new(w).unwrap();
            let m = smoother(&s, &a);
            let mt = smoother(&adjoint_schedule(&s), &a);
            assert!(m.transpose().add_scaled(&mt, -1.0).max_abs() < 1e-13, "{w}");
        }
        let sym = smoother(&Schedule::new("ffbb").unwrap(), &a);
        assert!(sym.max_asymmetry() < 1e-12 * sym.max_abs());
    }

    #[test]
    fn ff_propagator_is_square_of_f() {
        let a = SparseMatrix::laplacian_1d(9);
        let n = 9;
        let zero = vec![0.0; n];
        let prop = |w: &str| {
            let s = Schedule::new(w).unwrap();
            materialize(&FnOperator::new(n, |x: &[f64]| apply_schedule(&s, &a, x, &zero).unwrap()), n)
        };
        let e = prop("f");
        let e2 = prop("ff");
        assert!(e.matmul(&e).unwrap().add_scaled(&e2, -1.0).max_abs() < 1e-13);
    }

    #[test]
    fn subdomain_kinds() {
        use SubdomainSolverKind::*;
        assert!(Exact.schedule(false).is_none());
        assert_eq!(Adjointed.schedule(true).unwrap().word(), "bbbb");
        assert_eq!(Adjointed.schedule(false).unwrap().adjoint(), Adjointed.schedule(true).unwrap());
        assert!(Symmetric.schedule(false).unwrap().is_self_adjoint());
        assert_eq!("nonsymmetric".parse::<SubdomainSolverKind>().unwrap(), Nonsymmetric);
    }
}
