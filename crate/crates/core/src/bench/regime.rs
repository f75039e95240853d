//! Qualitative regime checks on a V-cycle grid and per-iteration cost
//! accounting.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fem::CoarseMode;
use crate::smooth::Schedule;

use super::config::{Accelerator, BenchMethod, ExperimentConfig, ProblemName};
use super::run::{run_experiment, ProblemCache, TableRow};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeCheck {
    pub id: char,
    pub description: String,
    pub passed: bool,
    pub evidence: String,
}

impl fmt::Display for RegimeCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) [{}] {}: {}", self.id, if self.passed { "ok" } else { "FAIL" }, self.description, self.evidence)
    }
}

fn find<'a>(rows: &'a [TableRow], pre: &str, post: &str, acc: Accelerator) -> Option<&'a TableRow> {
    let pre = Schedule::new(pre).ok()?;
    let post = Schedule::new(post).ok()?;
    rows.iter().find(|r| {
        r.config.method == BenchMethod::MultMg
            && r.config.coarse_mode == CoarseMode::Galerkin
            && r.config.accelerator == acc
            && r.config.pre == pre
            && r.config.post == post
    })
}

fn missing(id: char, description: &str) -> RegimeCheck {
    RegimeCheck { id, description: description.into(), passed: false, evidence: "required rows missing".into() }
}

fn mean_rate(history: &[f64]) -> f64 {
    let k = history.len() - 1;
    (history[k] / history[0]).powf(1.0 / k as f64)
}

fn is_symmetric_cycle(c: &ExperimentConfig) -> bool {
    c.post == c.pre.adjoint()
}

/// The five regime checks on a V-cycle table that contains the rows
/// (f,0), (f,b), (ff,ff), (fb,fb).
pub fn regime_checks(rows: &[TableRow]) -> Vec<RegimeCheck> {
    let mut out = Vec::new();

    let d = "nonsymmetric (ff,ff) unaccelerated needs no more iterations than symmetric (fb,fb)";
    out.push(match (find(rows, "ff", "ff", Accelerator::None), find(rows, "fb", "fb", Accelerator::None)) {
        (Some(x), Some(y)) => {
            let passed = matches!((x.iterations(), y.iterations()), (Some(a), Some(b)) if a <= b);
            RegimeCheck { id: 'a', description: d.into(), passed, evidence: format!("{} vs {}", x.cell(), y.cell()) }
        }
        _ => missing('a', d),
    });

    let d = "two (f,0) steps reduce the A-norm error at least as much as one (f,b) step";
    out.push(match (find(rows, "f", "0", Accelerator::None), find(rows, "f", "b", Accelerator::None)) {
        (Some(x), Some(y)) if x.history.len() > 1 && y.history.len() > 1 => {
            // mean contraction per step over the whole run
            let (two, one) = (mean_rate(&x.history).powi(2), mean_rate(&y.history));
            RegimeCheck {
                id: 'b',
                description: d.into(),
                passed: two <= one,
                evidence: format!("{two:.4} vs {one:.4}"),
            }
        }
        _ => missing('b', d),
    });

    let d = "CG on (f,0) does not converge within 100 iterations";
    out.push(match find(rows, "f", "0", Accelerator::Cg) {
        Some(x) => {
            let passed = x.iterations().is_none_or(|k| k > 100);
            RegimeCheck { id: 'c', description: d.into(), passed, evidence: x.cell() }
        }
        None => missing('c', d),
    });

    let d = "Bi-CGstab converges for every row";
    let bicg: Vec<&TableRow> = rows.iter().filter(|r| r.config.accelerator == Accelerator::Bicgstab).collect();
    out.push(if bicg.is_empty() {
        missing('d', d)
    } else {
        let bad: Vec<String> =
            bicg.iter().filter(|r| !r.converged()).map(|r| format!("{}={}", r.label(), r.cell())).collect();
        RegimeCheck {
            id: 'd',
            description: d.into(),
            passed: bad.is_empty(),
            evidence: if bad.is_empty() { format!("{} rows", bicg.len()) } else { bad.join(", ") },
        }
    });

    let d = "cheapest run to convergence is Bi-CGstab over a nonsymmetric cycle";
    let best = rows.iter().filter(|r| r.converged()).min_by_key(|r| r.flops);
    out.push(match best {
        Some(b) => RegimeCheck {
            id: 'e',
            description: d.into(),
            passed: b.config.accelerator == Accelerator::Bicgstab && !is_symmetric_cycle(&b.config),
            evidence: format!("{} {} ({} iterations, {} flops)", b.label(), b.config.accelerator, b.cell(), b.flops),
        },
        None => missing('e', d),
    });
    out
}

/// Per-iteration work of one method under the three accelerators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostRow {
    pub method: BenchMethod,
    pub variant: String,
    /// flops per iteration for none, cg, bicgstab
    pub flops: [f64; 3],
}

/// Reference ratios per iteration, normalized to the unaccelerated V-cycle
/// with one pre- and one post-sweep.
pub const REFERENCE_COSTS: [(BenchMethod, [f64; 3]); 4] = [
    (BenchMethod::MultMg, [1.0, 1.4, 2.6]),
    (BenchMethod::AddMg, [0.95, 1.3, 2.5]),
    (BenchMethod::MultDd, [3.5, 3.8, 7.5]),
    (BenchMethod::AddDd, [3.1, 3.4, 6.7]),
];

const COST_STEPS: usize = 6;

/// Measures flops per iteration over a few fixed steps for V-cycle (f,b),
/// additive MG with smoother fb, and both DD variants with four-sweep local
/// solves.
pub fn measure_costs(problem: ProblemName, levels: usize, cache: &mut ProblemCache) -> Result<Vec<CostRow>> {
    let mut out = Vec::new();
    for method in [BenchMethod::MultMg, BenchMethod::AddMg, BenchMethod::MultDd, BenchMethod::AddDd] {
        let mut flops = [0.0; 3];
        let mut variant = String::new();
        for (i, acc) in Accelerator::ALL.into_iter().enumerate() {
            let mut cfg = ExperimentConfig::new(problem, levels, method, acc);
            cfg.max_iterations = COST_STEPS;
            cfg.tol = 1e-300;
            match method {
                BenchMethod::MultMg => {}
                BenchMethod::AddMg => {
                    cfg.pre = Schedule::new("fb")?;
                    cfg.post = Schedule::empty();
                }
                _ => cfg.subdomain_solver = crate::smooth::SubdomainSolverKind::Nonsymmetric,
            }
            variant = cfg.row_label();
            let p = cache.for_experiment(&cfg)?;
            let row = run_experiment(&cfg, p);
            flops[i] = row.flops_per_iteration;
        }
        out.push(CostRow { method, variant, flops });
    }
    Ok(out)
}

/// Within-method ratios CG/UNACCEL and BiCG/UNACCEL, measured and reference.
pub fn cost_ratios(rows: &[CostRow]) -> Vec<(BenchMethod, [f64; 2], [f64; 2])> {
    rows.iter()
        .filter_map(|r| {
            let reference = REFERENCE_COSTS.iter().find(|(m, _)| *m == r.method)?.1;
            Some((
                r.method,
                [r.flops[1] / r.flops[0], r.flops[2] / r.flops[0]],
                [reference[1] / reference[0], reference[2] / reference[0]],
            ))
        })
        .collect()
}

pub fn emit_costs(rows: &[CostRow]) -> String {
    let base = rows.iter().find(|r| r.method == BenchMethod::MultMg).map_or(1.0, |r| r.flops[0]);
    let mut s = String::from("method  | variant         | UNACCEL |   CG | BiCG | reference\n");
    for r in rows {
        let reference = REFERENCE_COSTS.iter().find(|(m, _)| *m == r.method).map(|p| p.1).unwrap_or([0.0; 3]);
        s.push_str(&format!(
            "{:<7} | {:<15} | {:>7.2} | {:>4.2} | {:>4.2} | {:.2}/{:.2}/{:.2}\n",
            r.method.name(),
            r.variant,
            r.flops[0] / base,
            r.flops[1] / base,
            r.flops[2] / base,
            reference[0],
            reference[1],
            reference[2]
        ));
    }
    s
}
