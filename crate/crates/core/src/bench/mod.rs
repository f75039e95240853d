//! Benchmark harness: the two test problems, the method × accelerator grid,
//! text tables, regime checks and cost accounting.

pub mod config;
pub mod problem;
pub mod regime;
pub mod run;
pub mod table;

pub use config::{Accelerator, BenchConfig, BenchMethod, ExperimentConfig, ProblemName, RowSpec};
pub use problem::{build_problem, BenchProblem};
pub use regime::{cost_ratios, emit_costs, measure_costs, regime_checks, CostRow, RegimeCheck};
pub use run::{certify_experiment, run_experiment, run_grid, CertSummary, ProblemCache, Status, TableRow};
pub use table::{emit_table, emit_work_table, Format};
