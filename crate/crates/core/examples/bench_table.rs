//! Runs a shipped table config and prints it with the regime checks.
//! Usage: cargo run --release --example bench_table [config.toml]

use schwarz::bench::{emit_table, regime_checks, run_grid, BenchConfig, Format, ProblemCache};

fn main() -> schwarz::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| format!("{}/configs/table6.toml", env!("CARGO_MANIFEST_DIR")));
    let cfg = BenchConfig::load(&path)?;
    let rows = run_grid(&cfg, false, &mut ProblemCache::new())?;
    print!("{}", emit_table(&rows, Format::Ascii));
    if cfg.regime_checks {
        for c in regime_checks(&rows) {
            println!("{c}");
        }
    }
    Ok(())
}
