use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use schwarz::bench::{
    certify_experiment, emit_costs, emit_table, emit_work_table, measure_costs, regime_checks, run_grid, BenchConfig,
    Format, ProblemCache, ProblemName,
};

#[derive(Parser)]
#[command(name = "schwarz-bench", about = "Schwarz preconditioner benchmark tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a table's grid and print it
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "ascii")]
        format: Format,
        /// attach desk-scale theorem and SPD flags to every row
        #[arg(long)]
        certify: bool,
        /// also print the work to convergence in Mflop
        #[arg(long)]
        work: bool,
    },
    /// Check theorem conditions and certify B for every row
    Certify {
        #[arg(long)]
        config: PathBuf,
    },
    /// Per-iteration work of each method and accelerator
    Costs {
        #[arg(long, default_value = "lshape")]
        problem: ProblemName,
        #[arg(long, default_value_t = 5)]
        levels: usize,
    },
}

fn run(config: PathBuf, format: Format, certify: bool, work: bool) -> schwarz::Result<bool> {
    let cfg = BenchConfig::load(&config)?;
    let mut cache = ProblemCache::new();
    let rows = run_grid(&cfg, certify, &mut cache)?;
    print!("{}", emit_table(&rows, format));
    if work {
        println!();
        print!("{}", emit_work_table(&rows, format));
    }
    let mut ok = true;
    for r in &rows {
        if let schwarz::bench::Status::Failed { message } = &r.status {
            eprintln!("{} {}: {message}", r.label(), r.config.accelerator);
        }
    }
    if cfg.regime_checks {
        println!();
        for c in regime_checks(&rows) {
            ok &= c.passed;
            println!("{c}");
        }
    }
    Ok(ok)
}

fn certify(config: PathBuf) -> schwarz::Result<bool> {
    let cfg = BenchConfig::load(&config)?;
    let mut cache = ProblemCache::new();
    let mut seen = Vec::new();
    let mut ok = true;
    for e in cfg.experiments()? {
        let key = (e.row_label(), e.coarse_mode);
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        let c = certify_experiment(&e, &mut cache)?;
        // sufficient conditions must imply an SPD preconditioner
        let sound = !c.conditions || c.spd;
        ok &= sound;
        println!(
            "{:<20} {:<11} conditions={} spd={} asym={:.2e} min_eig={:.3e}{}",
            e.row_label(),
            format!("{:?}", e.coarse_mode).to_lowercase(),
            c.conditions,
            c.spd,
            c.symmetry_defect,
            c.min_eig,
            if sound { "" } else { "  UNSOUND" }
        );
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, format, certify: c, work } => run(config, format, c, work),
        Command::Certify { config } => certify(config),
        Command::Costs { problem, levels } => {
            let mut cache = ProblemCache::new();
            measure_costs(problem, levels, &mut cache).map(|rows| {
                print!("{}", emit_costs(&rows));
                true
            })
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
