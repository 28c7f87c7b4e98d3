use std::path::PathBuf;
use std::process::ExitCode;

use axivem::bench::{run_case, BenchCase, Scale};
use axivem::config::RunConfig;
use axivem::run::{convergence_study, execute, write_outputs};
use axivem::VemError;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "axivem", version, about = "Axisymmetric virtual element solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the analysis described by a TOML or JSON config.
    Run {
        config: PathBuf,
        /// Refinement study with this many levels instead of a single run.
        #[arg(long, value_name = "LEVELS")]
        convergence: Option<usize>,
        /// Also write a VTK polygon file.
        #[arg(long)]
        vtk: bool,
        /// Output directory (overrides the config).
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Run the benchmark suite, or one case of it.
    Bench {
        #[arg(long, value_name = "ID")]
        case: Option<String>,
        /// Use the full reference mesh sizes.
        #[arg(long)]
        full: bool,
    },
}

fn run(config: PathBuf, convergence: Option<usize>, vtk: bool, out: Option<PathBuf>) -> Result<(), VemError> {
    let cfg = RunConfig::load(&config)?;
    let dir = out.unwrap_or_else(|| cfg.output.dir.clone());
    if let Some(levels) = convergence {
        let report = convergence_study(&cfg, levels)?;
        std::fs::create_dir_all(&dir)?;
        std::fs::write(dir.join("convergence.csv"), report.csv())?;
        for l in &report.levels {
            println!(
                "level {}  elements {:>7}  h {:.4e}  L2 error {:.4e}",
                l.level, l.n_elements, l.h, l.l2_error
            );
        }
        println!("fitted slope {:.3}", report.slope);
        return Ok(());
    }
    let outcome = execute(&cfg)?;
    for f in write_outputs(&outcome, &dir, vtk || cfg.output.vtk)? {
        println!("wrote {}", f.display());
    }
    if let Some(e) = outcome.l2_error {
        println!("relative L2 displacement error {e:.4e}");
    }
    Ok(())
}

fn bench(case: Option<String>, full: bool) -> Result<bool, VemError> {
    let cases = match case {
        Some(id) => vec![BenchCase::from_id(&id)?],
        None => BenchCase::ALL.to_vec(),
    };
    let scale = if full { Scale::Full } else { Scale::Desk };
    let mut all = true;
    for c in cases {
        match run_case(c, scale) {
            Ok(report) => {
                all &= report.pass();
                println!("{report}");
            }
            Err(e) => {
                all = false;
                println!("[FAIL] {}: {e}", c.id());
            }
        }
    }
    Ok(all)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            convergence,
            vtk,
            out,
        } => run(config, convergence, vtk, out).map(|_| true),
        Command::Bench { case, full } => bench(case, full),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
