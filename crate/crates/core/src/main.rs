use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use perclab::experiments::{load_and_run, report, EXPERIMENTS};
use perclab::graph::{export_patch, GraphFamily, GraphPatch};

#[derive(Parser)]
#[command(name = "perclab", version, about = "Bond percolation experiments on transitive-graph patches")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config.
    Run { config: PathBuf },
    /// Summarise the result records in a directory.
    Report { dir: PathBuf },
    /// List the available experiments.
    ListExperiments,
    /// Print a patch in the text exchange format.
    ExportPatch {
        #[arg(long)]
        family: GraphFamily,
        #[arg(long)]
        radius: usize,
    },
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("PERCLAB_THREADS") else { return Ok(()) };
    let n: usize = v.parse().map_err(|_| format!("PERCLAB_THREADS must be a positive integer, got '{v}'"))?;
    if n == 0 {
        return Err("PERCLAB_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("perclab: {e}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Run { config } => load_and_run(&config).map(|records| {
            let failed = records.iter().filter(|r| r.verdict == Some(false)).count();
            for r in &records {
                println!("{}", serde_json::to_string(r).expect("record serialises"));
            }
            if failed > 0 {
                eprintln!("perclab: {failed} check(s) failed");
            }
        }),
        Command::Report { dir } => report(&dir).map(|rep| {
            if rep.passed + rep.failed == 0 && rep.data.is_empty() && rep.summary.starts_with("no records") {
                eprintln!("perclab: warning: no records in {}", dir.display());
            }
            print!("{}", rep.summary);
        }),
        Command::ListExperiments => {
            for (name, about) in EXPERIMENTS {
                println!("{name:<20} {about}");
            }
            Ok(())
        }
        Command::ExportPatch { family, radius } => GraphPatch::build(family, radius).map(|p| print!("{}", export_patch(&p))),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("perclab: {e}");
            ExitCode::FAILURE
        }
    }
}
