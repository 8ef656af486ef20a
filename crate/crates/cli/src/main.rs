use std::path::PathBuf;
use std::process::ExitCode;

use brdf_sampler::{ingest, ingest_summary, list_strategies, run, CliError, RunOptions};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "brdf-sampler",
    version,
    about = "Compare BRDF sampling strategies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment plan in a JSON config.
    Run {
        config: PathBuf,
        /// Output directory [default: the config's "output", else ./out]
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the config's replicate count.
        #[arg(long)]
        replicates: Option<usize>,
    },
    /// Validate a SampleCsv file and summarize its structure.
    Ingest { file: PathBuf },
    /// List strategy families and their default parameters.
    Strategies,
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run {
            config,
            out,
            seed,
            replicates,
        } => {
            let dir = run(
                &config,
                &RunOptions {
                    out,
                    seed,
                    replicates,
                },
            )?;
            println!("wrote {}", dir.display());
        }
        Command::Ingest { file } => println!("{}", ingest_summary(&ingest(&file)?)),
        Command::Strategies => print!("{}", list_strategies()),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
