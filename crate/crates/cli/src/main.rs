use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;

use gyrospin_cli::{execute, Command, RunOptions};

/// Spin-rotor experiments for levitated nanodiamonds.
#[derive(Parser)]
#[command(name = "gyrospin", version)]
struct Args {
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output.directory`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long)]
    jobs: Option<usize>,
    /// Exit with code 4 when any regime warning is raised.
    #[arg(long)]
    strict: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let opts = RunOptions { out: args.out, jobs: args.jobs };
    match execute(args.command, &args.config, &opts) {
        Ok(report) => {
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            println!("{}", report.manifest.display());
            if args.strict && !report.warnings.is_empty() {
                ExitCode::from(4)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
