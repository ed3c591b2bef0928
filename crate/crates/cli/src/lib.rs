//! Configuration parsing, experiment dispatch and deterministic output for
//! the `gyrospin` command-line tool.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use serde::Serialize;
use std::path::{Path, PathBuf};

use gyrospin_core::model::DerivedScales;

pub use commands::Command;
pub use config::RunConfig;
pub use error::CliError;

use output::{OutputDir, OutputFile};

/// Contents of `manifest.json`.
#[derive(Serialize)]
pub struct Manifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: &'a RunConfig,
    pub scales: Option<DerivedScales>,
    pub summary: serde_json::Map<String, serde_json::Value>,
    pub warnings: Vec<String>,
    pub outputs: Vec<OutputFile>,
}

/// What a successful run left behind.
#[derive(Debug)]
pub struct RunReport {
    pub directory: PathBuf,
    pub manifest: PathBuf,
    pub warnings: Vec<String>,
}

/// Options shared by every subcommand.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

/// Loads the configuration, runs `cmd` on a pool of `jobs` workers and
/// writes the CSV files and manifest.
pub fn execute(cmd: Command, config_path: &Path, opts: &RunOptions) -> Result<RunReport, CliError> {
    let cfg = RunConfig::load(config_path)?;
    let phys = cfg.resolve()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = opts.jobs {
        if n == 0 {
            return Err(CliError::range("--jobs", "must be at least 1"));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Numeric(format!("worker pool: {e}")))?;
    let outcome = pool.install(|| commands::run(cmd, &cfg, &phys))?;

    let directory = opts.out.clone().unwrap_or_else(|| PathBuf::from(&cfg.output.directory));
    let mut dir = OutputDir::create(&directory)?;
    for (name, csv) in &outcome.tables {
        dir.write_csv(name, csv)?;
    }
    let scales = commands::scales(&phys).ok();
    let warnings = outcome.warnings.clone();
    let manifest = dir.finish(|outputs| Manifest {
        tool: "gyrospin",
        version: env!("CARGO_PKG_VERSION"),
        command: cmd.name(),
        config: &cfg,
        scales,
        summary: outcome.summary,
        warnings: outcome.warnings,
        outputs,
    })?;
    Ok(RunReport { directory, manifest, warnings })
}
