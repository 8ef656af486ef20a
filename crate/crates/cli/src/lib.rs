//! Config-driven runner for sampling-strategy experiments.
//!
//! `run` executes one plan and writes `report.json`, `curves.csv`, and one
//! `points_<strategy>_<budget>.csv` per strategy and budget. `ingest` reads a
//! SampleCsv file back into a measurement set.

pub mod config;
pub mod report;
pub mod samples;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use brdf_sampler_core::efficiency::Experiment;
use brdf_sampler_core::{MeasurementSet, StrategyFamily};

pub use config::{parse_config, ExperimentConfig, Format};
pub use report::write_outputs;
pub use samples::{read_samples, write_samples};

pub const DEFAULT_OUT_DIR: &str = "out";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),

    #[error("{file}:{line}: {message}")]
    Samples {
        file: String,
        line: u64,
        message: String,
    },

    #[error("run failed: {0}")]
    Run(#[from] brdf_sampler_core::Error),

    #[error("{path}: {error}")]
    Io {
        path: PathBuf,
        error: std::io::Error,
    },

    #[error("writing {path}: {error}")]
    Csv { path: PathBuf, error: csv::Error },
}

impl CliError {
    /// 2 for invalid input, 1 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Samples { .. } => 2,
            CliError::Run(_) | CliError::Io { .. } | CliError::Csv { .. } => 1,
        }
    }

    pub(crate) fn io(path: &Path, error: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            error,
        }
    }
}

/// Command-line overrides for a run.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub replicates: Option<usize>,
}

/// Loads a config file and applies the overrides.
pub fn load_config(path: &Path, options: &RunOptions) -> Result<ExperimentConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut config = parse_config(&text)?;
    if let Some(seed) = options.seed {
        config.plan.seed = seed;
    }
    if let Some(replicates) = options.replicates {
        config.plan.replicates = replicates;
        config
            .plan
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok(config)
}

/// Runs the plan in `config_path` and returns the output directory.
pub fn run(config_path: &Path, options: &RunOptions) -> Result<PathBuf, CliError> {
    let config = load_config(config_path, options)?;
    let out = options
        .out
        .clone()
        .or_else(|| config.output.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    let result = Experiment::new(&config.plan)
        .map_err(|e| CliError::Config(e.to_string()))?
        .run()?;
    write_outputs(&out, &result, &config.formats)?;
    Ok(out)
}

/// Reads a SampleCsv file.
pub fn ingest(path: &Path) -> Result<MeasurementSet, CliError> {
    let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    read_samples(std::io::BufReader::new(file), &path.display().to_string())
}

/// One-line description of an ingested set.
pub fn ingest_summary(set: &MeasurementSet) -> String {
    let c = set.configuration();
    let sizes: Vec<String> = c.p_refl().iter().map(usize::to_string).collect();
    format!(
        "rows {}, incoming directions {}, reflections per incoming direction [{}]",
        set.n(),
        c.p_inc(),
        sizes.join(", ")
    )
}

/// Every strategy family with its default parameters.
pub fn list_strategies() -> String {
    let mut out = String::new();
    for family in StrategyFamily::defaults() {
        let adaptive = if family.is_adaptive() {
            " (adaptive)"
        } else {
            ""
        };
        let _ = writeln!(out, "{}{adaptive}", family.name());
        let params = family.params_json();
        let fields = params
            .as_object()
            .expect("family parameters are a JSON object");
        if fields.is_empty() {
            let _ = writeln!(out, "    no parameters");
        }
        for (key, value) in fields {
            let _ = writeln!(out, "    {key} = {value}");
        }
    }
    out
}
