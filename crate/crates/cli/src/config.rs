//! Experiment config files: an `ExperimentPlan` plus output settings.

use std::path::PathBuf;

use brdf_sampler_core::efficiency::ExperimentPlan;
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::CliError;

/// Which files a run writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    /// `report.json`
    Json,
    /// `curves.csv`
    Csv,
    /// `points_<strategy>_<budget>.csv`
    Points,
}

pub const ALL_FORMATS: [Format; 3] = [Format::Json, Format::Csv, Format::Points];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub plan: ExperimentPlan,
    /// `"output"`; the `--out` flag takes precedence.
    pub output: Option<PathBuf>,
    /// `"formats"`; all formats when absent.
    pub formats: Vec<Format>,
}

fn invalid(message: impl Into<String>) -> CliError {
    CliError::Config(message.into())
}

fn take<T: serde::de::DeserializeOwned>(
    map: &mut Map<String, Value>,
    key: &str,
) -> Result<Option<T>, CliError> {
    map.remove(key)
        .map(|v| serde_json::from_value(v).map_err(|e| invalid(format!("`{key}`: {e}"))))
        .transpose()
}

/// Parses and validates a config document. Unknown keys anywhere are
/// rejected, and errors name the path of the offending key.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, CliError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| invalid(format!("not valid JSON: {e}")))?;
    let Value::Object(mut map) = value else {
        return Err(invalid("the top level must be a JSON object"));
    };
    let output = take::<PathBuf>(&mut map, "output")?;
    let formats = take::<Vec<Format>>(&mut map, "formats")?.unwrap_or_else(|| ALL_FORMATS.to_vec());
    let plan: ExperimentPlan =
        serde_path_to_error::deserialize(Value::Object(map)).map_err(|e| {
            let path = e.path().to_string();
            if path == "." {
                invalid(e.into_inner().to_string())
            } else {
                invalid(format!("`{path}`: {}", e.into_inner()))
            }
        })?;
    plan.validate().map_err(|e| invalid(e.to_string()))?;
    Ok(ExperimentConfig {
        plan,
        output,
        formats,
    })
}
