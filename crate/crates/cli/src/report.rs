//! Output files of a run.

use std::fs;
use std::path::Path;

use brdf_sampler_core::efficiency::{PlanRun, StrategyComparisonReport};

use crate::config::Format;
use crate::samples::{format_float, write_samples};
use crate::CliError;

pub const REPORT_FILE: &str = "report.json";
pub const CURVES_FILE: &str = "curves.csv";
pub const CURVES_HEADER: [&str; 8] = [
    "strategy",
    "budget",
    "n",
    "cost",
    "error",
    "standard_error",
    "nonconverged_fits",
    "ratio",
];

/// Label with every character outside `[A-Za-z0-9_-]` replaced by `_`.
pub fn file_label(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

pub fn points_file_name(label: &str, budget: usize) -> String {
    format!("points_{}_{budget}.csv", file_label(label))
}

fn ratio_at(comparison: Option<&StrategyComparisonReport>, budget: usize) -> String {
    comparison
        .and_then(|c| c.trajectory.iter().find(|p| p.budget == budget))
        .and_then(|p| p.ratio)
        .map(format_float)
        .unwrap_or_default()
}

/// `curves.csv` text. The ratio column is the comparison's e1/e2 and is blank
/// when the plan has no comparison or the ratio is undefined.
pub fn curves_csv(run: &PlanRun) -> csv::Result<Vec<u8>> {
    let report = &run.report;
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(CURVES_HEADER)?;
    for curve in &report.curves {
        for p in &curve.points {
            out.write_record([
                curve.strategy.clone(),
                p.budget.to_string(),
                format_float(p.n),
                format_float(p.cost),
                format_float(p.error),
                p.standard_error.map(format_float).unwrap_or_default(),
                p.nonconverged_fits.to_string(),
                ratio_at(report.comparison.as_ref(), p.budget),
            ])?;
        }
    }
    out.into_inner().map_err(|e| e.into_error().into())
}

/// Renders every requested file, then writes them all into `dir`.
pub fn write_outputs(dir: &Path, run: &PlanRun, formats: &[Format]) -> Result<(), CliError> {
    let mut files: Vec<(String, Vec<u8>)> = Vec::new();
    if formats.contains(&Format::Json) {
        let mut text = serde_json::to_string_pretty(&run.report).expect("reports serialize");
        text.push('\n');
        files.push((REPORT_FILE.into(), text.into_bytes()));
    }
    let csv_error = |name: &str, error| CliError::Csv {
        path: dir.join(name),
        error,
    };
    if formats.contains(&Format::Csv) {
        files.push((
            CURVES_FILE.into(),
            curves_csv(run).map_err(|e| csv_error(CURVES_FILE, e))?,
        ));
    }
    if formats.contains(&Format::Points) {
        for (label, budget, set) in &run.samples {
            let name = points_file_name(label, *budget);
            let mut bytes = Vec::new();
            write_samples(set, &mut bytes).map_err(|e| csv_error(&name, e))?;
            files.push((name, bytes));
        }
    }
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    for (name, bytes) in files {
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
    }
    Ok(())
}
