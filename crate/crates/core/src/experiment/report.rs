use super::config::ReportFormat;
use super::runner::ExperimentReport;
use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Environment variable naming a directory that relative output paths are
/// resolved against.
pub const OUTPUT_DIR_ENV: &str = "SPATIAL_ENT_OUTPUT_DIR";

pub const CSV_HEADER: &str =
    "sweep_param,sum_var,diff_var,inseparability,entangled,x_var_3,x_var_4,p_var_3,p_var_4,mc_delta";

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One row per sweep point. Absent values are empty cells.
pub fn render_csv(report: &ExperimentReport) -> String {
    let mut out = String::with_capacity(128 * (report.results.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for p in &report.results {
        let ins = p.inseparability;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            p.sweep_param,
            cell(ins.map(|i| i.sum_variance)),
            cell(ins.map(|i| i.diff_variance)),
            cell(ins.map(|i| i.value)),
            p.entangled(),
            p.x_var_3,
            cell(p.x_var_4),
            p.p_var_3,
            cell(p.p_var_4),
            cell(p.mc_delta),
        );
    }
    out
}

pub fn render_json(report: &ExperimentReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report).map_err(|e| Error::State(format!("serializing report: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn render(report: &ExperimentReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Csv => Ok(render_csv(report)),
        ReportFormat::Json => render_json(report),
    }
}

/// Prefixes a relative `path` with the directory in [`OUTPUT_DIR_ENV`], if set.
pub fn resolve_output_path(path: impl AsRef<Path>) -> PathBuf {
    let path = path.as_ref();
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() && !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Renders `report` and writes it to `path`, creating parent directories.
pub fn write_report(report: &ExperimentReport, format: ReportFormat, path: &Path) -> Result<()> {
    let text = render(report, format)?;
    let io = |e: std::io::Error| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(io)?;
    }
    std::fs::write(path, text).map_err(io)
}
