//! Batch front-end for the esmix simulator: JSON configs in, CSV tables and
//! SVG line plots out.

pub mod commands;
pub mod config;
pub mod plot;
pub mod table;

use std::fs;
use std::path::{Path, PathBuf};

pub use commands::{execute, CliError, Command};
pub use config::{parse_config, parse_config_with, ConfigError, Overrides, RunConfig};
pub use table::{Cell, Table};

/// `"x,y"` into its two column names.
pub fn parse_plot_spec(spec: &str) -> Result<(String, String), CliError> {
    match spec.split_once(',') {
        Some((x, y)) if !x.trim().is_empty() && !y.trim().is_empty() && !y.contains(',') => {
            Ok((x.trim().to_string(), y.trim().to_string()))
        }
        _ => Err(CliError::Usage(format!("plot spec `{spec}` must be `<x>,<y>`"))),
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Writes `<outdir>/<command>.csv` (or returns the CSV text when there is no
/// output directory) and one `<command>_<x>_<y>.svg` per plot spec.
pub fn write_outputs(
    cmd: Command,
    table: &Table,
    outdir: Option<&Path>,
    plots: &[(String, String)],
) -> Result<(Option<String>, Vec<PathBuf>), CliError> {
    let mut columns = Vec::with_capacity(plots.len());
    for (x, y) in plots {
        let col = |name: &str| {
            table.column(name).ok_or_else(|| CliError::Usage(format!("no column `{name}` in {} output", cmd.name())))
        };
        columns.push((col(x)?, col(y)?));
    }
    let dir = outdir.unwrap_or(Path::new("."));
    if outdir.is_some() {
        fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
    }
    let mut written = Vec::new();
    let csv = table.to_csv();
    let stdout = match outdir {
        Some(d) => {
            let path = d.join(format!("{}.csv", cmd.name()));
            write(&path, &csv)?;
            written.push(path);
            None
        }
        None => Some(csv),
    };
    for ((x, y), (xs, ys)) in plots.iter().zip(&columns) {
        let svg = plot::line_plot(x, y, xs, ys)
            .ok_or_else(|| CliError::Usage(format!("no finite points to plot for {x},{y}")))?;
        let path = dir.join(format!("{}_{x}_{y}.svg", cmd.name()));
        write(&path, &svg)?;
        written.push(path);
    }
    Ok((stdout, written))
}
