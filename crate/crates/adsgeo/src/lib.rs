//! Batch driver for the adsgeo checks: configuration, the subcommands, and
//! the JSON/CSV report formats.

pub mod checks;
pub mod commands;
pub mod config;
pub mod report;

pub use commands::run;
pub use config::{Command, ConfigError, MetricId, Params, RunConfig};
pub use report::{Report, ReportEntry, Table, SCHEMA};

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

/// Where each table of `command` goes when `--csv path` is given: the path
/// itself for single-table commands, `<stem>.<table>.csv` beside it for `all`.
pub fn table_paths(command: Command, path: &Path) -> Result<Vec<(&'static str, PathBuf)>, ConfigError> {
    match command.tables() {
        [] => Err(ConfigError(format!(
            "command {} produces no CSV table",
            command.as_str()
        ))),
        [one] => Ok(vec![(*one, path.to_path_buf())]),
        many => {
            let stem = path
                .file_stem()
                .and_then(|s| s.to_str())
                .ok_or_else(|| ConfigError(format!("--csv {}: no file name", path.display())))?;
            let dir = path.parent().unwrap_or(Path::new(""));
            Ok(many.iter().map(|t| (*t, dir.join(format!("{stem}.{t}.csv")))).collect())
        }
    }
}

/// Writes the report's tables to the given destinations. A table the run did
/// not produce (every check erred) is written with its header only.
pub fn write_tables(report: &Report, dests: &[(&'static str, PathBuf)]) -> std::io::Result<()> {
    for (name, path) in dests {
        let table = report
            .tables
            .iter()
            .find(|t| t.name == *name)
            .cloned()
            .unwrap_or_else(|| Table {
                name: name.to_string(),
                columns: table_columns(name),
                rows: Vec::new(),
            });
        table
            .write_csv(BufWriter::new(File::create(path)?))
            .map_err(std::io::Error::other)?;
    }
    Ok(())
}

fn table_columns(name: &str) -> Vec<String> {
    let cols: &[&str] = match name {
        "fg" => &["order", "A2", "B2"],
        "static" => &["r", "V", "f", "W"],
        _ => &["s", "phi", "f"],
    };
    cols.iter().map(|c| c.to_string()).collect()
}
