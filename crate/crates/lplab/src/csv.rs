//! CSV output: a `# config:` comment line, a header row, then one row per
//! record. Reals use 17 significant digits; lines end in `\n`.

use std::io::Write;
use std::path::Path;

use lplab_core::experiments::{ExperimentRecord, Value};

use crate::error::CliError;

pub fn format_value(v: &Value) -> String {
    match v {
        Value::Int(i) => i.to_string(),
        Value::Real(x) => format!("{x:.16e}"),
        Value::Text(s) => s.clone(),
    }
}

fn parse_value(s: &str) -> Value {
    if let Ok(i) = s.parse::<i64>() {
        Value::Int(i)
    } else if let Ok(x) = s.parse::<f64>() {
        Value::Real(x)
    } else {
        Value::Text(s.to_string())
    }
}

/// Renders records; the column order is taken from the first record.
pub fn render(config_line: &str, records: &[ExperimentRecord]) -> Result<String, CliError> {
    let mut out = format!("# config: {config_line}\n");
    let columns: Vec<&str> = records.first().map(|r| r.keys().collect()).unwrap_or_default();
    out.push_str(&columns.join(","));
    out.push('\n');
    for r in records {
        let row: Vec<String> = columns
            .iter()
            .map(|c| {
                r.get(c)
                    .map(format_value)
                    .ok_or_else(|| CliError::Validation(format!("record is missing column '{c}'")))
            })
            .collect::<Result<_, _>>()?;
        if let Some(cell) = row.iter().find(|c| c.contains(',') || c.contains('\n')) {
            return Err(CliError::Validation(format!("value '{cell}' cannot be written to CSV")));
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Parses text produced by [`render`] (or any comma-separated table with
/// optional `#` comment lines) back into records.
pub fn parse(text: &str) -> Result<(Option<String>, Vec<ExperimentRecord>), CliError> {
    let mut config = None;
    let mut header: Option<Vec<String>> = None;
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(c) = rest.trim_start().strip_prefix("config:") {
                config.get_or_insert_with(|| c.trim().to_string());
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        match &header {
            None => header = Some(cells.iter().map(|s| s.to_string()).collect()),
            Some(h) => {
                if cells.len() != h.len() {
                    return Err(CliError::Validation(format!(
                        "line {} has {} fields, header has {}",
                        i + 1,
                        cells.len(),
                        h.len()
                    )));
                }
                let mut r = ExperimentRecord::new();
                for (k, c) in h.iter().zip(cells) {
                    r.push(k, parse_value(c));
                }
                records.push(r);
            }
        }
    }
    Ok((config, records))
}

/// Writes `text` to `path` through a temporary file in the same directory
/// and an atomic rename.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}
