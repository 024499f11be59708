//! Deterministic table rendering: CSV with a `#`-prefixed JSON metadata
//! header, or a single JSON document. Identical configs produce identical
//! bytes.

use serde::Serialize;
use serde_json::json;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
#[clap(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// One output table: named columns, rows of optional values (a `None` cell
/// marks a gap, e.g. a degenerate scan point).
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Option<f64>>>,
    /// Row indices skipped by the scan, echoed in the metadata manifest.
    pub gaps: Vec<usize>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            gaps: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render<C: Serialize>(
        &self,
        command: &str,
        config: &C,
        format: Format,
    ) -> Result<Vec<u8>, CliError> {
        let metadata = json!({
            "command": command,
            "config": config,
            "library": concat!("floquet-spin ", env!("CARGO_PKG_VERSION")),
            "gaps": self.gaps,
        });
        let mut out = Vec::new();
        match format {
            Format::Csv => {
                out.extend_from_slice(b"# ");
                out.extend_from_slice(
                    serde_json::to_string(&metadata)
                        .map_err(|e| CliError::Io(e.to_string()))?
                        .as_bytes(),
                );
                out.push(b'\n');
                out.extend_from_slice(self.columns.join(",").as_bytes());
                out.push(b'\n');
                for row in &self.rows {
                    let line: Vec<String> = row
                        .iter()
                        .map(|cell| cell.map(fmt_f64).unwrap_or_default())
                        .collect();
                    out.extend_from_slice(line.join(",").as_bytes());
                    out.push(b'\n');
                }
            }
            Format::Json => {
                let doc = json!({
                    "metadata": metadata,
                    "columns": self.columns,
                    "rows": self.rows,
                });
                out.extend_from_slice(
                    serde_json::to_string_pretty(&doc)
                        .map_err(|e| CliError::Io(e.to_string()))?
                        .as_bytes(),
                );
                out.push(b'\n');
            }
        }
        Ok(out)
    }
}

/// Shortest round-trip decimal form (Rust's float Display), so re-parsing
/// reproduces the exact bits.
fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{v}")
}
