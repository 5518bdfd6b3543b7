use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::write_atomic;

/// Field separator for emitted tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableFormat {
    #[default]
    Csv,
    Tsv,
}

impl TableFormat {
    fn delimiter(self) -> u8 {
        match self {
            TableFormat::Csv => b',',
            TableFormat::Tsv => b'\t',
        }
    }

    fn extension(self) -> &'static str {
        match self {
            TableFormat::Csv => "csv",
            TableFormat::Tsv => "tsv",
        }
    }
}

/// A named table with a fixed header.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Table {
            name: name.to_string(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width for table {}", self.name);
        self.rows.push(row);
    }

    pub fn render(&self, format: TableFormat) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .delimiter(format.delimiter())
            .from_writer(Vec::new());
        let to_err = |e: csv::Error| Error::InvalidArgument(format!("table {}: {e}", self.name));
        w.write_record(&self.columns).map_err(to_err)?;
        for row in &self.rows {
            w.write_record(row).map_err(to_err)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::InvalidArgument(format!("table {}: {e}", self.name)))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Column names `alpha_1 .. alpha_K`.
pub fn alpha_columns(k: usize) -> impl Iterator<Item = String> {
    (1..=k).map(|i| format!("alpha_{i}"))
}

pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

pub(crate) fn fmt_all(xs: &[f64]) -> impl Iterator<Item = String> + '_ {
    xs.iter().map(|&x| fmt_f64(x))
}

/// Result of one experiment: what was run, summary numbers, and tables.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub seed: u64,
    /// Every input needed to rerun the experiment.
    pub config: serde_json::Value,
    pub summary: BTreeMap<String, f64>,
    pub tables: Vec<Table>,
}

impl ExperimentReport {
    pub fn new(experiment: &str, seed: u64, config: serde_json::Value) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            seed,
            config,
            summary: BTreeMap::new(),
            tables: Vec::new(),
        }
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn summary_text(&self) -> String {
        let mut out = format!("# experiment: {}\n# seed: {}\n", self.experiment, self.seed);
        let width = self.summary.keys().map(String::len).max().unwrap_or(0);
        for (k, v) in &self.summary {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        out
    }

    /// Provenance sidecar: the report without its tables.
    pub fn provenance_json(&self) -> String {
        let value = serde_json::json!({
            "experiment": self.experiment,
            "seed": self.seed,
            "config": self.config,
            "summary": self.summary,
            "tables": self.tables.iter().map(|t| &t.name).collect::<Vec<_>>(),
        });
        serde_json::to_string_pretty(&value).expect("report serializes")
    }

    /// Writes `summary.txt`, `provenance.json` and one file per table into
    /// `dir`, each atomically.
    pub fn write_to(&self, dir: &Path, format: TableFormat) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_atomic(dir.join("summary.txt"), self.summary_text().as_bytes())?;
        write_atomic(dir.join("provenance.json"), self.provenance_json().as_bytes())?;
        for t in &self.tables {
            let path = dir.join(format!("{}.{}", t.name, format.extension()));
            write_atomic(path, t.render(format)?.as_bytes())?;
        }
        Ok(())
    }
}
