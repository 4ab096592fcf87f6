//! Files under the output directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;
use crate::svg::{self, Panel};

/// A CSV cell for an optional number; empty when missing.
pub fn cell(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

/// Table of rows sharing a header, written verbatim as CSV.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        // writing into memory cannot fail
        w.write_record(&self.header).expect("in-memory csv");
        for r in &self.rows {
            w.write_record(r).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
    }
}

/// A figure: one SVG and its CSV twin holding exactly the plotted numbers.
pub struct Figure {
    pub stem: &'static str,
    pub title: String,
    pub panels: Vec<Panel>,
    pub panel_height: f64,
    pub data: Table,
}

#[derive(Debug, Clone)]
pub struct OutputDir {
    dir: PathBuf,
    plots: bool,
    written: Vec<String>,
}

impl OutputDir {
    pub fn create(dir: &Path, plots: bool) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::output(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            plots,
            written: Vec::new(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// File names written so far, in order.
    pub fn written(&self) -> &[String] {
        &self.written
    }

    pub fn text(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.path(name);
        fs::write(&path, contents).map_err(|e| CliError::output(&path, e))?;
        if !self.written.iter().any(|w| w == name) {
            self.written.push(name.to_string());
        }
        Ok(())
    }

    pub fn table(&mut self, name: &str, table: &Table) -> Result<(), CliError> {
        self.text(name, &table.to_csv())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::output(self.path(name), e))?;
        s.push('\n');
        self.text(name, &s)
    }

    /// With plots enabled, writes the SVG and its CSV twin; otherwise nothing.
    pub fn figure(&mut self, fig: &Figure) -> Result<(), CliError> {
        if !self.plots {
            return Ok(());
        }
        self.table(&format!("{}.csv", fig.stem), &fig.data)?;
        let svg = svg::render(&fig.title, &fig.panels, 960.0, fig.panel_height);
        self.text(&format!("{}.svg", fig.stem), &svg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting_and_cells() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["x,y".into(), cell(None)]);
        t.push(vec!["1".into(), cell(Some(0.5))]);
        assert_eq!(t.to_csv(), "a,b\n\"x,y\",\n1,0.5\n");
    }
}
