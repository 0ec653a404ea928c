//! CSV tables, JSON sidecars and gnuplot scripts.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

/// 17 significant digits, enough to round-trip an `f64`.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Default)]
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut csv = Self::default();
        csv.row(header.iter().map(|s| s.to_string()));
        csv
    }

    pub fn row<I: IntoIterator<Item = String>>(&mut self, fields: I) {
        let line: Vec<String> = fields.into_iter().collect();
        let _ = writeln!(self.text, "{}", line.join(","));
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

/// Files written by one run, all under the output directory.
#[derive(Debug)]
pub struct Sink {
    dir: PathBuf,
    pub written: Vec<PathBuf>,
}

impl Sink {
    pub fn new(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
        Ok(Self { dir: dir.to_path_buf(), written: Vec::new() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        let path = self.path(name);
        fs::write(&path, contents).map_err(|source| CliError::Io { path: path.clone(), source })?;
        self.written.push(path.clone());
        Ok(path)
    }

    /// Writes `<stem>.json`, listing every file written so far.
    pub fn sidecar<C: Serialize>(&mut self, stem: &str, meta: &Metadata<C>) -> Result<PathBuf, CliError> {
        let mut meta = serde_json::to_value(meta)?;
        let files: Vec<String> = self
            .written
            .iter()
            .filter_map(|p| p.file_name().map(|f| f.to_string_lossy().into_owned()))
            .collect();
        meta["outputs"] = serde_json::json!(files);
        self.write(&format!("{stem}.json"), &(serde_json::to_string_pretty(&meta)? + "\n"))
    }
}

#[derive(Debug, Serialize)]
pub struct Quadrature {
    /// Gauss-Legendre order for cell integrals of the source.
    pub rhs_order: Option<usize>,
    /// Per-cell Gauss-Legendre order of the error norms.
    pub error_order: Option<usize>,
    /// How ψ moments are evaluated.
    pub moments: &'static str,
}

#[derive(Debug, Serialize)]
pub struct Metadata<C: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub config: C,
    pub seed: Option<u64>,
    pub mesh_sampler: Option<&'static str>,
    pub quadrature: Quadrature,
    pub results: serde_json::Value,
}

/// Log-log plot of the columns `ys` (1-based) against column `x` of a CSV.
pub fn gnuplot_script(csv: &str, title: &str, x: usize, xlabel: &str, ys: &[usize], ylabel: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# gnuplot -p {}", csv.replace(".csv", ".gp"));
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead top left");
    let _ = writeln!(s, "set logscale xy");
    let _ = writeln!(s, "set grid");
    let _ = writeln!(s, "set title '{title}'");
    let _ = writeln!(s, "set xlabel '{xlabel}'");
    let _ = writeln!(s, "set ylabel '{ylabel}'");
    let plots: Vec<String> = ys
        .iter()
        .enumerate()
        .map(|(i, y)| {
            let file = if i == 0 { format!("'{csv}'") } else { "''".to_string() };
            format!("{file} using {x}:{y} with linespoints")
        })
        .collect();
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, std::f64::consts::PI, -2.5e-300, 0.0] {
            let s = num(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
            let mantissa = s.trim_start_matches('-').split('e').next().unwrap();
            assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
        }
    }

    #[test]
    fn csv_lines() {
        let mut c = Csv::new(&["a", "b"]);
        c.row([num(1.0), num(2.0)]);
        assert_eq!(c.as_str(), "a,b\n1.0000000000000000e0,2.0000000000000000e0\n");
    }
}
