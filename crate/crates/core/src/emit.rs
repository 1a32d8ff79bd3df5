//! CSV output: comma separated, header row first, `\n` line endings and
//! floats with 9 significant digits. Missing values are empty fields.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::solver1d::Solution1D;
use crate::solver2d::Solution2D;
use crate::study::{DerivativeRow, StudyReport};
use crate::weights::WeightSequence;

/// `v` with 9 significant digits in scientific notation.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.8e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_float).unwrap_or_default()
}

/// A header plus rows of already formatted fields.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, out: W) -> std::result::Result<(), csv::Error> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf)
            .expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("CSV output is UTF-8")
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_to(file).map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })
    }
}

pub fn study_table(report: &StudyReport) -> Table {
    let mut t = Table::new(vec!["tau", "h", "error", "tco", "sco"]);
    for r in &report.rows {
        t.push(vec![
            fmt_float(r.tau),
            fmt_float(r.h),
            fmt_float(r.error),
            fmt_opt(r.tco),
            fmt_opt(r.sco),
        ]);
    }
    t
}

pub fn derivative_table(rows: &[DerivativeRow]) -> Table {
    let mut t = Table::new(vec!["tau", "abs_error", "observed_order"]);
    for r in rows {
        t.push(vec![
            fmt_float(r.tau),
            fmt_float(r.abs_error),
            fmt_opt(r.observed_order),
        ]);
    }
    t
}

/// Derivative rows next to reference errors.
pub fn derivative_reference_table(rows: &[DerivativeRow], reference: &[f64]) -> Table {
    let mut t = Table::new(vec![
        "tau",
        "abs_error",
        "observed_order",
        "reference_error",
    ]);
    for (r, reference) in rows.iter().zip(reference) {
        t.push(vec![
            fmt_float(r.tau),
            fmt_float(r.abs_error),
            fmt_opt(r.observed_order),
            fmt_float(*reference),
        ]);
    }
    t
}

pub fn weights_table(w: &WeightSequence) -> Table {
    let mut t = Table::new(vec!["l", "weight"]);
    for (l, v) in w.iter().enumerate() {
        t.push(vec![l.to_string(), fmt_float(*v)]);
    }
    t
}

/// Every node of every time level: `t, x, u, exact, abs_error`. The last
/// two columns are empty without an exact solution.
pub fn trajectory_table_1d(
    sol: &Solution1D,
    exact: Option<&(dyn Fn(f64, f64) -> f64 + Send + Sync)>,
) -> Table {
    let mut t = Table::new(vec!["t", "x", "u", "exact", "abs_error"]);
    for (k, field) in sol.trajectory.iter().enumerate() {
        let time = sol.time(k);
        for (j, &u) in field.values().iter().enumerate() {
            let x = sol.grid.x(j);
            let (ex, err) = match exact {
                Some(f) => {
                    let e = f(x, time);
                    (fmt_float(e), fmt_float((u - e).abs()))
                }
                None => (String::new(), String::new()),
            };
            t.push(vec![fmt_float(time), fmt_float(x), fmt_float(u), ex, err]);
        }
    }
    t
}

/// Snapshot of level `k`: `t, x, y, u, exact, abs_error`.
pub fn snapshot_table_2d(
    sol: &Solution2D,
    k: usize,
    exact: Option<&(dyn Fn(f64, f64, f64) -> f64 + Send + Sync)>,
) -> Table {
    let mut t = Table::new(vec!["t", "x", "y", "u", "exact", "abs_error"]);
    let g = sol.grid;
    let time = k as f64 * sol.tau;
    let field = &sol.trajectory[k];
    for j in 0..=g.cells_y() {
        for i in 0..=g.cells_x() {
            let (x, y) = (g.x(i), g.y(j));
            let u = field.at(i, j);
            let (ex, err) = match exact {
                Some(f) => {
                    let e = f(x, y, time);
                    (fmt_float(e), fmt_float((u - e).abs()))
                }
                None => (String::new(), String::new()),
            };
            t.push(vec![
                fmt_float(time),
                fmt_float(x),
                fmt_float(y),
                fmt_float(u),
                ex,
                err,
            ]);
        }
    }
    t
}
