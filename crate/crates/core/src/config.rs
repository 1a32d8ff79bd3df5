//! JSON run configuration.
//!
//! ```json
//! { "problem": "custom1d", "alpha1": 0.5, "alpha2": 0.5, "K1": 1.0, "K2": 1.0,
//!   "domain": 1.0, "T": 1.0, "N": 64, "M": 32,
//!   "source": "sin(pi*x)", "exact": null, "boundary": "0", "norm": "max-all" }
//! ```
//!
//! Preset problems take only the orders, grid sizes, norm and output.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::expr::{Expression, Var, Vars};
use crate::presets::{example2, example3};
use crate::report::ErrorNorm;
use crate::solver1d::CableProblem1D;
use crate::solver2d::CableProblem2D;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Example1,
    Example2,
    Example3,
    Custom1d,
    Custom2d,
}

/// `1.0` or `[1.0, 2.0]`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Domain {
    Length(f64),
    Rectangle([f64; 2]),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemKind,
    pub alpha1: f64,
    pub alpha2: f64,
    #[serde(rename = "K1", default)]
    pub k1: Option<f64>,
    #[serde(rename = "K2", default)]
    pub k2: Option<f64>,
    #[serde(default)]
    pub domain: Option<Domain>,
    #[serde(rename = "T", default)]
    pub horizon: Option<f64>,
    #[serde(rename = "N")]
    pub steps: usize,
    #[serde(rename = "M", default)]
    pub cells: Option<usize>,
    #[serde(rename = "M1", default)]
    pub cells_x: Option<usize>,
    #[serde(rename = "M2", default)]
    pub cells_y: Option<usize>,
    #[serde(default)]
    pub source: Option<String>,
    #[serde(default)]
    pub exact: Option<String>,
    #[serde(default)]
    pub boundary: Option<String>,
    #[serde(default)]
    pub norm: Option<ErrorNorm>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

/// A configured run ready for the solvers.
#[derive(Debug, Clone)]
pub enum Run {
    OneD {
        problem: CableProblem1D,
        steps: usize,
        cells: usize,
    },
    TwoD {
        problem: CableProblem2D,
        steps: usize,
        cells_x: usize,
        cells_y: usize,
    },
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn norm(&self) -> ErrorNorm {
        self.norm.unwrap_or_default()
    }

    fn grid_1d(&self) -> Result<usize> {
        if self.cells_x.is_some() || self.cells_y.is_some() {
            return Err(Error::Config("1D problems take M, not M1/M2".into()));
        }
        self.cells
            .ok_or_else(|| Error::Config("missing key M".into()))
    }

    fn grid_2d(&self) -> Result<(usize, usize)> {
        match (self.cells, self.cells_x, self.cells_y) {
            (Some(m), None, None) => Ok((m, m)),
            (None, Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::Config(
                "2D problems take either M or both M1 and M2".into(),
            )),
        }
    }

    fn reject_for_preset(&self) -> Result<()> {
        let given = [
            ("K1", self.k1.is_some()),
            ("K2", self.k2.is_some()),
            ("domain", self.domain.is_some()),
            ("T", self.horizon.is_some()),
            ("source", self.source.is_some()),
            ("exact", self.exact.is_some()),
            ("boundary", self.boundary.is_some()),
        ];
        match given.iter().find(|(_, set)| *set) {
            Some((key, _)) => Err(Error::Config(format!("key {key} is fixed by the preset"))),
            None => Ok(()),
        }
    }

    fn required<T: Copy>(value: Option<T>, key: &str) -> Result<T> {
        value.ok_or_else(|| Error::Config(format!("missing key {key}")))
    }

    pub fn build(&self) -> Result<Run> {
        if self.steps == 0 {
            return Err(Error::Domain("N must be positive".into()));
        }
        match self.problem {
            ProblemKind::Example1 => Err(Error::Config(
                "example1 is a derivative test; use the derivative-test command".into(),
            )),
            ProblemKind::Example2 => {
                self.reject_for_preset()?;
                Ok(Run::OneD {
                    problem: example2(self.alpha1, self.alpha2)?,
                    steps: self.steps,
                    cells: self.grid_1d()?,
                })
            }
            ProblemKind::Example3 => {
                self.reject_for_preset()?;
                let (cells_x, cells_y) = self.grid_2d()?;
                Ok(Run::TwoD {
                    problem: example3(self.alpha1, self.alpha2)?,
                    steps: self.steps,
                    cells_x,
                    cells_y,
                })
            }
            ProblemKind::Custom1d => self.build_custom_1d(),
            ProblemKind::Custom2d => self.build_custom_2d(),
        }
    }

    fn build_custom_1d(&self) -> Result<Run> {
        let length = match Self::required(self.domain, "domain")? {
            Domain::Length(l) => l,
            Domain::Rectangle(_) => {
                return Err(Error::Config("1D domain is a single length".into()))
            }
        };
        let source = parse_in(Self::required(self.source.as_deref(), "source")?, false)?;
        let mut problem = CableProblem1D::new(
            self.alpha1,
            self.alpha2,
            Self::required(self.k1, "K1")?,
            Self::required(self.k2, "K2")?,
            length,
            Self::required(self.horizon, "T")?,
            Arc::new(move |x, t| source.eval(&Vars::xt(x, t))),
        )?;
        if let Some(text) = &self.boundary {
            let phi = Arc::new(parse_in(text, false)?);
            let right = phi.clone();
            problem = problem.with_boundary(
                Arc::new(move |t| phi.eval(&Vars::xt(0.0, t))),
                Arc::new(move |t| right.eval(&Vars::xt(length, t))),
            );
        }
        if let Some(text) = &self.exact {
            let u = parse_in(text, false)?;
            problem = problem.with_exact(Arc::new(move |x, t| u.eval(&Vars::xt(x, t))));
        }
        Ok(Run::OneD {
            problem,
            steps: self.steps,
            cells: self.grid_1d()?,
        })
    }

    fn build_custom_2d(&self) -> Result<Run> {
        let (lx, ly) = match Self::required(self.domain, "domain")? {
            Domain::Length(l) => (l, l),
            Domain::Rectangle([a, b]) => (a, b),
        };
        let source = parse_in(Self::required(self.source.as_deref(), "source")?, true)?;
        let mut problem = CableProblem2D::new(
            self.alpha1,
            self.alpha2,
            Self::required(self.k1, "K1")?,
            Self::required(self.k2, "K2")?,
            lx,
            ly,
            Self::required(self.horizon, "T")?,
            Arc::new(move |x, y, t| source.eval(&Vars::xyt(x, y, t))),
        )?;
        if let Some(text) = &self.boundary {
            let phi = parse_in(text, true)?;
            problem = problem.with_boundary(Arc::new(move |x, y, t| phi.eval(&Vars::xyt(x, y, t))));
        }
        if let Some(text) = &self.exact {
            let u = parse_in(text, true)?;
            problem = problem.with_exact(Arc::new(move |x, y, t| u.eval(&Vars::xyt(x, y, t))));
        }
        let (cells_x, cells_y) = self.grid_2d()?;
        Ok(Run::TwoD {
            problem,
            steps: self.steps,
            cells_x,
            cells_y,
        })
    }
}

fn parse_in(text: &str, allow_y: bool) -> Result<Expression> {
    let e = Expression::parse(text)?;
    if !allow_y && e.uses(Var::Y) {
        return Err(Error::Config(format!("`{text}` uses y in a 1D problem")));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_config_builds() {
        let c = RunConfig::from_json(
            r#"{"problem":"example2","alpha1":0.5,"alpha2":0.5,"N":125,"M":25}"#,
        )
        .unwrap();
        assert_eq!(c.norm(), ErrorNorm::MaxAll);
        assert!(matches!(
            c.build().unwrap(),
            Run::OneD {
                steps: 125,
                cells: 25,
                ..
            }
        ));
    }

    #[test]
    fn preset_rejects_overrides() {
        let c = RunConfig::from_json(
            r#"{"problem":"example3","alpha1":0.5,"alpha2":0.5,"N":5,"M":5,"source":"0"}"#,
        )
        .unwrap();
        assert!(matches!(c.build(), Err(Error::Config(_))));
    }

    #[test]
    fn custom_1d_evaluates_expressions() {
        let c = RunConfig::from_json(
            r#"{"problem":"custom1d","alpha1":0.3,"alpha2":0.7,"K1":1,"K2":0.5,"domain":2.0,"T":1,
                "N":4,"M":4,"source":"x*t","boundary":"1 + x*t","exact":"x","norm":"l2-final"}"#,
        )
        .unwrap();
        let Run::OneD { problem, .. } = c.build().unwrap() else {
            panic!("expected 1D run")
        };
        assert_eq!((problem.source)(2.0, 3.0), 6.0);
        assert_eq!((problem.left)(0.5), 1.0);
        assert_eq!((problem.right)(0.5), 2.0);
        assert_eq!(c.norm(), ErrorNorm::L2Final);
    }

    #[test]
    fn custom_1d_rejects_y() {
        let c = RunConfig::from_json(
            r#"{"problem":"custom1d","alpha1":0.3,"alpha2":0.7,"K1":1,"K2":1,"domain":1,"T":1,
                "N":4,"M":4,"source":"y"}"#,
        )
        .unwrap();
        assert!(c.build().is_err());
    }

    #[test]
    fn unknown_keys_and_bad_orders_fail() {
        assert!(RunConfig::from_json(
            r#"{"problem":"example2","alpha1":0.5,"alpha2":0.5,"N":5,"M":5,"bogus":1}"#
        )
        .is_err());
        let c =
            RunConfig::from_json(r#"{"problem":"example2","alpha1":1.5,"alpha2":0.5,"N":5,"M":5}"#)
                .unwrap();
        assert!(matches!(c.build(), Err(Error::Domain(_))));
    }

    #[test]
    fn two_d_grid_keys() {
        let c = RunConfig::from_json(
            r#"{"problem":"example3","alpha1":0.5,"alpha2":0.5,"N":5,"M1":4,"M2":6}"#,
        )
        .unwrap();
        assert!(matches!(
            c.build().unwrap(),
            Run::TwoD {
                cells_x: 4,
                cells_y: 6,
                ..
            }
        ));
        let bad = RunConfig::from_json(
            r#"{"problem":"example3","alpha1":0.5,"alpha2":0.5,"N":5,"M1":4}"#,
        )
        .unwrap();
        assert!(bad.build().is_err());
    }
}
