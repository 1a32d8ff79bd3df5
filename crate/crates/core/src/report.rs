//! Error norms and observed convergence orders.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which error measure a study reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorNorm {
    /// Max over nodes at the final time.
    MaxFinal,
    /// Max over nodes and over every time level. This is the measure the
    /// reference error tables were produced with.
    #[default]
    MaxAll,
    /// Discrete L2 norm over interior nodes at the final time.
    L2Final,
}

impl ErrorNorm {
    pub const ALL: [ErrorNorm; 3] = [ErrorNorm::MaxFinal, ErrorNorm::MaxAll, ErrorNorm::L2Final];

    pub fn name(self) -> &'static str {
        match self {
            ErrorNorm::MaxFinal => "max-final",
            ErrorNorm::MaxAll => "max-all",
            ErrorNorm::L2Final => "l2-final",
        }
    }
}

impl fmt::Display for ErrorNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ErrorNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ErrorNorm::ALL
            .into_iter()
            .find(|n| n.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown norm `{s}` (expected max-final, max-all or l2-final)"
                ))
            })
    }
}

/// All error measures of one run against the exact solution.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorReport {
    pub max_final: f64,
    pub max_all: f64,
    pub l2_final: f64,
}

impl ErrorReport {
    pub fn get(&self, norm: ErrorNorm) -> f64 {
        match norm {
            ErrorNorm::MaxFinal => self.max_final,
            ErrorNorm::MaxAll => self.max_all,
            ErrorNorm::L2Final => self.l2_final,
        }
    }
}

/// Per-level orders; `None` where no coarser level exists.
pub type Orders = Vec<Option<f64>>;

/// Observed orders between consecutive levels:
/// `ln(e_{i-1}/e_i) / ln(s_{i-1}/s_i)` for the temporal steps and the
/// spatial steps. Entry 0 of each list is `None`.
pub fn compute_orders(errors: &[f64], taus: &[f64], hs: &[f64]) -> Result<(Orders, Orders)> {
    if errors.len() != taus.len() || errors.len() != hs.len() {
        return Err(Error::Shape(format!(
            "{} errors, {} time steps, {} space steps",
            errors.len(),
            taus.len(),
            hs.len()
        )));
    }
    if let Some(e) = errors.iter().find(|e| e.is_nan() || **e <= 0.0) {
        return Err(Error::Domain(format!("errors must be positive, got {e}")));
    }
    Ok((observed_orders(errors, taus)?, observed_orders(errors, hs)?))
}

/// Orders against a single step sequence.
pub fn observed_orders(errors: &[f64], steps: &[f64]) -> Result<Orders> {
    let mut out = Vec::with_capacity(errors.len());
    for i in 0..errors.len() {
        if i == 0 {
            out.push(None);
            continue;
        }
        if !(steps[i] > 0.0 && steps[i] < steps[i - 1]) {
            return Err(Error::Domain(format!(
                "steps must be positive and strictly decreasing, got {} then {}",
                steps[i - 1],
                steps[i]
            )));
        }
        if !(errors[i] > 0.0 && errors[i - 1] > 0.0) {
            return Err(Error::Domain("errors must be positive".into()));
        }
        out.push(Some(
            (errors[i - 1] / errors[i]).ln() / (steps[i - 1] / steps[i]).ln(),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartering_error_on_halving_is_second_order() {
        let (tco, _) = compute_orders(&[4e-2, 1e-2], &[0.5, 0.25], &[0.5, 0.25]).unwrap();
        assert_eq!(tco[0], None);
        assert!((tco[1].unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn reference_rows() {
        let (tco, sco) = compute_orders(
            &[3.552136e-02, 2.583580e-03],
            &[1.0 / 5.0, 1.0 / 20.0],
            &[1.0 / 5.0, 1.0 / 10.0],
        )
        .unwrap();
        assert!((tco[1].unwrap() - 1.8906).abs() < 5e-5);
        assert!((sco[1].unwrap() - 3.7812).abs() < 5e-5);

        let o = observed_orders(&[7.611138e-03, 1.903986e-03], &[1.0 / 20.0, 1.0 / 40.0]).unwrap();
        assert!((o[1].unwrap() - 1.9991).abs() < 5e-5);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            compute_orders(&[1e-2, 0.0], &[0.5, 0.25], &[0.5, 0.25]),
            Err(Error::Domain(_))
        ));
        assert!(compute_orders(&[1e-2, 1e-3], &[0.25, 0.5], &[0.5, 0.25]).is_err());
        assert!(compute_orders(&[1e-2], &[0.25, 0.5], &[0.5]).is_err());
    }

    #[test]
    fn single_level_has_no_orders() {
        let (tco, sco) = compute_orders(&[1e-3], &[0.1], &[0.1]).unwrap();
        assert_eq!((tco, sco), (vec![None], vec![None]));
    }

    #[test]
    fn norm_names_round_trip() {
        for n in ErrorNorm::ALL {
            assert_eq!(n.name().parse::<ErrorNorm>().unwrap(), n);
        }
        assert!("l1".parse::<ErrorNorm>().is_err());
    }
}
