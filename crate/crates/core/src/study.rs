//! Refinement studies: run a problem on a ladder of grids and report errors
//! with observed temporal and spatial orders.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::{observed_orders, ErrorNorm};
use crate::rl::{exact_rl_monomial, midpoint_rl_apply, midpoint_rl_at, TimeHistory};
use crate::solver1d::{solve_1d, CableProblem1D};
use crate::solver2d::{solve_2d, CableProblem2D};
use crate::weights::midpoint_weights_recurrence;

#[derive(Debug, Clone)]
pub enum StudyProblem {
    OneD(CableProblem1D),
    TwoD(CableProblem2D),
}

/// One rung of the ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Level {
    pub steps: usize,
    pub cells_x: usize,
    /// Ignored for 1D problems.
    pub cells_y: usize,
}

#[derive(Debug, Clone)]
pub struct RefinementStudy {
    pub problem: StudyProblem,
    pub levels: Vec<Level>,
    pub norm: ErrorNorm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StudyRow {
    pub tau: f64,
    pub h: f64,
    pub error: f64,
    pub tco: Option<f64>,
    pub sco: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyReport {
    pub norm: ErrorNorm,
    pub rows: Vec<StudyRow>,
}

impl StudyReport {
    pub fn last(&self) -> &StudyRow {
        self.rows.last().expect("a study has at least one level")
    }
}

impl RefinementStudy {
    pub fn new(problem: StudyProblem, levels: Vec<Level>, norm: ErrorNorm) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Config("a study needs at least one level".into()));
        }
        for pair in levels.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if b.steps <= a.steps || b.cells_x <= a.cells_x {
                return Err(Error::Config(format!(
                    "levels must refine strictly: {a:?} then {b:?}"
                )));
            }
        }
        let has_exact = match &problem {
            StudyProblem::OneD(p) => p.exact.is_some(),
            StudyProblem::TwoD(p) => p.exact.is_some(),
        };
        if !has_exact {
            return Err(Error::Config(
                "a refinement study needs an exact solution".into(),
            ));
        }
        Ok(Self {
            problem,
            levels,
            norm,
        })
    }

    /// Coupled ladder `tau = T/(5 m^2)`, `h = L/(5 m)` for `m = 1..=levels`.
    pub fn coupled(problem: StudyProblem, levels: usize, norm: ErrorNorm) -> Result<Self> {
        let levels = crate::presets::coupled_ladder(levels)
            .into_iter()
            .map(|(steps, cells)| Level {
                steps,
                cells_x: cells,
                cells_y: cells,
            })
            .collect();
        Self::new(problem, levels, norm)
    }
}

/// Runs every level (concurrently) and returns rows in level order.
pub fn run_study(study: &RefinementStudy) -> Result<StudyReport> {
    let results: Vec<Result<(f64, f64, f64)>> = study
        .levels
        .par_iter()
        .map(|level| run_level(&study.problem, *level, study.norm))
        .collect();
    let mut taus = Vec::new();
    let mut hs = Vec::new();
    let mut errors = Vec::new();
    for r in results {
        let (tau, h, e) = r?;
        taus.push(tau);
        hs.push(h);
        errors.push(e);
    }
    let orders_ok = errors.iter().all(|e| *e > 0.0);
    let (tco, sco) = if orders_ok {
        (
            observed_orders(&errors, &taus)?,
            observed_orders(&errors, &hs)?,
        )
    } else {
        (vec![None; errors.len()], vec![None; errors.len()])
    };
    let rows = (0..errors.len())
        .map(|i| StudyRow {
            tau: taus[i],
            h: hs[i],
            error: errors[i],
            tco: tco[i],
            sco: sco[i],
        })
        .collect();
    Ok(StudyReport {
        norm: study.norm,
        rows,
    })
}

fn run_level(problem: &StudyProblem, level: Level, norm: ErrorNorm) -> Result<(f64, f64, f64)> {
    match problem {
        StudyProblem::OneD(p) => {
            let sol = solve_1d(p, level.steps, level.cells_x)?;
            let report = sol
                .report
                .ok_or_else(|| Error::Config("no exact solution".into()))?;
            Ok((sol.tau, sol.grid.spacing(), report.get(norm)))
        }
        StudyProblem::TwoD(p) => {
            let sol = solve_2d(p, level.steps, level.cells_x, level.cells_y)?;
            let report = sol
                .report
                .ok_or_else(|| Error::Config("no exact solution".into()))?;
            Ok((sol.tau, sol.grid.hx(), report.get(norm)))
        }
    }
}

/// One row of a derivative-accuracy study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivativeRow {
    pub tau: f64,
    pub abs_error: f64,
    pub observed_order: Option<f64>,
}

fn finish_rows(taus: &[f64], errors: Vec<f64>) -> Result<Vec<DerivativeRow>> {
    let orders = observed_orders(&errors, taus)?;
    Ok(taus
        .iter()
        .zip(errors)
        .zip(orders)
        .map(|((&tau, abs_error), observed_order)| DerivativeRow {
            tau,
            abs_error,
            observed_order,
        })
        .collect())
}

/// Midpoint derivative of order `beta` of `u = t^{2+beta}` at `t = 1/2`,
/// with each `tau` chosen so that `1/2 = (k + 1/2) tau` for an integer `k`.
pub fn aligned_derivative_study(beta: f64, taus: &[f64]) -> Result<Vec<DerivativeRow>> {
    const TARGET: f64 = 0.5;
    let p = 2.0 + beta;
    let exact = exact_rl_monomial(p, beta, TARGET)?;
    let errors = taus
        .iter()
        .map(|&tau| {
            let kf = TARGET / tau - 0.5;
            let k = kf.round();
            if tau.is_nan() || tau <= 0.0 || k < 0.0 || (kf - k).abs() > 1e-8 {
                return Err(Error::Domain(format!(
                    "tau = {tau} does not put t = {TARGET} on a half-grid point"
                )));
            }
            let k = k as usize;
            let w = midpoint_weights_recurrence(beta, k)?;
            let h = TimeHistory::sample(tau, k, |t| t.powf(p))?;
            Ok((midpoint_rl_apply(&w, &h, k)? - exact).abs())
        })
        .collect::<Result<Vec<_>>>()?;
    finish_rows(taus, errors)
}

/// Reference-table convention: order-`beta` derivative of `u = t^{3-beta}`,
/// with the midpoint sum based at `1/2 - tau/2` and `u` sampled at
/// `1/2 - tau/2 - l tau`, compared against the exact value at `t = 1/2`.
pub fn shifted_derivative_study(beta: f64, taus: &[f64]) -> Result<Vec<DerivativeRow>> {
    const TARGET: f64 = 0.5;
    let p = 3.0 - beta;
    let exact = exact_rl_monomial(p, beta, TARGET)?;
    let errors = taus
        .iter()
        .map(|&tau| {
            let base = TARGET - tau / 2.0;
            let last = (base / tau + 1e-9).floor() as usize;
            let w = midpoint_weights_recurrence(beta, last)?;
            Ok((midpoint_rl_at(&w, |t| t.powf(p), base, tau)? - exact).abs())
        })
        .collect::<Result<Vec<_>>>()?;
    finish_rows(taus, errors)
}
