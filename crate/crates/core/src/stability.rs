//! Empirical stability with respect to the initial value: march a
//! source-free problem from a random interior perturbation and track the
//! discrete L2 norm of every level against the perturbation's norm.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::compact1d::{norm, Field1D, Grid1D};
use crate::error::{Error, Result};
use crate::solver1d::{CableProblem1D, MarchState1D};
use crate::solver2d::{norm_2d, CableProblem2D, Field2D, Grid2D, MarchState2D};

/// Bound on `||eps^n|| / ||rho||` for the 1D scheme.
pub const BOUND_1D: f64 = 1.224_744_871_391_589; // sqrt(6)/2
/// Bound on `||eps^n|| / ||rho||` for the 2D scheme.
pub const BOUND_2D: f64 = 1.732_050_807_568_877_2; // sqrt(3)

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityOutcome {
    pub seed: u64,
    pub bound: f64,
    /// `max_n ||eps^n|| / ||rho||`, one entry per trial.
    pub ratios: Vec<f64>,
}

impl StabilityOutcome {
    pub fn worst(&self) -> f64 {
        self.ratios.iter().copied().fold(0.0, f64::max)
    }

    pub fn violations(&self) -> usize {
        self.ratios.iter().filter(|&&r| r > self.bound).count()
    }

    pub fn holds(&self) -> bool {
        self.violations() == 0
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::Domain("need at least one trial".into()));
    }
    Ok(())
}

/// Runs `trials` perturbations of `problem` with its source and boundary
/// data zeroed. Trial `i` draws its perturbation from stream `i` of the
/// generator seeded with `seed`, so results do not depend on scheduling.
pub fn perturbation_1d(
    problem: &CableProblem1D,
    steps: usize,
    cells: usize,
    trials: usize,
    seed: u64,
) -> Result<StabilityOutcome> {
    check_trials(trials)?;
    let mut homogeneous = problem.scaled_source(0.0);
    homogeneous =
        homogeneous.with_boundary(std::sync::Arc::new(|_| 0.0), std::sync::Arc::new(|_| 0.0));
    let grid = Grid1D::new(problem.length, cells)?;
    let ratios = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let mut rho = Field1D::zeros(grid);
            let n = rho.values().len();
            for v in &mut rho.values_mut()[1..n - 1] {
                *v = rng.random_range(-1.0..1.0);
            }
            let base = norm(&rho);
            let mut state = MarchState1D::from_initial(&homogeneous, steps, rho)?;
            let mut worst: f64 = 1.0;
            while !state.is_complete() {
                worst = worst.max(norm(state.step()?) / base);
            }
            Ok(worst)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilityOutcome {
        seed,
        bound: BOUND_1D,
        ratios,
    })
}

/// 2D analogue of [`perturbation_1d`].
pub fn perturbation_2d(
    problem: &CableProblem2D,
    steps: usize,
    m1: usize,
    m2: usize,
    trials: usize,
    seed: u64,
) -> Result<StabilityOutcome> {
    check_trials(trials)?;
    let mut homogeneous = problem.clone();
    homogeneous.source = std::sync::Arc::new(|_, _, _| 0.0);
    homogeneous.boundary = std::sync::Arc::new(|_, _, _| 0.0);
    let grid = Grid2D::new(problem.lx, problem.ly, m1, m2)?;
    let ratios = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let mut rho = Field2D::zeros(grid);
            for j in 1..m2 {
                for k in 1..m1 {
                    rho.set(k, j, rng.random_range(-1.0..1.0));
                }
            }
            let base = norm_2d(&rho);
            let mut state = MarchState2D::from_initial(&homogeneous, steps, rho)?;
            let mut worst: f64 = 1.0;
            while !state.is_complete() {
                worst = worst.max(norm_2d(state.step()?) / base);
            }
            Ok(worst)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilityOutcome {
        seed,
        bound: BOUND_2D,
        ratios,
    })
}
