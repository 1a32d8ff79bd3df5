//! Discrete Riemann–Liouville derivatives on uniform time grids.
//!
//! [`midpoint_rl_apply`] evaluates `tau^{-b} sum_{l<=k} w_l u^{k-l}`, which
//! approximates the order-`b` derivative at the half point `t_{k+1/2}` to
//! second order when `u(0) = 0`. [`gl_first_order_apply`] is the classical
//! first-order Grünwald–Letnikov sum at `t_k`, kept as an oracle.

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::weights::{binomial_weights, WeightSequence};

/// Samples `u^0..u^k` of a function on the grid `t_j = j * step`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeHistory {
    step: f64,
    values: Vec<f64>,
}

impl TimeHistory {
    pub fn new(step: f64, values: Vec<f64>) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::Domain(format!(
                "time step must be positive, got {step}"
            )));
        }
        if values.is_empty() {
            return Err(Error::Domain("time history must not be empty".into()));
        }
        Ok(Self { step, values })
    }

    /// Samples `f(j * step)` for `j = 0..=last`.
    pub fn sample(step: f64, last: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = (0..=last).map(|j| f(j as f64 * step)).collect();
        Self::new(step, values)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, j: usize) -> f64 {
        j as f64 * self.step
    }

    /// Scales and adds another history on the same grid.
    pub fn combine(&self, a: f64, other: &TimeHistory, b: f64) -> Result<TimeHistory> {
        if self.len() != other.len() || self.step != other.step {
            return Err(Error::Shape("histories live on different grids".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(u, v)| a * u + b * v)
            .collect();
        TimeHistory::new(self.step, values)
    }
}

fn check_index(
    needed_weights: usize,
    available_weights: usize,
    k: usize,
    len: usize,
) -> Result<()> {
    if k >= len {
        return Err(Error::State(format!(
            "index {k} is beyond the history (length {len})"
        )));
    }
    if available_weights < needed_weights {
        return Err(Error::Length {
            needed: needed_weights,
            available: available_weights,
        });
    }
    Ok(())
}

/// Unscaled history sum `sum_{l=0}^{k} w_l u^{k-l}`.
pub fn history_convolution(w: &WeightSequence, h: &TimeHistory, k: usize) -> Result<f64> {
    check_index(k + 1, w.len(), k, h.len())?;
    let u = h.values();
    Ok((0..=k).map(|l| w[l] * u[k - l]).sum())
}

/// History sum over whole grid functions: `sum_{l=0}^{k} w_l levels[k-l]`
/// with `k = levels.len() - 1`. All levels must have the same length.
pub fn weighted_history_sum<L: AsRef<[f64]>>(w: &WeightSequence, levels: &[L]) -> Result<Vec<f64>> {
    let Some(last) = levels.last() else {
        return Err(Error::State("empty history".into()));
    };
    let k = levels.len() - 1;
    check_index(k + 1, w.len(), k, levels.len())?;
    let mut acc = vec![0.0; last.as_ref().len()];
    for (l, level) in levels.iter().rev().enumerate() {
        let level = level.as_ref();
        if level.len() != acc.len() {
            return Err(Error::Shape("history levels differ in size".into()));
        }
        let wl = w[l];
        for (a, v) in acc.iter_mut().zip(level) {
            *a += wl * v;
        }
    }
    Ok(acc)
}

/// Order-`w.order()` midpoint derivative at `t_{k+1/2}`.
///
/// The weight table is supplied by the caller so repeated applications share
/// one table.
pub fn midpoint_rl_apply(w: &WeightSequence, h: &TimeHistory, k: usize) -> Result<f64> {
    let sum = history_convolution(w, h, k)?;
    Ok(h.step().powf(-w.order()) * sum)
}

/// First-order Grünwald–Letnikov derivative at `t_k` with precomputed
/// coefficients `g` (from [`binomial_weights`]).
pub fn gl_apply_with(g: &[f64], beta: f64, h: &TimeHistory, k: usize) -> Result<f64> {
    check_index(k + 1, g.len(), k, h.len())?;
    let u = h.values();
    let sum: f64 = (0..=k).map(|l| g[l] * u[k - l]).sum();
    Ok(h.step().powf(-beta) * sum)
}

pub fn gl_first_order_apply(beta: f64, h: &TimeHistory, k: usize) -> Result<f64> {
    let g = binomial_weights(beta, k)?;
    gl_apply_with(&g, beta, h, k)
}

/// Midpoint formula evaluated at an arbitrary base time `t`, summing
/// `tau^{-b} sum_{l=0}^{floor(t/tau)} w_l u(t - l tau)` with `u` sampled off
/// the grid when `t` is not a multiple of `tau`. Approximates the derivative
/// at `t + tau/2`.
pub fn midpoint_rl_at(w: &WeightSequence, u: impl Fn(f64) -> f64, t: f64, tau: f64) -> Result<f64> {
    if !(tau > 0.0 && t >= 0.0) {
        return Err(Error::Domain(format!(
            "need tau > 0 and t >= 0, got tau={tau}, t={t}"
        )));
    }
    // the small slack absorbs representation error when t is a grid point
    let last = (t / tau + 1e-9).floor() as usize;
    if w.len() < last + 1 {
        return Err(Error::Length {
            needed: last + 1,
            available: w.len(),
        });
    }
    let sum: f64 = (0..=last).map(|l| w[l] * u(t - l as f64 * tau)).sum();
    Ok(tau.powf(-w.order()) * sum)
}

/// Exact RL derivative (lower limit 0) of `t^p`:
/// `Gamma(p+1) / Gamma(p+1-b) t^{p-b}`.
pub fn exact_rl_monomial(p: f64, beta: f64, t: f64) -> Result<f64> {
    if !(p > 0.0 && beta > 0.0 && beta < p + 1.0) {
        return Err(Error::Domain(format!(
            "need p > 0 and 0 < order < p + 1, got p={p}, order={beta}"
        )));
    }
    if t < 0.0 {
        return Err(Error::Domain(format!("time must be nonnegative, got {t}")));
    }
    Ok(gamma(p + 1.0) / gamma(p + 1.0 - beta) * t.powf(p - beta))
}
