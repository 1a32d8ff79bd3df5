//! Quadrature weights of the midpoint Riemann–Liouville formula.
//!
//! The weights `w_l` of order `beta` are the Taylor coefficients of
//!
//! ```text
//! G(z) = ((3b+1)/(2b) - (2b+1)/b z + (b+1)/(2b) z^2)^b,   b = beta
//! ```
//!
//! Everything here is parameterized by the order `beta` of the derivative
//! being discretized. The Cable-equation solvers need orders `1 - alpha1`
//! and `1 - alpha2`; they perform that substitution themselves, once, when
//! building their weight tables.
//!
//! Two constructions are provided. [`midpoint_weights_recurrence`] is the
//! O(n) three-term recurrence used in production. [`midpoint_weights_direct`]
//! expands `G` as a product of two binomial series, costs O(n^2), and serves
//! as the independent cross-check.

use std::ops::Index;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Immutable table of weights `w_0..w_n` for one fractional order.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    order: f64,
    weights: Vec<f64>,
}

impl WeightSequence {
    pub fn order(&self) -> f64 {
        self.order
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    /// Number of stored weights (`n + 1`).
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, l: usize) -> Option<f64> {
        self.weights.get(l).copied()
    }

    /// `sum_{l <= last} w_l`; `G(1) = 0` drives this to zero as `last` grows.
    pub fn partial_sum(&self, last: usize) -> f64 {
        neumaier_sum(self.weights.iter().take(last + 1).copied())
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.weights.iter()
    }
}

impl Index<usize> for WeightSequence {
    type Output = f64;

    fn index(&self, l: usize) -> &f64 {
        &self.weights[l]
    }
}

/// Leading weight `((3b+1)/(2b))^b`.
pub fn leading_weight(beta: f64) -> f64 {
    ((3.0 * beta + 1.0) / (2.0 * beta)).powf(beta)
}

fn check_midpoint_order(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 && beta <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "order must lie in (0, 1], got {beta}"
        )))
    }
}

/// Grünwald–Letnikov coefficients `g_m = (-1)^m C(beta, m)`, `m = 0..=n`.
pub fn binomial_weights(beta: f64, n: usize) -> Result<Vec<f64>> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::Domain(format!("order must be positive, got {beta}")));
    }
    let mut g = Vec::with_capacity(n + 1);
    g.push(1.0);
    for m in 1..=n {
        let prev = g[m - 1];
        g.push((1.0 - (beta + 1.0) / m as f64) * prev);
    }
    Ok(g)
}

/// Weights by convolving two binomial series:
/// `w_l = w_0 * sum_m p^m g_m g_{l-m}` with `p = (b+1)/(3b+1)`.
pub fn midpoint_weights_direct(beta: f64, n: usize) -> Result<WeightSequence> {
    check_midpoint_order(beta)?;
    let g = binomial_weights(beta, n)?;
    let ratio = (beta + 1.0) / (3.0 * beta + 1.0);
    let scaled: Vec<f64> = g
        .iter()
        .scan(1.0, |power, &gm| {
            let term = *power * gm;
            *power *= ratio;
            Some(term)
        })
        .collect();
    let lead = leading_weight(beta);
    let weights = (0..=n)
        .map(|l| lead * neumaier_sum((0..=l).map(|m| scaled[m] * g[l - m])))
        .collect();
    Ok(WeightSequence {
        order: beta,
        weights,
    })
}

/// Weights by the three-term recurrence
///
/// ```text
/// w_1 = -2b(2b+1)/(3b+1) w_0
/// w_l = [2(l-1-b)(2b+1) w_{l-1} + (1+b)(2+2b-l) w_{l-2}] / ((3b+1) l),  l >= 2
/// ```
pub fn midpoint_weights_recurrence(beta: f64, n: usize) -> Result<WeightSequence> {
    check_midpoint_order(beta)?;
    let mut w = Vec::with_capacity(n + 1);
    w.push(leading_weight(beta));
    if n >= 1 {
        w.push(-2.0 * beta * (2.0 * beta + 1.0) / (3.0 * beta + 1.0) * w[0]);
    }
    for l in 2..=n {
        let lf = l as f64;
        let next = (2.0 * (lf - 1.0 - beta) * (2.0 * beta + 1.0) * w[l - 1]
            + (1.0 + beta) * (2.0 + 2.0 * beta - lf) * w[l - 2])
            / ((3.0 * beta + 1.0) * lf);
        w.push(next);
    }
    Ok(WeightSequence {
        order: beta,
        weights: w,
    })
}

/// Principal-branch value of the generating function at `z`.
pub fn generating_function_eval(beta: f64, z: Complex64) -> Complex64 {
    // Factored so that the zero at z = 1 is exact.
    let one = Complex64::new(1.0, 0.0);
    let q = (one - z) * ((3.0 * beta + 1.0) - (beta + 1.0) * z) / (2.0 * beta);
    if q == Complex64::new(0.0, 0.0) {
        return q;
    }
    q.powf(beta)
}

/// Minimum over a uniform grid on `[0, pi]` of the truncated symbol
///
/// ```text
/// S(x) = Re[(1 + e^{-ix}) sum_{k<=n_trunc} w_k e^{-ikx}]
/// ```
///
/// which is the symbol of the symmetric Toeplitz matrix `A + B` generated by
/// the history sums in the energy estimate. Nonnegativity of `S` makes that
/// matrix positive semi-definite.
pub fn symbol_min_scan(beta: f64, x_points: usize, n_trunc: usize) -> Result<f64> {
    if x_points < 2 {
        return Err(Error::Domain("need at least two scan points".into()));
    }
    let w = midpoint_weights_recurrence(beta, n_trunc)?;
    let min = (0..x_points)
        .map(|i| std::f64::consts::PI * i as f64 / (x_points - 1) as f64)
        .map(|x| truncated_symbol(&w, x))
        .fold(f64::INFINITY, f64::min);
    Ok(min)
}

/// One point of the symbol scanned by [`symbol_min_scan`].
pub fn truncated_symbol(w: &WeightSequence, x: f64) -> f64 {
    // Re[(1 + e^{-ix}) e^{-ikx}] = cos(kx) + cos((k+1)x)
    let terms = w
        .iter()
        .enumerate()
        .map(|(k, &wk)| wk * ((k as f64 * x).cos() + ((k + 1) as f64 * x).cos()));
    neumaier_sum(terms)
}

/// Compensated (Neumaier) summation.
pub(crate) fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
