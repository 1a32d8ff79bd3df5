//! Compact Crank–Nicolson-type march for the 1D fractional Cable equation
//!
//! ```text
//! u_t = K1 D^{1-a1} u_xx - K2 D^{1-a2} u + f,   u(x, 0) = 0,
//! u(0, t) = phi1(t),  u(L, t) = phi2(t)
//! ```
//!
//! Each step solves
//!
//! ```text
//! L(u^{k+1} - u^k) = tau K1 d^{1-a1} dxx u^k - tau K2 d^{1-a2} L u^k + tau L f^{k+1/2}
//! ```
//!
//! where `d^b` is the midpoint history sum and `L` the compact operator.
//! The march starts at `k = 0`; with `u^0 = 0` both history sums vanish on
//! the first step.

use std::sync::Arc;

use crate::compact1d::{compact_l_into, delta_x2_into, norm, CompactSolver, Field1D, Grid1D};
use crate::error::{Error, Result};
use crate::report::ErrorReport;
use crate::rl::weighted_history_sum;
use crate::weights::{midpoint_weights_recurrence, WeightSequence};

/// Space-time function `f(x, t)`.
pub type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
/// Boundary function `phi(t)`.
pub type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct CableProblem1D {
    pub alpha1: f64,
    pub alpha2: f64,
    pub k1: f64,
    pub k2: f64,
    pub length: f64,
    pub horizon: f64,
    pub source: SpaceTimeFn,
    pub left: TimeFn,
    pub right: TimeFn,
    pub exact: Option<SpaceTimeFn>,
}

impl std::fmt::Debug for CableProblem1D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CableProblem1D")
            .field("alpha1", &self.alpha1)
            .field("alpha2", &self.alpha2)
            .field("k1", &self.k1)
            .field("k2", &self.k2)
            .field("length", &self.length)
            .field("horizon", &self.horizon)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

pub(crate) fn validate_common(
    alpha1: f64,
    alpha2: f64,
    k1: f64,
    k2: f64,
    horizon: f64,
) -> Result<()> {
    for (name, a) in [("alpha1", alpha1), ("alpha2", alpha2)] {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::Domain(format!("{name} must lie in (0, 1), got {a}")));
        }
    }
    if !(k1.is_finite() && k2.is_finite()) {
        return Err(Error::Domain("K1 and K2 must be finite".into()));
    }
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::Domain(format!(
            "horizon must be positive, got {horizon}"
        )));
    }
    Ok(())
}

impl CableProblem1D {
    /// Problem with homogeneous boundary data and no exact solution.
    pub fn new(
        alpha1: f64,
        alpha2: f64,
        k1: f64,
        k2: f64,
        length: f64,
        horizon: f64,
        source: SpaceTimeFn,
    ) -> Result<Self> {
        validate_common(alpha1, alpha2, k1, k2, horizon)?;
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Domain(format!(
                "length must be positive, got {length}"
            )));
        }
        Ok(Self {
            alpha1,
            alpha2,
            k1,
            k2,
            length,
            horizon,
            source,
            left: Arc::new(|_| 0.0),
            right: Arc::new(|_| 0.0),
            exact: None,
        })
    }

    pub fn with_boundary(mut self, left: TimeFn, right: TimeFn) -> Self {
        self.left = left;
        self.right = right;
        self
    }

    pub fn with_exact(mut self, exact: SpaceTimeFn) -> Self {
        self.exact = Some(exact);
        self
    }

    /// Same problem with the source scaled by `factor`.
    pub fn scaled_source(&self, factor: f64) -> Self {
        let src = self.source.clone();
        let mut out = self.clone();
        out.source = Arc::new(move |x, t| factor * src(x, t));
        out
    }
}

/// Mutable state of one march: the dense history and cached weight tables.
pub struct MarchState1D<'a> {
    problem: &'a CableProblem1D,
    grid: Grid1D,
    tau: f64,
    steps: usize,
    history: Vec<Field1D>,
    w1: WeightSequence,
    w2: WeightSequence,
    solver: CompactSolver,
}

impl<'a> MarchState1D<'a> {
    /// Fresh march from the zero initial condition (boundary nodes take
    /// `phi(0)` as given).
    pub fn new(problem: &'a CableProblem1D, steps: usize, cells: usize) -> Result<Self> {
        let grid = Grid1D::new(problem.length, cells)?;
        let mut u0 = Field1D::zeros(grid);
        u0.values_mut()[0] = (problem.left)(0.0);
        u0.values_mut()[cells] = (problem.right)(0.0);
        Self::from_initial(problem, steps, u0)
    }

    /// March from an arbitrary initial field. The scheme itself assumes
    /// `u^0 = 0`; this entry point exists for perturbation analysis.
    pub fn from_initial(problem: &'a CableProblem1D, steps: usize, u0: Field1D) -> Result<Self> {
        if steps == 0 {
            return Err(Error::Domain("need at least one time step".into()));
        }
        let grid = u0.grid();
        if (grid.length() - problem.length).abs() > 1e-12 * problem.length {
            return Err(Error::Shape(
                "initial field does not cover the problem domain".into(),
            ));
        }
        let w1 = midpoint_weights_recurrence(1.0 - problem.alpha1, steps)?;
        let w2 = midpoint_weights_recurrence(1.0 - problem.alpha2, steps)?;
        let mut history = Vec::with_capacity(steps + 1);
        history.push(u0);
        Ok(Self {
            problem,
            grid,
            tau: problem.horizon / steps as f64,
            steps,
            history,
            w1,
            w2,
            solver: CompactSolver::new(grid),
        })
    }

    pub fn grid(&self) -> Grid1D {
        self.grid
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn history(&self) -> &[Field1D] {
        &self.history
    }

    pub fn into_history(self) -> Vec<Field1D> {
        self.history
    }

    pub fn current_level(&self) -> usize {
        self.history.len() - 1
    }

    pub fn is_complete(&self) -> bool {
        self.current_level() >= self.steps
    }

    /// Interior right-hand side of the step `k -> k+1` and the boundary pair
    /// at `t_{k+1}`.
    pub fn assemble_rhs(&self, k: usize) -> Result<(Vec<f64>, (f64, f64))> {
        if k >= self.steps {
            return Err(Error::State(format!(
                "step {k} is past the horizon ({} steps)",
                self.steps
            )));
        }
        if k >= self.history.len() {
            return Err(Error::State(format!(
                "history holds levels 0..={}, step {k} needs level {k}",
                self.history.len() - 1
            )));
        }
        let p = self.problem;
        let tau = self.tau;
        let m = self.grid.cells();
        let n = m + 1;
        let levels: Vec<&[f64]> = self.history[..=k].iter().map(Field1D::values).collect();
        let h1 = weighted_history_sum(&self.w1, &levels)?;
        let h2 = weighted_history_sum(&self.w2, &levels)?;

        let c1 = tau * p.k1 * tau.powf(-(1.0 - p.alpha1));
        let c2 = tau * p.k2 * tau.powf(-(1.0 - p.alpha2));
        let t_half = (k as f64 + 0.5) * tau;
        let f_half: Vec<f64> = (0..n).map(|j| (p.source)(self.grid.x(j), t_half)).collect();

        let mut l_uk = vec![0.0; n];
        let mut d_h1 = vec![0.0; n];
        let mut l_h2 = vec![0.0; n];
        let mut l_f = vec![0.0; n];
        compact_l_into(self.history[k].values(), &mut l_uk);
        delta_x2_into(&h1, self.grid.spacing(), &mut d_h1);
        compact_l_into(&h2, &mut l_h2);
        compact_l_into(&f_half, &mut l_f);

        let rhs = (1..m)
            .map(|j| l_uk[j] + c1 * d_h1[j] - c2 * l_h2[j] + tau * l_f[j])
            .collect();
        let t_next = (k + 1) as f64 * tau;
        Ok((rhs, ((p.left)(t_next), (p.right)(t_next))))
    }

    /// Advances one level and returns the new field.
    pub fn step(&mut self) -> Result<&Field1D> {
        let k = self.current_level();
        let (rhs, (left, right)) = self.assemble_rhs(k)?;
        let next = self.solver.solve(&rhs, left, right)?;
        self.history.push(next);
        Ok(self.history.last().expect("history is never empty"))
    }
}

/// Result of a full march.
#[derive(Debug, Clone)]
pub struct Solution1D {
    pub grid: Grid1D,
    pub tau: f64,
    pub trajectory: Vec<Field1D>,
    pub report: Option<ErrorReport>,
}

impl Solution1D {
    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.tau
    }
}

/// Errors of a trajectory against the exact solution.
pub fn error_report_1d(
    grid: Grid1D,
    tau: f64,
    trajectory: &[Field1D],
    exact: &(dyn Fn(f64, f64) -> f64 + Send + Sync),
) -> ErrorReport {
    let mut report = ErrorReport::default();
    let last = trajectory.len() - 1;
    for (k, u) in trajectory.iter().enumerate() {
        let t = k as f64 * tau;
        let e = Field1D::from_values(
            grid,
            u.values()
                .iter()
                .enumerate()
                .map(|(j, v)| v - exact(grid.x(j), t))
                .collect(),
        )
        .expect("same grid");
        let emax = e.max_abs();
        report.max_all = report.max_all.max(emax);
        if k == last {
            report.max_final = emax;
            report.l2_final = norm(&e);
        }
    }
    report
}

/// Marches `steps` levels on `cells` cells and reports errors when the
/// problem has an exact solution.
pub fn solve_1d(problem: &CableProblem1D, steps: usize, cells: usize) -> Result<Solution1D> {
    let mut state = MarchState1D::new(problem, steps, cells)?;
    while !state.is_complete() {
        state.step()?;
    }
    let grid = state.grid();
    let tau = state.tau();
    let trajectory = state.into_history();
    let report = problem
        .exact
        .as_ref()
        .map(|u| error_report_1d(grid, tau, &trajectory, u.as_ref()));
    Ok(Solution1D {
        grid,
        tau,
        trajectory,
        report,
    })
}
