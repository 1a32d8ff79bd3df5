//! Compact march for the 2D fractional Cable equation on a rectangle.
//!
//! Each step needs `L_x L_y u^{k+1} = rhs` on the interior with Dirichlet
//! data on the ring. The two compact factors act on different axes and
//! commute, so the solve splits into one family of x-tridiagonal solves for
//! `V = L_y u` followed by one family of y-tridiagonal solves for `u`.

use std::sync::Arc;

use crate::compact1d::{COMPACT_DIAG, COMPACT_OFF};
use crate::error::{Error, Result};
use crate::report::ErrorReport;
use crate::rl::weighted_history_sum;
use crate::solver1d::validate_common;
use crate::tridiag::SymTridiag;
use crate::weights::{midpoint_weights_recurrence, WeightSequence};

/// `f(x, y, t)`.
pub type SpaceTimeFn2D = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    lx: f64,
    ly: f64,
    m1: usize,
    m2: usize,
}

impl Grid2D {
    pub fn new(lx: f64, ly: f64, m1: usize, m2: usize) -> Result<Self> {
        if !(lx.is_finite() && lx > 0.0 && ly.is_finite() && ly > 0.0) {
            return Err(Error::Domain(format!(
                "domain sides must be positive, got {lx} x {ly}"
            )));
        }
        if m1 < 2 || m2 < 2 {
            return Err(Error::Domain(format!(
                "need at least 2 cells per axis, got {m1} x {m2}"
            )));
        }
        Ok(Self { lx, ly, m1, m2 })
    }

    pub fn cells_x(&self) -> usize {
        self.m1
    }

    pub fn cells_y(&self) -> usize {
        self.m2
    }

    pub fn hx(&self) -> f64 {
        self.lx / self.m1 as f64
    }

    pub fn hy(&self) -> f64 {
        self.ly / self.m2 as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.hx()
    }

    pub fn y(&self, j: usize) -> f64 {
        j as f64 * self.hy()
    }

    pub fn len(&self) -> usize {
        (self.m1 + 1) * (self.m2 + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Row-major index: `x` varies fastest.
    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * (self.m1 + 1) + i
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i == self.m1 || j == self.m2
    }
}

/// Node values on the full `(M1+1) x (M2+1)` grid, boundary ring included.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    grid: Grid2D,
    values: Vec<f64>,
}

impl Field2D {
    pub fn zeros(grid: Grid2D) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..=grid.m2 {
            for i in 0..=grid.m1 {
                values.push(f(grid.x(i), grid.y(j)));
            }
        }
        Self { grid, values }
    }

    pub fn from_values(grid: Grid2D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!(
                "field has {} values, grid has {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> Grid2D {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.grid.idx(i, j);
        self.values[k] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn check_grid(&self, other: &Field2D) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Shape(format!(
                "grids differ: {:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
enum Axis {
    X,
    Y,
}

/// Applies a 3-point stencil `(a f_{-1} + b f_0 + a f_{+1})` along `axis` on
/// interior lines of that axis; boundary lines of the axis get `edge(f)`.
fn along_axis(f: &Field2D, axis: Axis, off: f64, diag: f64, keep_edges: bool) -> Field2D {
    let g = f.grid;
    let mut out = Field2D::zeros(g);
    let (n_axis, stride) = match axis {
        Axis::X => (g.m1, 1),
        Axis::Y => (g.m2, g.m1 + 1),
    };
    for j in 0..=g.m2 {
        for i in 0..=g.m1 {
            let pos = match axis {
                Axis::X => i,
                Axis::Y => j,
            };
            let k = g.idx(i, j);
            out.values[k] = if pos == 0 || pos == n_axis {
                if keep_edges {
                    f.values[k]
                } else {
                    0.0
                }
            } else {
                off * (f.values[k - stride] + f.values[k + stride]) + diag * f.values[k]
            };
        }
    }
    out
}

/// Compact operator along x; identity on the lines `i = 0, M1`.
pub fn apply_lx(f: &Field2D) -> Field2D {
    along_axis(f, Axis::X, COMPACT_OFF, COMPACT_DIAG, true)
}

/// Compact operator along y; identity on the lines `j = 0, M2`.
pub fn apply_ly(f: &Field2D) -> Field2D {
    along_axis(f, Axis::Y, COMPACT_OFF, COMPACT_DIAG, true)
}

/// Second difference along x; zero on the lines `i = 0, M1`.
pub fn apply_dx2(f: &Field2D) -> Field2D {
    let h2 = f.grid.hx().powi(2);
    along_axis(f, Axis::X, 1.0 / h2, -2.0 / h2, false)
}

/// Second difference along y; zero on the lines `j = 0, M2`.
pub fn apply_dy2(f: &Field2D) -> Field2D {
    let h2 = f.grid.hy().powi(2);
    along_axis(f, Axis::Y, 1.0 / h2, -2.0 / h2, false)
}

/// `h_x h_y sum_{interior} u v`.
pub fn inner_2d(u: &Field2D, v: &Field2D) -> Result<f64> {
    u.check_grid(v)?;
    let g = u.grid;
    let mut s = 0.0;
    for j in 1..g.m2 {
        for i in 1..g.m1 {
            let k = g.idx(i, j);
            s += u.values[k] * v.values[k];
        }
    }
    Ok(g.hx() * g.hy() * s)
}

pub fn norm_2d(u: &Field2D) -> f64 {
    inner_2d(u, u).expect("same grid").sqrt()
}

/// Cached factorizations for `L_x L_y u = rhs`.
#[derive(Debug, Clone)]
pub struct FactoredSolver {
    grid: Grid2D,
    x_factor: SymTridiag,
    y_factor: SymTridiag,
}

impl FactoredSolver {
    pub fn new(grid: Grid2D) -> Self {
        Self {
            grid,
            x_factor: SymTridiag::new(grid.m1 - 1, COMPACT_DIAG, COMPACT_OFF),
            y_factor: SymTridiag::new(grid.m2 - 1, COMPACT_DIAG, COMPACT_OFF),
        }
    }

    /// Interior values of `rhs` are the right-hand side; the ring of
    /// `boundary` supplies the Dirichlet data. Interior values of `boundary`
    /// and the ring of `rhs` are ignored.
    pub fn solve(&self, rhs: &Field2D, boundary: &Field2D) -> Result<Field2D> {
        rhs.check_grid(boundary)?;
        if rhs.grid != self.grid {
            return Err(Error::Shape("field does not match solver grid".into()));
        }
        let g = self.grid;
        let (m1, m2) = (g.m1, g.m2);
        let row = m1 + 1;

        // Stage 1: V = L_y u. On the ring columns V follows from the known
        // boundary data; on interior rows solve L_x V = rhs along x.
        let mut v = Field2D::zeros(g);
        for i in [0, m1] {
            v.set(i, 0, boundary.at(i, 0));
            v.set(i, m2, boundary.at(i, m2));
            for j in 1..m2 {
                let val = COMPACT_OFF * (boundary.at(i, j - 1) + boundary.at(i, j + 1))
                    + COMPACT_DIAG * boundary.at(i, j);
                v.set(i, j, val);
            }
        }
        for i in 1..m1 {
            v.set(i, 0, boundary.at(i, 0));
            v.set(i, m2, boundary.at(i, m2));
        }
        for j in 1..m2 {
            let line = &mut v.values[j * row..(j + 1) * row];
            line[1..m1].copy_from_slice(&rhs.values[j * row + 1..j * row + m1]);
            line[1] -= COMPACT_OFF * line[0];
            line[m1 - 1] -= COMPACT_OFF * line[m1];
            self.x_factor.solve_in_place(&mut line[1..m1]);
        }

        // Stage 2: L_y u = V along y for each interior column.
        let mut u = v;
        for i in 1..m1 {
            let first = g.idx(i, 1);
            let last = g.idx(i, m2 - 1);
            u.values[first] -= COMPACT_OFF * u.values[g.idx(i, 0)];
            u.values[last] -= COMPACT_OFF * u.values[g.idx(i, m2)];
            self.y_factor.solve_strided(&mut u.values, first, row);
        }
        // ring columns carried V; restore u there
        for j in 0..=m2 {
            u.set(0, j, boundary.at(0, j));
            u.set(m1, j, boundary.at(m1, j));
        }
        Ok(u)
    }
}

pub fn factored_compact_solve(rhs: &Field2D, boundary: &Field2D) -> Result<Field2D> {
    FactoredSolver::new(rhs.grid).solve(rhs, boundary)
}

#[derive(Clone)]
pub struct CableProblem2D {
    pub alpha1: f64,
    pub alpha2: f64,
    pub k1: f64,
    pub k2: f64,
    pub lx: f64,
    pub ly: f64,
    pub horizon: f64,
    pub source: SpaceTimeFn2D,
    pub boundary: SpaceTimeFn2D,
    pub exact: Option<SpaceTimeFn2D>,
}

impl std::fmt::Debug for CableProblem2D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CableProblem2D")
            .field("alpha1", &self.alpha1)
            .field("alpha2", &self.alpha2)
            .field("k1", &self.k1)
            .field("k2", &self.k2)
            .field("lx", &self.lx)
            .field("ly", &self.ly)
            .field("horizon", &self.horizon)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

impl CableProblem2D {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alpha1: f64,
        alpha2: f64,
        k1: f64,
        k2: f64,
        lx: f64,
        ly: f64,
        horizon: f64,
        source: SpaceTimeFn2D,
    ) -> Result<Self> {
        validate_common(alpha1, alpha2, k1, k2, horizon)?;
        if !(lx > 0.0 && ly > 0.0 && lx.is_finite() && ly.is_finite()) {
            return Err(Error::Domain(format!(
                "domain sides must be positive, got {lx} x {ly}"
            )));
        }
        Ok(Self {
            alpha1,
            alpha2,
            k1,
            k2,
            lx,
            ly,
            horizon,
            source,
            boundary: Arc::new(|_, _, _| 0.0),
            exact: None,
        })
    }

    pub fn with_boundary(mut self, boundary: SpaceTimeFn2D) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_exact(mut self, exact: SpaceTimeFn2D) -> Self {
        self.exact = Some(exact);
        self
    }
}

pub struct MarchState2D<'a> {
    problem: &'a CableProblem2D,
    grid: Grid2D,
    tau: f64,
    steps: usize,
    history: Vec<Field2D>,
    w1: WeightSequence,
    w2: WeightSequence,
    solver: FactoredSolver,
}

impl<'a> MarchState2D<'a> {
    pub fn new(problem: &'a CableProblem2D, steps: usize, m1: usize, m2: usize) -> Result<Self> {
        let grid = Grid2D::new(problem.lx, problem.ly, m1, m2)?;
        let mut u0 = Field2D::zeros(grid);
        fill_ring(&mut u0, |x, y| (problem.boundary)(x, y, 0.0));
        Self::from_initial(problem, steps, u0)
    }

    /// March from an arbitrary initial field, for perturbation analysis.
    pub fn from_initial(problem: &'a CableProblem2D, steps: usize, u0: Field2D) -> Result<Self> {
        if steps == 0 {
            return Err(Error::Domain("need at least one time step".into()));
        }
        let grid = u0.grid;
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
            solver: FactoredSolver::new(grid),
        })
    }

    pub fn grid(&self) -> Grid2D {
        self.grid
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn history(&self) -> &[Field2D] {
        &self.history
    }

    pub fn into_history(self) -> Vec<Field2D> {
        self.history
    }

    pub fn current_level(&self) -> usize {
        self.history.len() - 1
    }

    pub fn is_complete(&self) -> bool {
        self.current_level() >= self.steps
    }

    /// Right-hand side (interior entries meaningful) for the step `k -> k+1`.
    pub fn assemble_rhs(&self, k: usize) -> Result<Field2D> {
        if k >= self.steps || k >= self.history.len() {
            return Err(Error::State(format!(
                "cannot assemble step {k}: history holds {} levels of {}",
                self.history.len(),
                self.steps + 1
            )));
        }
        let p = self.problem;
        let g = self.grid;
        let tau = self.tau;
        let levels: Vec<&[f64]> = self.history[..=k].iter().map(Field2D::values).collect();
        let h1 = Field2D::from_values(g, weighted_history_sum(&self.w1, &levels)?)?;
        let h2 = Field2D::from_values(g, weighted_history_sum(&self.w2, &levels)?)?;
        let c1 = tau * p.k1 * tau.powf(-(1.0 - p.alpha1));
        let c2 = tau * p.k2 * tau.powf(-(1.0 - p.alpha2));
        let t_half = (k as f64 + 0.5) * tau;

        let lxly = |f: &Field2D| apply_lx(&apply_ly(f));
        let l_uk = lxly(&self.history[k]);
        let diff_h1 = {
            let a = apply_ly(&apply_dx2(&h1));
            let b = apply_lx(&apply_dy2(&h1));
            Field2D {
                grid: g,
                values: a.values.iter().zip(&b.values).map(|(x, y)| x + y).collect(),
            }
        };
        let l_h2 = lxly(&h2);
        let l_f = lxly(&Field2D::from_fn(g, |x, y| (p.source)(x, y, t_half)));

        let values = (0..g.len())
            .map(|n| {
                l_uk.values[n] + c1 * diff_h1.values[n] - c2 * l_h2.values[n] + tau * l_f.values[n]
            })
            .collect();
        Ok(Field2D { grid: g, values })
    }

    pub fn step(&mut self) -> Result<&Field2D> {
        let k = self.current_level();
        let rhs = self.assemble_rhs(k)?;
        let t_next = (k + 1) as f64 * self.tau;
        let mut ring = Field2D::zeros(self.grid);
        fill_ring(&mut ring, |x, y| (self.problem.boundary)(x, y, t_next));
        let next = self.solver.solve(&rhs, &ring)?;
        self.history.push(next);
        Ok(self.history.last().expect("history is never empty"))
    }
}

fn fill_ring(f: &mut Field2D, value: impl Fn(f64, f64) -> f64) {
    let g = f.grid;
    for j in 0..=g.m2 {
        for i in 0..=g.m1 {
            if g.is_boundary(i, j) {
                f.set(i, j, value(g.x(i), g.y(j)));
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Solution2D {
    pub grid: Grid2D,
    pub tau: f64,
    pub trajectory: Vec<Field2D>,
    pub report: Option<ErrorReport>,
}

pub fn error_report_2d(
    grid: Grid2D,
    tau: f64,
    trajectory: &[Field2D],
    exact: &(dyn Fn(f64, f64, f64) -> f64 + Send + Sync),
) -> ErrorReport {
    let mut report = ErrorReport::default();
    let last = trajectory.len() - 1;
    for (k, u) in trajectory.iter().enumerate() {
        let t = k as f64 * tau;
        let reference = Field2D::from_fn(grid, |x, y| exact(x, y, t));
        let e = Field2D {
            grid,
            values: u
                .values
                .iter()
                .zip(&reference.values)
                .map(|(a, b)| a - b)
                .collect(),
        };
        let emax = e.max_abs();
        report.max_all = report.max_all.max(emax);
        if k == last {
            report.max_final = emax;
            report.l2_final = norm_2d(&e);
        }
    }
    report
}

pub fn solve_2d(
    problem: &CableProblem2D,
    steps: usize,
    m1: usize,
    m2: usize,
) -> Result<Solution2D> {
    let mut state = MarchState2D::new(problem, steps, m1, m2)?;
    while !state.is_complete() {
        state.step()?;
    }
    let grid = state.grid();
    let tau = state.tau();
    let trajectory = state.into_history();
    let report = problem
        .exact
        .as_ref()
        .map(|u| error_report_2d(grid, tau, &trajectory, u.as_ref()));
    Ok(Solution2D {
        grid,
        tau,
        trajectory,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_field(rng: &mut ChaCha8Rng, g: Grid2D, interior_only: bool) -> Field2D {
        let mut f = Field2D::zeros(g);
        for j in 0..=g.m2 {
            for i in 0..=g.m1 {
                if !interior_only || !g.is_boundary(i, j) {
                    f.set(i, j, rng.random_range(-1.0..1.0));
                }
            }
        }
        f
    }

    #[test]
    fn constant_field_is_fixed_by_compact_operators() {
        let g = Grid2D::new(1.0, 2.0, 5, 7).unwrap();
        let ones = Field2D::from_fn(g, |_, _| 1.0);
        for f in [apply_lx(&ones), apply_ly(&ones)] {
            assert!(f.values().iter().all(|v| (v - 1.0).abs() < 1e-15));
        }
    }

    #[test]
    fn axis_operators_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = Grid2D::new(1.0, 1.0, 6, 9).unwrap();
        let f = random_field(&mut rng, g, false);
        let a = apply_lx(&apply_ly(&f));
        let b = apply_ly(&apply_lx(&f));
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn second_difference_of_product_sine() {
        let err = |m: usize| {
            let g = Grid2D::new(1.0, 1.0, m, m).unwrap();
            let f = Field2D::from_fn(g, |x, y| (PI * x).sin() * (PI * y).sin());
            let d = apply_dx2(&f);
            let mut e = 0.0_f64;
            for j in 1..m {
                for i in 1..m {
                    e = e.max((d.at(i, j) + PI * PI * f.at(i, j)).abs());
                }
            }
            e
        };
        let order = (err(8) / err(16)).log2();
        assert!((order - 2.0).abs() < 0.05, "order = {order}");
    }

    #[test]
    fn factored_solve_inverts_forward_operator() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (m1, m2) in [(2, 2), (3, 5), (8, 6), (17, 11)] {
            let g = Grid2D::new(1.0, 1.5, m1, m2).unwrap();
            let u = random_field(&mut rng, g, false);
            let rhs = apply_lx(&apply_ly(&u));
            let back = factored_compact_solve(&rhs, &u).unwrap();
            for (a, b) in back.values().iter().zip(u.values()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn factored_solve_constant() {
        let g = Grid2D::new(1.0, 1.0, 6, 6).unwrap();
        let ones = Field2D::from_fn(g, |_, _| 1.0);
        let u = factored_compact_solve(&ones, &ones).unwrap();
        assert!(u.values().iter().all(|v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn compact_product_rayleigh_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for t in 0..100 {
            let g = Grid2D::new(1.0, 1.0, 3 + t % 9, 3 + (t * 7) % 11).unwrap();
            let u = random_field(&mut rng, g, true);
            let q = inner_2d(&apply_lx(&apply_ly(&u)), &u).unwrap() / inner_2d(&u, &u).unwrap();
            assert!((1.0 / 3.0..=1.0).contains(&q), "q = {q}");
        }
    }

    #[test]
    fn homogeneous_problem_stays_zero() {
        let p = CableProblem2D::new(0.5, 0.5, 1.0, 1.0, 1.0, 1.0, 1.0, Arc::new(|_, _, _| 0.0))
            .unwrap()
            .with_exact(Arc::new(|_, _, _| 0.0));
        let sol = solve_2d(&p, 5, 4, 6).unwrap();
        assert!(sol.trajectory.iter().all(|u| u.max_abs() == 0.0));
        assert_eq!(sol.report.unwrap().max_all, 0.0);
    }

    #[test]
    fn boundary_ring_is_imposed() {
        let p = CableProblem2D::new(0.3, 0.7, 1.0, 1.0, 1.0, 1.0, 1.0, Arc::new(|_, _, _| 0.0))
            .unwrap()
            .with_boundary(Arc::new(|x, y, t| t * (1.0 + x + 2.0 * y)));
        let sol = solve_2d(&p, 3, 4, 5).unwrap();
        let g = sol.grid;
        for (k, u) in sol.trajectory.iter().enumerate() {
            let t = k as f64 / 3.0;
            for j in 0..=5 {
                for i in 0..=4 {
                    if g.is_boundary(i, j) {
                        assert!((u.at(i, j) - t * (1.0 + g.x(i) + 2.0 * g.y(j))).abs() < 1e-14);
                    }
                }
            }
        }
    }
}
