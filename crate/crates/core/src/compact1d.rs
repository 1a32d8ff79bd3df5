//! One-dimensional grid functions and the fourth-order compact operator.
//!
//! Fields store every node `x_0..x_M`, boundary included. Operators read the
//! boundary values and write interiors; on boundary nodes the second
//! difference is zero and the compact operator is the identity.

use crate::error::{Error, Result};
use crate::tridiag::SymTridiag;

pub const COMPACT_DIAG: f64 = 10.0 / 12.0;
pub const COMPACT_OFF: f64 = 1.0 / 12.0;

/// Uniform grid on `[0, L]` with `M` cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    length: f64,
    cells: usize,
}

impl Grid1D {
    pub fn new(length: f64, cells: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Domain(format!(
                "length must be positive, got {length}"
            )));
        }
        if cells < 2 {
            return Err(Error::Domain(format!("need at least 2 cells, got {cells}")));
        }
        Ok(Self { length, cells })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn nodes(&self) -> usize {
        self.cells + 1
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.cells as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.spacing()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field1D {
    grid: Grid1D,
    values: Vec<f64>,
}

impl Field1D {
    pub fn zeros(grid: Grid1D) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.nodes()],
        }
    }

    pub fn from_values(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.nodes() {
            return Err(Error::Shape(format!(
                "field has {} values, grid has {} nodes",
                values.len(),
                grid.nodes()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.nodes()).map(|j| f(grid.x(j))).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> Grid1D {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn interior(&self) -> &[f64] {
        &self.values[1..self.grid.cells()]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn check_same_grid(&self, other: &Field1D) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Shape(format!(
                "grids differ: {:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }
}

/// `(f_{j+1} - 2 f_j + f_{j-1}) / h^2` on interiors, zero on the boundary.
pub fn delta_x2(f: &Field1D) -> Field1D {
    let mut out = Field1D::zeros(f.grid);
    delta_x2_into(&f.values, f.grid.spacing(), &mut out.values);
    out
}

pub(crate) fn delta_x2_into(f: &[f64], h: f64, out: &mut [f64]) {
    let m = f.len() - 1;
    let inv_h2 = 1.0 / (h * h);
    out[0] = 0.0;
    out[m] = 0.0;
    for j in 1..m {
        out[j] = (f[j + 1] - 2.0 * f[j] + f[j - 1]) * inv_h2;
    }
}

/// `(f_{j+1} + 10 f_j + f_{j-1}) / 12` on interiors, identity on the boundary.
pub fn compact_l(f: &Field1D) -> Field1D {
    let mut out = Field1D::zeros(f.grid);
    compact_l_into(&f.values, &mut out.values);
    out
}

pub(crate) fn compact_l_into(f: &[f64], out: &mut [f64]) {
    let m = f.len() - 1;
    out[0] = f[0];
    out[m] = f[m];
    for j in 1..m {
        out[j] = COMPACT_OFF * (f[j + 1] + f[j - 1]) + COMPACT_DIAG * f[j];
    }
}

/// Reusable solver for `L u = rhs` on interiors with Dirichlet data.
#[derive(Debug, Clone)]
pub struct CompactSolver {
    grid: Grid1D,
    factor: SymTridiag,
}

impl CompactSolver {
    pub fn new(grid: Grid1D) -> Self {
        Self {
            grid,
            factor: SymTridiag::new(grid.cells() - 1, COMPACT_DIAG, COMPACT_OFF),
        }
    }

    /// `rhs` holds the `M - 1` interior values.
    pub fn solve(&self, rhs: &[f64], left: f64, right: f64) -> Result<Field1D> {
        let m = self.grid.cells();
        if rhs.len() != m - 1 {
            return Err(Error::Shape(format!(
                "expected {} interior values, got {}",
                m - 1,
                rhs.len()
            )));
        }
        let mut values = Vec::with_capacity(m + 1);
        values.push(left);
        values.extend_from_slice(rhs);
        values.push(right);
        self.solve_nodes(&mut values);
        Ok(Field1D {
            grid: self.grid,
            values,
        })
    }

    /// In-place variant on a full node vector whose boundary entries already
    /// hold the Dirichlet values and whose interior holds the right-hand side.
    pub(crate) fn solve_nodes(&self, values: &mut [f64]) {
        let m = self.grid.cells();
        values[1] -= COMPACT_OFF * values[0];
        values[m - 1] -= COMPACT_OFF * values[m];
        self.factor.solve_in_place(&mut values[1..m]);
    }
}

/// Solves `(L u)_j = rhs_j` for `1 <= j <= M-1` with `u_0 = left`, `u_M = right`.
pub fn solve_compact(grid: Grid1D, rhs: &[f64], left: f64, right: f64) -> Result<Field1D> {
    CompactSolver::new(grid).solve(rhs, left, right)
}

/// `(u, v) = h sum_{j=1}^{M-1} u_j v_j`.
pub fn inner(u: &Field1D, v: &Field1D) -> Result<f64> {
    u.check_same_grid(v)?;
    let s: f64 = u
        .interior()
        .iter()
        .zip(v.interior())
        .map(|(a, b)| a * b)
        .sum();
    Ok(u.grid.spacing() * s)
}

pub fn norm(u: &Field1D) -> f64 {
    let s: f64 = u.interior().iter().map(|a| a * a).sum();
    (u.grid.spacing() * s).sqrt()
}

/// `(dx u, dx v) = h sum_{j=1}^{M} (dx u)_{j-1/2} (dx v)_{j-1/2}`.
pub fn inner_dx(u: &Field1D, v: &Field1D) -> Result<f64> {
    u.check_same_grid(v)?;
    let h = u.grid.spacing();
    let s: f64 = (1..u.grid.nodes())
        .map(|j| (u.values[j] - u.values[j - 1]) * (v.values[j] - v.values[j - 1]))
        .sum();
    Ok(s / h)
}
