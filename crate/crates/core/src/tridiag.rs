//! Thomas algorithm for constant-coefficient symmetric tridiagonal systems.
//!
//! The compact operators only ever produce the matrix `tridiag(off, diag, off)`
//! with `|diag| > 2 |off|`, so elimination without pivoting is stable.

/// Factored form of `tridiag(off, diag, off)` of a fixed size.
#[derive(Debug, Clone)]
pub struct SymTridiag {
    off: f64,
    /// Modified super-diagonal `c'_i`.
    upper: Vec<f64>,
    /// Reciprocal pivots.
    inv_pivot: Vec<f64>,
}

impl SymTridiag {
    pub fn new(n: usize, diag: f64, off: f64) -> Self {
        let mut upper = Vec::with_capacity(n);
        let mut inv_pivot = Vec::with_capacity(n);
        let mut prev_upper = 0.0;
        for _ in 0..n {
            let pivot = diag - off * prev_upper;
            let inv = 1.0 / pivot;
            prev_upper = off * inv;
            inv_pivot.push(inv);
            upper.push(prev_upper);
        }
        Self {
            off,
            upper,
            inv_pivot,
        }
    }

    pub fn size(&self) -> usize {
        self.inv_pivot.len()
    }

    /// Overwrites `rhs` with the solution.
    pub fn solve_in_place(&self, rhs: &mut [f64]) {
        let n = self.size();
        assert_eq!(rhs.len(), n, "right-hand side has the wrong length");
        if n == 0 {
            return;
        }
        rhs[0] *= self.inv_pivot[0];
        for i in 1..n {
            rhs[i] = (rhs[i] - self.off * rhs[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..n - 1).rev() {
            rhs[i] -= self.upper[i] * rhs[i + 1];
        }
    }

    /// Solves along a strided view `data[start + i * stride]`.
    pub fn solve_strided(&self, data: &mut [f64], start: usize, stride: usize) {
        let n = self.size();
        if n == 0 {
            return;
        }
        let idx = |i: usize| start + i * stride;
        data[idx(0)] *= self.inv_pivot[0];
        for i in 1..n {
            data[idx(i)] = (data[idx(i)] - self.off * data[idx(i - 1)]) * self.inv_pivot[i];
        }
        for i in (0..n - 1).rev() {
            data[idx(i)] -= self.upper[i] * data[idx(i + 1)];
        }
    }
}
