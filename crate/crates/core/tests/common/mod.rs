//! Dense reference implementations shared by the integration tests and the
//! acceptance runner. Everything here builds full matrices and solves with
//! LU, independent of the tridiagonal and factored paths.

#![allow(dead_code)]

use fraccable::solver1d::CableProblem1D;
use fraccable::solver2d::CableProblem2D;
use fraccable::weights::midpoint_weights_direct;
use nalgebra::{DMatrix, DVector};

/// Full-node compact operator: `(1, 10, 1)/12` on interior rows, identity
/// on the two boundary rows.
pub fn compact_matrix(cells: usize) -> DMatrix<f64> {
    let n = cells + 1;
    let mut a = DMatrix::zeros(n, n);
    a[(0, 0)] = 1.0;
    a[(cells, cells)] = 1.0;
    for j in 1..cells {
        a[(j, j - 1)] = 1.0 / 12.0;
        a[(j, j)] = 10.0 / 12.0;
        a[(j, j + 1)] = 1.0 / 12.0;
    }
    a
}

/// Full-node second difference, zero on boundary rows.
pub fn second_difference_matrix(cells: usize, h: f64) -> DMatrix<f64> {
    let n = cells + 1;
    let mut a = DMatrix::zeros(n, n);
    for j in 1..cells {
        a[(j, j - 1)] = 1.0 / (h * h);
        a[(j, j)] = -2.0 / (h * h);
        a[(j, j + 1)] = 1.0 / (h * h);
    }
    a
}

/// The whole 1D march as one linear system in `(u^1, ..., u^N)`. Returns
/// all levels including `u^0`.
pub fn dense_march_1d(p: &CableProblem1D, steps: usize, cells: usize) -> Vec<Vec<f64>> {
    let n = cells + 1;
    let tau = p.horizon / steps as f64;
    let h = p.length / cells as f64;
    let w1 = midpoint_weights_direct(1.0 - p.alpha1, steps).unwrap();
    let w2 = midpoint_weights_direct(1.0 - p.alpha2, steps).unwrap();
    let c1 = tau * p.k1 * tau.powf(p.alpha1 - 1.0);
    let c2 = tau * p.k2 * tau.powf(p.alpha2 - 1.0);
    let l = compact_matrix(cells);
    let d2 = second_difference_matrix(cells, h);
    let mut u0 = DVector::zeros(n);
    u0[0] = (p.left)(0.0);
    u0[cells] = (p.right)(0.0);

    let size = steps * n;
    let mut a = DMatrix::zeros(size, size);
    let mut b = DVector::zeros(size);
    for k in 0..steps {
        let row0 = k * n;
        // contribution of level m to block row k, for interior rows only
        let mut add = |m: usize, block: &DMatrix<f64>| {
            let mut block = block.clone();
            block.row_mut(0).fill(0.0);
            block.row_mut(cells).fill(0.0);
            if m == 0 {
                let shift = &block * &u0;
                for r in 0..n {
                    b[row0 + r] -= shift[r];
                }
            } else {
                let col0 = (m - 1) * n;
                let mut view = a.view_mut((row0, col0), (n, n));
                view += &block;
            }
        };
        add(k + 1, &l);
        add(k, &(-&l));
        for ell in 0..=k {
            add(k - ell, &(-(c1 * w1[ell]) * &d2));
            add(k - ell, &((c2 * w2[ell]) * &l));
        }
        let t_half = (k as f64 + 0.5) * tau;
        let f = DVector::from_iterator(n, (0..n).map(|j| (p.source)(j as f64 * h, t_half)));
        let lf = &l * f;
        for r in 1..cells {
            b[row0 + r] += tau * lf[r];
        }
        let t_next = (k + 1) as f64 * tau;
        a[(row0, row0)] = 1.0;
        b[row0] = (p.left)(t_next);
        a[(row0 + cells, row0 + cells)] = 1.0;
        b[row0 + cells] = (p.right)(t_next);
    }
    let sol = a.lu().solve(&b).expect("nonsingular");
    let mut out = vec![u0.iter().copied().collect::<Vec<_>>()];
    for k in 0..steps {
        out.push(sol.rows(k * n, n).iter().copied().collect());
    }
    out
}

/// Full-node 2D operators as Kronecker products in the `j * (M1+1) + i`
/// ordering: `(lx, ly, dx2, dy2)`.
pub fn operators_2d(
    m1: usize,
    m2: usize,
    hx: f64,
    hy: f64,
) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let ix = DMatrix::identity(m1 + 1, m1 + 1);
    let iy = DMatrix::identity(m2 + 1, m2 + 1);
    let lx = iy.kronecker(&compact_matrix(m1));
    let ly = compact_matrix(m2).kronecker(&ix);
    let dx2 = iy.kronecker(&second_difference_matrix(m1, hx));
    let dy2 = second_difference_matrix(m2, hy).kronecker(&ix);
    (lx, ly, dx2, dy2)
}

fn is_ring(i: usize, j: usize, m1: usize, m2: usize) -> bool {
    i == 0 || j == 0 || i == m1 || j == m2
}

/// Solves `Lx Ly u = rhs` on interior rows with `u = boundary` on the ring.
pub fn dense_compact_solve_2d(m1: usize, m2: usize, rhs: &[f64], boundary: &[f64]) -> Vec<f64> {
    let (lx, ly, _, _) = operators_2d(m1, m2, 1.0, 1.0);
    let mut a = &lx * &ly;
    let mut b = DVector::from_column_slice(rhs);
    for j in 0..=m2 {
        for i in 0..=m1 {
            if is_ring(i, j, m1, m2) {
                let r = j * (m1 + 1) + i;
                a.row_mut(r).fill(0.0);
                a[(r, r)] = 1.0;
                b[r] = boundary[r];
            }
        }
    }
    a.lu()
        .solve(&b)
        .expect("nonsingular")
        .iter()
        .copied()
        .collect()
}

/// 2D march where each step assembles the right-hand side with dense
/// operators and solves the full-node system by LU.
pub fn dense_march_2d(p: &CableProblem2D, steps: usize, m1: usize, m2: usize) -> Vec<Vec<f64>> {
    let tau = p.horizon / steps as f64;
    let (hx, hy) = (p.lx / m1 as f64, p.ly / m2 as f64);
    let (lx, ly, dx2, dy2) = operators_2d(m1, m2, hx, hy);
    let lxly = &lx * &ly;
    let diff = &ly * &dx2 + &lx * &dy2;
    let w1 = midpoint_weights_direct(1.0 - p.alpha1, steps).unwrap();
    let w2 = midpoint_weights_direct(1.0 - p.alpha2, steps).unwrap();
    let c1 = tau * p.k1 * tau.powf(p.alpha1 - 1.0);
    let c2 = tau * p.k2 * tau.powf(p.alpha2 - 1.0);
    let nodes = (m1 + 1) * (m2 + 1);
    let sample = |t: f64, f: &dyn Fn(f64, f64, f64) -> f64, ring_only: bool| {
        let mut v = DVector::zeros(nodes);
        for j in 0..=m2 {
            for i in 0..=m1 {
                if !ring_only || is_ring(i, j, m1, m2) {
                    v[j * (m1 + 1) + i] = f(i as f64 * hx, j as f64 * hy, t);
                }
            }
        }
        v
    };
    let mut levels = vec![sample(0.0, p.boundary.as_ref(), true)];
    for k in 0..steps {
        let mut h1 = DVector::zeros(nodes);
        let mut h2 = DVector::zeros(nodes);
        for ell in 0..=k {
            h1 += w1[ell] * &levels[k - ell];
            h2 += w2[ell] * &levels[k - ell];
        }
        let f = sample((k as f64 + 0.5) * tau, p.source.as_ref(), false);
        let rhs = &lxly * &levels[k] + c1 * (&diff * h1) - c2 * (&lxly * h2) + tau * (&lxly * f);
        let ring = sample((k + 1) as f64 * tau, p.boundary.as_ref(), true);
        let next = dense_compact_solve_2d(m1, m2, rhs.as_slice(), ring.as_slice());
        levels.push(DVector::from_vec(next));
    }
    levels
        .into_iter()
        .map(|v| v.iter().copied().collect())
        .collect()
}

/// Largest absolute entrywise difference between two level lists.
pub fn max_level_difference(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| {
            assert_eq!(x.len(), y.len());
            x.iter().zip(y).map(|(p, q)| (p - q).abs())
        })
        .fold(0.0, f64::max)
}
