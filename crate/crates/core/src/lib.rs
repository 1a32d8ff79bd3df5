//! Second-order midpoint discretization of the Riemann–Liouville derivative
//! and compact finite-difference solvers for the 1D and 2D time-fractional
//! Cable equations.
//!
//! - [`weights`]: quadrature weights from the generating function, by
//!   recurrence and by direct convolution.
//! - [`rl`]: the discrete derivative on sampled histories, a first-order
//!   Grünwald–Letnikov oracle and exact derivatives of monomials.
//! - [`compact1d`]: second differences, the compact operator and its solver.
//! - [`solver1d`], [`solver2d`]: time marching.
//! - [`expr`], [`config`], [`presets`], [`study`], [`emit`]: the harness
//!   behind the `fraccable` command-line tool.

pub mod compact1d;
pub mod config;
pub mod emit;
pub mod error;
pub mod expr;
pub mod presets;
pub mod report;
pub mod rl;
pub mod solver1d;
pub mod solver2d;
pub mod stability;
pub mod study;
pub mod tridiag;
pub mod weights;

pub use error::{Error, Result};
pub use report::{compute_orders, ErrorNorm, ErrorReport};
pub use weights::WeightSequence;
