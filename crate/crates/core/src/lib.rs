//! Multi-point distributions of the totally asymmetric simple exclusion
//! process on a ring.
//!
//! The crate evaluates finite-time joint distributions of tagged particle
//! positions from contour-integral and Fredholm-determinant formulas, the
//! large-time limit distribution of the scaled height function, and ships
//! independent oracles (exact uniformization, Monte Carlo) to check them.
//!
//! Layout:
//! - [`numerics`]: complex matrices, determinants, nested contour quadrature.
//! - [`bethe`]: ring geometry and the Bethe root sets of `w^N (w+1)^(L-N) = z^L`.
//! - [`specfun`]: polylogarithms, `erfcx`, and the auxiliary functions of the
//!   limit formula.
//! - [`finite`]: finite-time formulas for step and general initial conditions.
//! - [`limit`]: the limiting multi-point distribution.
//! - [`sim`]: simulation and exact small-system oracles.
//! - [`verify`]: verification suites shared by the CLI and the test targets.

// NaN-rejecting guards are written as negated comparisons on purpose, and
// index loops mirror the matrix formulas they implement.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bethe;
pub mod error;
pub mod finite;
pub mod kernel;
pub mod limit;
pub mod numerics;
pub mod sim;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Library version embedded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
