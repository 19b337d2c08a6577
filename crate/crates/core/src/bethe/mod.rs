//! Ring geometry and Bethe root sets.
//!
//! For `0 < |z| < r₀` the `L` roots of `q_z(w) = w^N (w+1)^{L−N} − z^L` lie on
//! two closed curves separated by the line `Re w = −ρ`: `L−N` roots on the
//! left curve around `−1` and `N` on the right curve around `0`.
//!
//! Everything downstream depends on `z` only through `z^L`, so the solver
//! takes that value (the *level*) as its primary input.

mod cache;
mod geometry;
mod products;
mod roots;

pub use cache::RootCache;
pub use geometry::RingGeometry;
pub use products::{eval_hz, eval_lz, eval_rz, jfun, log_hz, log_lz, log_rz};
pub use roots::{solve_bethe_level, solve_bethe_roots, BetheRootSet, RootSolverConfig};
