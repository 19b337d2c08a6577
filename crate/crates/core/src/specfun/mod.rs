//! Special functions of the limit formula: polylogarithms of half-integer
//! order, the scaled complementary error function, `A1`, `A2`, `B` and `h`.

mod erfcx;
mod hfun;
mod polylog;

pub use erfcx::{erfcx, faddeeva_w};
pub use hfun::{a1, a2, bfun, hfun, hfun_quadrature, HSeries};
pub use polylog::{polylog, PolyOrder, POLYLOG_MAX_RADIUS};
