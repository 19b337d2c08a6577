use num_complex::Complex64;

use super::{BetheRootSet, RingGeometry};
use crate::error::{invalid, Result};
use crate::numerics::{pairwise_product, pairwise_sum};

/// `l_z(w) = Π_{u∈L_z}(w−u) / (w+1)^{L−N}`, one normalized factor per root.
pub fn eval_lz(rs: &BetheRootSet, w: Complex64) -> Result<Complex64> {
    if w == Complex64::new(-1.0, 0.0) {
        return invalid("l_z(w) is singular at w = -1");
    }
    let f: Vec<Complex64> = rs.left.iter().map(|&u| (w - u) / (w + 1.0)).collect();
    Ok(pairwise_product(&f))
}

/// `r_z(w) = Π_{v∈R_z}(w−v) / w^N`.
pub fn eval_rz(rs: &BetheRootSet, w: Complex64) -> Result<Complex64> {
    if w == Complex64::new(0.0, 0.0) {
        return invalid("r_z(w) is singular at w = 0");
    }
    let f: Vec<Complex64> = rs.right.iter().map(|&v| (w - v) / w).collect();
    Ok(pairwise_product(&f))
}

/// `H_z(w)`: `l_z(w)` right of `Re w = −ρ`, `r_z(w)` left of it.
pub fn eval_hz(rs: &BetheRootSet, w: Complex64) -> Result<Complex64> {
    let rho = rs.geom.rho();
    if w.re > -rho {
        eval_lz(rs, w)
    } else if w.re < -rho {
        eval_rz(rs, w)
    } else {
        invalid("H_z(w) is undefined on the line Re w = -rho")
    }
}

/// `Σ log((w−u)/(w+1))`; `exp` of it is `l_z(w)`.
pub fn log_lz(rs: &BetheRootSet, w: Complex64) -> Complex64 {
    let f: Vec<Complex64> = rs.left.iter().map(|&u| ((w - u) / (w + 1.0)).ln()).collect();
    pairwise_sum(&f)
}

/// `Σ log((w−v)/w)`; `exp` of it is `r_z(w)`.
pub fn log_rz(rs: &BetheRootSet, w: Complex64) -> Complex64 {
    let f: Vec<Complex64> = rs.right.iter().map(|&v| ((w - v) / w).ln()).collect();
    pairwise_sum(&f)
}

/// Logarithm of `H_z(w)`; `None` stands for `z = 0`, where `H = 1`.
pub fn log_hz(rs: Option<&BetheRootSet>, w: Complex64, rho: f64) -> Complex64 {
    match rs {
        None => Complex64::new(0.0, 0.0),
        Some(rs) if w.re > -rho => log_lz(rs, w),
        Some(rs) => log_rz(rs, w),
    }
}

/// `J(w) = w(w+1) / (L(w+ρ))`.
pub fn jfun(geom: RingGeometry, w: Complex64) -> Complex64 {
    w * (w + 1.0) / (geom.l as f64 * (w + geom.rho()))
}
