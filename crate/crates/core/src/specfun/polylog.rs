use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Largest `|z|` accepted by the series evaluators.
pub const POLYLOG_MAX_RADIUS: f64 = 0.95;

/// Supported polylogarithm orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolyOrder {
    Half,
    ThreeHalves,
    FiveHalves,
}

impl PolyOrder {
    pub fn s(self) -> f64 {
        match self {
            PolyOrder::Half => 0.5,
            PolyOrder::ThreeHalves => 1.5,
            PolyOrder::FiveHalves => 2.5,
        }
    }

    /// `k^{-s}`
    fn weight(self, k: f64) -> f64 {
        let r = 1.0 / k.sqrt();
        match self {
            PolyOrder::Half => r,
            PolyOrder::ThreeHalves => r / k,
            PolyOrder::FiveHalves => r / (k * k),
        }
    }
}

/// `Li_s(z) = Σ_{k≥1} z^k / k^s` for `|z| ≤ 0.95`, summed until the term
/// bound `|z|^k/k^s` drops below `1e-17·(1−|z|)`, which dominates the tail.
pub fn polylog(s: PolyOrder, z: Complex64) -> Result<Complex64> {
    let r = z.norm();
    if !(r <= POLYLOG_MAX_RADIUS) {
        return invalid(format!("polylog argument |z|={r} exceeds {POLYLOG_MAX_RADIUS}"));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    if r == 0.0 {
        return Ok(sum);
    }
    let cut = 1e-17 * (1.0 - r);
    let mut zk = Complex64::new(1.0, 0.0);
    let mut rk = 1.0;
    let mut k = 1.0;
    loop {
        zk *= z;
        rk *= r;
        let w = s.weight(k);
        sum += zk * w;
        if rk * w < cut {
            break;
        }
        k += 1.0;
    }
    Ok(sum)
}
