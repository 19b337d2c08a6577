use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Default caps on the ring size and particle count.
pub const MAX_L: usize = 512;
pub const MAX_N: usize = 64;

/// A ring of `L` sites per period carrying `N` particles per period.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingGeometry {
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "N")]
    pub n: usize,
}

impl RingGeometry {
    pub fn new(l: usize, n: usize) -> Result<Self> {
        if n == 0 || n >= l {
            return invalid(format!("need 0 < N < L, got L={l}, N={n}"));
        }
        if l > MAX_L || n > MAX_N {
            return invalid(format!("L={l}, N={n} exceeds the caps L≤{MAX_L}, N≤{MAX_N}"));
        }
        Ok(Self { l, n })
    }

    /// Density `ρ = N/L`.
    pub fn rho(&self) -> f64 {
        self.n as f64 / self.l as f64
    }

    /// `r₀ = ρ^ρ (1−ρ)^{1−ρ}`, the modulus at which the root curves touch.
    pub fn r0(&self) -> f64 {
        let rho = self.rho();
        rho.powf(rho) * (1.0 - rho).powf(1.0 - rho)
    }

    /// `ln(r₀^L)`, the log-modulus of the critical level `z^L`.
    pub fn log_r0_level(&self) -> f64 {
        let (n, m) = (self.n as f64, (self.l - self.n) as f64);
        let l = self.l as f64;
        n * (n / l).ln() + m * (m / l).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_filling() {
        let g = RingGeometry::new(6, 3).unwrap();
        assert_eq!(g.rho(), 0.5);
        assert!((g.r0() - 0.5).abs() < 1e-15);
        assert!((g.log_r0_level() - 6.0 * 0.5f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn rejects_degenerate() {
        assert!(RingGeometry::new(4, 0).is_err());
        assert!(RingGeometry::new(4, 4).is_err());
        assert!(RingGeometry::new(1024, 3).is_err());
    }
}
