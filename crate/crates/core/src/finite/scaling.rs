//! Map from the scaled space-time point `(γ, τ, x)` to a particle query.
//!
//! The event `{(h(ℓ,t) − centering)/(−2√(ρ(1−ρ)) L^{1/2}) ≤ x}` equals
//! `{h(ℓ,t) ≥ b}` with `b = 2ρ(1−ρ)t + (1−2ρ)ℓ − 2x√(ρ(1−ρ)) L^{1/2}`.
//! Heights at `ℓ` share the parity of `ℓ`, so the event is exactly
//! `{h ≥ b*}` where `b*` is the smallest integer `≥ b` with `b* ≡ ℓ (mod 2)`,
//! and then `{x_k(t) ≥ ℓ+1}` with `k = N − (b*−ℓ)/2 + 1`.

use serde::{Deserialize, Serialize};

use super::query::translate_query;
use crate::bethe::RingGeometry;
use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledProbe {
    pub t: f64,
    pub ell: i64,
    /// Real threshold before parity rounding.
    pub b_real: f64,
    pub b: i64,
    /// Particle index before translation into `1..=N`.
    pub k_raw: i64,
    pub k: i64,
    pub a: i64,
}

pub fn scale_parameters(geom: RingGeometry, gamma: f64, tau: f64, x: f64) -> Result<ScaledProbe> {
    if !(0.0..=1.0).contains(&gamma) {
        return invalid("gamma must lie in [0, 1]");
    }
    if !(tau > 0.0 && tau.is_finite()) || !x.is_finite() {
        return invalid("tau must be positive and x finite");
    }
    let rho = geom.rho();
    let l = geom.l as f64;
    let s = (rho * (1.0 - rho)).sqrt();
    let t = tau * l.powf(1.5) / s;
    let ell = ((1.0 - 2.0 * rho) * t + gamma * l).round() as i64;
    let b_real = 2.0 * rho * (1.0 - rho) * t + (1.0 - 2.0 * rho) * ell as f64 - 2.0 * x * s * l.sqrt();
    let mut b = b_real.ceil() as i64;
    if (b - ell).rem_euclid(2) != 0 {
        b += 1;
    }
    let k_raw = geom.n as i64 - (b - ell) / 2 + 1;
    let (k, a) = translate_query(geom, k_raw, ell + 1);
    Ok(ScaledProbe { t, ell, b_real, b, k_raw, k, a })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_filling_has_no_drift() {
        let g = RingGeometry::new(100, 50).unwrap();
        let p = scale_parameters(g, 0.0, 1.0, 0.0).unwrap();
        assert!((p.t - 2000.0).abs() < 1e-9);
        assert_eq!(p.ell, 0);
        assert!((p.b_real - 1000.0).abs() < 1e-9);
        assert_eq!((p.b, p.k_raw), (1000, -449));
        // nine shifts by N bring k into range, each adding L to the threshold
        assert_eq!((p.k, p.a), (1, 901));
    }

    #[test]
    fn parity_and_minimality() {
        let g = RingGeometry::new(37, 11).unwrap();
        for &(gamma, tau, x) in &[(0.3, 0.7, -1.2), (0.9, 1.4, 0.4), (0.0, 0.2, 2.5)] {
            let p = scale_parameters(g, gamma, tau, x).unwrap();
            assert_eq!((p.b - p.ell).rem_euclid(2), 0);
            assert!(p.b as f64 >= p.b_real && (p.b as f64) < p.b_real + 2.0);
            assert!((1..=11).contains(&p.k));
        }
    }
}
