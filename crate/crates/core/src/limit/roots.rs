//! Root lattices `{ζ : e^{−ζ²/2} = z}` of the limit kernels.
//!
//! For `0 < |z| < 1` the roots are `ζ = ±√(−2 Log z − 4πik)`, `k ∈ ℤ`. The
//! radicand has real part `−2 ln|z| > 0`, so the principal root lies in the
//! right half-plane and its negative in the left one; each branch `k`
//! contributes one root to each component.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Increments of the query between consecutive levels, driving `f_ℓ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelDecay {
    pub dtau: f64,
    pub dgamma: f64,
    pub dx: f64,
}

impl LevelDecay {
    /// `log f_ℓ(ζ)`: `−Δτζ³/3 + Δγζ²/2 + Δxζ` on the left, negated on the right.
    pub fn log_f(&self, zeta: Complex64) -> Complex64 {
        let e = -zeta * zeta * zeta * (self.dtau / 3.0) + zeta * zeta * (self.dgamma / 2.0) + zeta * self.dx;
        if zeta.re < 0.0 {
            e
        } else {
            -e
        }
    }
}

/// Branch truncation of the root lattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationConfig {
    /// Stop once `|f_ℓ(ζ)|` has fallen below this value and is decreasing.
    pub f_threshold: f64,
    /// Hard cap on `|k|`; reaching it marks the set as truncated early.
    pub max_branch: usize,
    /// Keeps `(k + 1)·multiplier − 1` branches where `k` is the cutoff found
    /// by the threshold rule; values above 1 probe truncation stability.
    pub branch_multiplier: usize,
}

impl Default for TruncationConfig {
    fn default() -> Self {
        Self { f_threshold: 1e-16, max_branch: 4000, branch_multiplier: 1 }
    }
}

/// Truncated roots of `e^{−ζ²/2} = z`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitRootSet {
    pub z: Complex64,
    /// Roots with `Re ζ < 0`.
    pub left: Vec<Complex64>,
    /// Roots with `Re ζ > 0`.
    pub right: Vec<Complex64>,
    /// Largest `|k|` kept on each side.
    pub k_max_left: usize,
    pub k_max_right: usize,
    /// Largest `|ζ|` kept.
    pub radius: f64,
    /// Whether `max_branch` stopped the enumeration before the threshold.
    pub capped: bool,
}

/// `√(−2 Log z − 4πik)`, the right-half-plane root of branch `k`.
pub fn branch_root(z: Complex64, k: i64) -> Complex64 {
    let w = -2.0 * z.ln() - Complex64::new(0.0, 4.0 * std::f64::consts::PI * k as f64);
    w.sqrt()
}

fn check_z(z: Complex64) -> Result<()> {
    let r = z.norm();
    if !(r > 0.0 && r <= 0.9) {
        return invalid(format!("limit roots need 0 < |z| <= 0.9, got {r}"));
    }
    Ok(())
}

/// All roots of branches `|k| ≤ k_max`, in the order `k = 0, 1, −1, 2, −2, …`.
pub fn limit_roots_branches(z: Complex64, k_max: usize) -> Result<LimitRootSet> {
    check_z(z)?;
    let mut right = Vec::with_capacity(2 * k_max + 1);
    for k in branch_order(k_max) {
        right.push(branch_root(z, k));
    }
    let left: Vec<Complex64> = right.iter().map(|&r| -r).collect();
    let radius = right.iter().map(|r| r.norm()).fold(0.0, f64::max);
    Ok(LimitRootSet { z, left, right, k_max_left: k_max, k_max_right: k_max, radius, capped: false })
}

fn branch_order(k_max: usize) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=k_max as i64).flat_map(|k| [k, -k]))
}

/// Branch count on one side: enumerate `n = 0, 1, …` (branches `±n`) until
/// every root of branch `±n` has `|f| < threshold` with `|f|` smaller than at
/// `n − 1`; that last branch is dropped.
fn side_cutoff(z: Complex64, decay: &LevelDecay, cfg: &TruncationConfig, sign: f64) -> (usize, bool) {
    let weight = |k: i64| (decay.log_f(branch_root(z, k) * sign)).re;
    let log_thr = cfg.f_threshold.ln();
    let mut prev = weight(0);
    for n in 1..=cfg.max_branch as i64 {
        let cur = weight(n).max(weight(-n));
        if cur < log_thr && cur < prev {
            return ((n - 1) as usize, false);
        }
        prev = cur;
    }
    (cfg.max_branch, true)
}

/// Roots for level `z` truncated by the decay of `f_ℓ`.
pub fn limit_roots(z: Complex64, decay: &LevelDecay, cfg: &TruncationConfig) -> Result<LimitRootSet> {
    check_z(z)?;
    if !(cfg.f_threshold > 0.0 && cfg.f_threshold < 1.0) {
        return invalid("f_threshold must lie in (0, 1)");
    }
    if cfg.branch_multiplier == 0 {
        return invalid("branch_multiplier must be at least 1");
    }
    let widen = |k: usize| (k + 1) * cfg.branch_multiplier - 1;
    let (kl, cl) = side_cutoff(z, decay, cfg, -1.0);
    let (kr, cr) = side_cutoff(z, decay, cfg, 1.0);
    let (kl, kr) = (widen(kl), widen(kr));
    let left: Vec<Complex64> = branch_order(kl).map(|k| -branch_root(z, k)).collect();
    let right: Vec<Complex64> = branch_order(kr).map(|k| branch_root(z, k)).collect();
    let radius = left.iter().chain(&right).map(|r| r.norm()).fold(0.0, f64::max);
    Ok(LimitRootSet { z, left, right, k_max_left: kl, k_max_right: kr, radius, capped: cl || cr })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principal_real_pair() {
        let rs = limit_roots_branches(Complex64::new(0.4, 0.0), 0).unwrap();
        let expect = (-2.0 * 0.4f64.ln()).sqrt();
        assert!((rs.right[0] - expect).norm() < 1e-15);
        assert!((rs.left[0] + expect).norm() < 1e-15);
        assert!((expect - 1.353_728_2).abs() < 1e-6);
    }

    #[test]
    fn residual_and_sides() {
        let z = Complex64::from_polar(0.73, 2.1);
        let rs = limit_roots_branches(z, 40).unwrap();
        for &r in rs.left.iter().chain(&rs.right) {
            assert!(((-r * r / 2.0).exp() - z).norm() < 1e-13 * z.norm().max(1.0));
        }
        assert!(rs.left.iter().all(|r| r.re < 0.0) && rs.right.iter().all(|r| r.re > 0.0));
    }

    #[test]
    fn asymptotic_rays() {
        let z = Complex64::from_polar(0.5, -0.4);
        for k in [50i64, -50] {
            let r = branch_root(z, k);
            let target = if k > 0 { -std::f64::consts::FRAC_PI_4 } else { std::f64::consts::FRAC_PI_4 };
            assert!((r.arg() - target).abs() < 0.02, "k={k}: arg {}", r.arg());
            assert!(((-r).arg().abs() - 3.0 * std::f64::consts::FRAC_PI_4).abs() < 0.02);
        }
    }

    #[test]
    fn truncation_follows_decay() {
        let z = Complex64::from_polar(0.6, 0.3);
        let d = LevelDecay { dtau: 0.5, dgamma: 0.2, dx: -1.0 };
        let cfg = TruncationConfig::default();
        let rs = limit_roots(z, &d, &cfg).unwrap();
        assert!(!rs.capped);
        for k in [rs.k_max_left as i64 + 1, -(rs.k_max_left as i64) - 1] {
            assert!(d.log_f(-branch_root(z, k)).re.exp() < cfg.f_threshold);
        }
        for k in [rs.k_max_right as i64 + 1, -(rs.k_max_right as i64) - 1] {
            assert!(d.log_f(branch_root(z, k)).re.exp() < cfg.f_threshold);
        }
    }
}
