use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::RingGeometry;
use crate::error::{invalid, Error, Result};

/// Solver settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSolverConfig {
    /// Initial number of continuation steps per root.
    pub steps: usize,
    /// Accepted relative residual `|q_z(w)|/|z|^L`, raised per root to the
    /// floor set by the spacing of doubles near `w`.
    pub tol: f64,
}

impl Default for RootSolverConfig {
    fn default() -> Self {
        Self { steps: 24, tol: 1e-12 }
    }
}

/// The `L` roots of `w^N (w+1)^{L−N} = z^L` split by `Re w` against `−ρ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetheRootSet {
    pub geom: RingGeometry,
    /// A representative `z` (principal `L`-th root of the level when the set
    /// was built from the level).
    pub z: Complex64,
    /// The level `z^L`.
    pub level: Complex64,
    /// `L − N` roots with `Re w < −ρ`, ordered by `arg(w + ρ)`.
    pub left: Vec<Complex64>,
    /// `N` roots with `Re w > −ρ`, ordered by `arg(w + ρ)`.
    pub right: Vec<Complex64>,
    /// `max |q_z(w)| / |z|^L` over all roots.
    pub residual: f64,
}

impl BetheRootSet {
    pub fn all(&self) -> impl Iterator<Item = &Complex64> {
        self.left.iter().chain(self.right.iter())
    }
}

/// Roots for a given `z` with `0 < |z| < r₀`.
pub fn solve_bethe_roots(geom: RingGeometry, z: Complex64, cfg: &RootSolverConfig) -> Result<BetheRootSet> {
    if !(z.norm() > 0.0 && z.norm() < geom.r0()) {
        return invalid(format!("need 0 < |z| < r0 = {}, got |z| = {}", geom.r0(), z.norm()));
    }
    let level = (z.ln() * geom.l as f64).exp();
    let mut rs = solve_bethe_level(geom, level, cfg)?;
    rs.z = z;
    Ok(rs)
}

/// Roots for a given level `Z = z^L` with `0 < |Z| < r₀^L`.
///
/// Each component is parametrized by a conformal map that is injective on
/// the interior of its curve: `w (w+1)^{(L−N)/N}` on the right and
/// `(w+1) (−w)^{N/(L−N)}` on the left (principal branches). Every root is
/// the preimage of one `N`-th (resp. `(L−N)`-th) root of the level and is
/// tracked by Newton continuation from the cluster at `0` (resp. `−1`),
/// then polished on the polynomial itself.
pub fn solve_bethe_level(geom: RingGeometry, level: Complex64, cfg: &RootSolverConfig) -> Result<BetheRootSet> {
    let log_mod = level.norm().ln();
    if !(level.norm() > 0.0 && log_mod < geom.log_r0_level()) {
        return invalid(format!(
            "need 0 < |z^L| < r0^L; got log|z^L| = {log_mod}, log r0^L = {}",
            geom.log_r0_level()
        ));
    }
    let (l, n) = (geom.l, geom.n);
    let m = l - n;
    let rho = geom.rho();
    let arg = level.arg();

    let beta = m as f64 / n as f64;
    let right_map = |w: Complex64| {
        let p = ((w + 1.0).ln() * (beta - 1.0)).exp();
        (w * (w + 1.0) * p, p * (w + 1.0 + beta * w))
    };
    let mut right = Vec::with_capacity(n);
    for j in 0..n {
        let target = Complex64::from_polar((log_mod / n as f64).exp(), (arg + 2.0 * PI * j as f64) / n as f64);
        right.push(track(right_map, target, Complex64::new(0.0, 0.0), cfg.steps)?);
    }

    let alpha = n as f64 / m as f64;
    let left_map = |w: Complex64| {
        let p = ((-w).ln() * (alpha - 1.0)).exp();
        (-(w + 1.0) * w * p, p * (-w - alpha * (w + 1.0)))
    };
    let mut left = Vec::with_capacity(m);
    for j in 0..m {
        let phase = (arg + PI * n as f64 + 2.0 * PI * j as f64) / m as f64;
        let target = Complex64::from_polar((log_mod / m as f64).exp(), phase);
        left.push(track(left_map, target, Complex64::new(-1.0, 0.0), cfg.steps)?);
    }

    let log_level = level.ln();
    let mut residual: f64 = 0.0;
    let mut excess: f64 = 0.0;
    for w in left.iter_mut().chain(right.iter_mut()) {
        *w = polish(*w, n, m, log_level);
        let r = relative_residual(*w, n, m, log_level);
        residual = residual.max(r);
        excess = excess.max(r / cfg.tol.max(ulp_residual(*w, n, m)));
    }
    if left.iter().any(|w| !(w.re < -rho)) || right.iter().any(|w| !(w.re > -rho)) {
        return Err(Error::NonConvergence("a tracked root left its component".into()));
    }
    if excess > 1.0 {
        return Err(Error::NonConvergence(format!("root residual {residual:e} above {:e} and the rounding floor", cfg.tol)));
    }
    let key = |w: &Complex64| (w + rho).arg();
    left.sort_by(|a, b| key(a).total_cmp(&key(b)));
    right.sort_by(|a, b| key(a).total_cmp(&key(b)));
    check_distinct(&left)?;
    check_distinct(&right)?;
    let z = (log_level / l as f64).exp();
    Ok(BetheRootSet { geom, z, level, left, right, residual })
}

/// Follow `map(w) = s·target` from `s≈0` (where `w ≈ center + s·target`) to
/// `s = 1`. `map` returns the value and the derivative.
fn track<F>(map: F, target: Complex64, center: Complex64, steps: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    let s0 = 1e-4;
    let mut s = s0;
    let mut w = center + target * s0;
    w = newton(&map, w, target * s0).ok_or_else(|| Error::NonConvergence("continuation start failed".into()))?;
    let mut ds = (1.0 - s0) / steps.max(1) as f64;
    while s < 1.0 {
        let s_next = (s + ds).min(1.0);
        let (_, d) = map(w);
        let guess = w + target * (s_next - s) / d;
        // accept when the corrector stays small against the predictor step
        match newton(&map, guess, target * s_next) {
            Some(next) if (next - guess).norm() <= 0.3 * (guess - w).norm() + 1e-14 * w.norm() => {
                w = next;
                s = s_next;
                ds *= 1.5;
            }
            _ => {
                ds *= 0.25;
                if ds < 1e-10 {
                    return Err(Error::NonConvergence("continuation step underflow".into()));
                }
            }
        }
    }
    Ok(w)
}

fn newton<F>(map: &F, mut w: Complex64, target: Complex64) -> Option<Complex64>
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    for _ in 0..30 {
        let (v, d) = map(w);
        let step = (v - target) / d;
        if !(step.re.is_finite() && step.im.is_finite()) {
            return None;
        }
        w -= step;
        if step.norm() <= 1e-15 * w.norm().max(1e-300) {
            return Some(w);
        }
    }
    let (v, _) = map(w);
    ((v - target).norm() <= 1e-12 * target.norm()).then_some(w)
}

/// `w^N (w+1)^M / z^L − 1` evaluated through logarithms.
fn ratio_minus_one(w: Complex64, n: usize, m: usize, log_level: Complex64) -> Complex64 {
    (w.ln() * n as f64 + (w + 1.0).ln() * m as f64 - log_level).exp() - 1.0
}

fn relative_residual(w: Complex64, n: usize, m: usize, log_level: Complex64) -> f64 {
    ratio_minus_one(w, n, m, log_level).norm()
}

/// Relative residual produced by perturbing `w` by a few ulps. Roots close
/// to `0` or `−1` cannot be stored more precisely than this.
fn ulp_residual(w: Complex64, n: usize, m: usize) -> f64 {
    4.0 * f64::EPSILON * w.norm() * (n as f64 / w.norm() + m as f64 / (w + 1.0).norm())
}

/// Newton steps on `q_z` in the scale-free form `(1 − z^L/P(w)) / (N/w + M/(w+1))`.
fn polish(mut w: Complex64, n: usize, m: usize, log_level: Complex64) -> Complex64 {
    for _ in 0..4 {
        let inv_ratio = (log_level - w.ln() * n as f64 - (w + 1.0).ln() * m as f64).exp();
        let step = (1.0 - inv_ratio) / (n as f64 / w + m as f64 / (w + 1.0));
        if !(step.re.is_finite() && step.im.is_finite()) {
            break;
        }
        w -= step;
        if step.norm() < 1e-17 * w.norm().max(1e-300) {
            break;
        }
    }
    w
}

fn check_distinct(ws: &[Complex64]) -> Result<()> {
    for i in 0..ws.len() {
        for j in 0..i {
            if (ws[i] - ws[j]).norm() <= 1e-12 * (1.0 + ws[i].norm()) {
                return Err(Error::NonConvergence("two tracked roots coincide".into()));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_case() {
        let g = RingGeometry::new(2, 1).unwrap();
        let z = Complex64::new(0.15, 0.0);
        let rs = solve_bethe_roots(g, z, &RootSolverConfig::default()).unwrap();
        let disc = (1.0f64 + 4.0 * 0.0225).sqrt();
        assert!((rs.left[0].re - (-1.0 - disc) / 2.0).abs() < 1e-14);
        assert!((rs.right[0].re - (-1.0 + disc) / 2.0).abs() < 1e-14);
        assert!((rs.right[0].re - 0.0220).abs() < 1e-4);
    }

    #[test]
    fn refuses_outside_disk() {
        let g = RingGeometry::new(6, 3).unwrap();
        assert!(solve_bethe_roots(g, Complex64::new(0.5, 0.0), &RootSolverConfig::default()).is_err());
        assert!(solve_bethe_roots(g, Complex64::new(0.0, 0.0), &RootSolverConfig::default()).is_err());
    }

    #[test]
    fn near_critical_level() {
        let g = RingGeometry::new(10, 4).unwrap();
        let z = Complex64::from_polar(0.999 * g.r0(), 0.3);
        let rs = solve_bethe_roots(g, z, &RootSolverConfig::default()).unwrap();
        assert_eq!((rs.left.len(), rs.right.len()), (6, 4));
    }
}
