//! Kernels and the function `C(z)` of the limit formula.
//!
//! Every point `ζ` of level `i` carries a row weight
//! `f_i(ζ) e^{2h(ζ,z_i) − h(ζ,z_rn)} / ζ` and a column weight
//! `e^{−h(ζ,z_cn)} (1 − z_cn/z_i)`, where `rn` and `cn` are the row and column
//! neighbours of [`PointTag`] and `z_0 = z_{m+1} = 0` (so that `h = 0` and the
//! last factor is `1` there). The block layout is shared with the finite
//! kernels through [`KernelPair`].

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Arc;

use dashmap::DashMap;
use num_complex::Complex64;

use super::roots::{limit_roots, LimitRootSet};
use super::{LimitOptions, ScaledQuery};
use crate::error::{invalid, Error, Result};
use crate::kernel::{KernelPair, PointTag, Side, WeightedPoint};
use crate::specfun::{a1, a2, bfun, HSeries};

/// Kernel entries below this modulus (after balancing) are stored as zeros.
pub const LIMIT_ENTRY_FLOOR: f64 = 1e-18;

/// Largest `|z|` accepted by the limit evaluators.
pub const MAX_LIMIT_RADIUS: f64 = 0.9;

/// A root with its cached `h` series and own-level weight.
struct LimitPoint {
    zeta: Complex64,
    side: Side,
    h: HSeries,
    /// `log f_i(ζ) − log ζ`.
    log_weight: Complex64,
}

/// Everything that depends on one level `i` and its value `z_i` only.
struct LevelData {
    z: Complex64,
    points: Vec<LimitPoint>,
    a1: Complex64,
    a2: Complex64,
    b_diag: Complex64,
    k_max: usize,
    capped: bool,
}

/// Shared evaluation state for one query: per-level root lattices and
/// `h` series are computed once per `(level, z)` and reused across
/// quadrature nodes and threads.
pub struct LimitEvaluator {
    q: ScaledQuery,
    opts: LimitOptions,
    zmax: f64,
    levels: DashMap<(usize, u64, u64), Arc<LevelData>>,
    k_max: AtomicUsize,
    capped: AtomicBool,
}

impl LimitEvaluator {
    /// An evaluator accepting `|z_ℓ| ≤ zmax` (at most [`MAX_LIMIT_RADIUS`]).
    pub fn new(q: &ScaledQuery, opts: &LimitOptions, zmax: f64) -> Result<Self> {
        let q = ScaledQuery::new(q.points.clone())?;
        if !(zmax > 0.0 && zmax <= MAX_LIMIT_RADIUS) {
            return invalid(format!("limit radii must lie in (0, {MAX_LIMIT_RADIUS}], got {zmax}"));
        }
        Ok(Self {
            q,
            opts: opts.clone(),
            // quadrature nodes r·e^{iθ} may exceed r by an ulp
            zmax: zmax * (1.0 + 1e-12),
            levels: DashMap::new(),
            k_max: AtomicUsize::new(0),
            capped: AtomicBool::new(false),
        })
    }

    pub fn query(&self) -> &ScaledQuery {
        &self.q
    }

    /// Largest branch index used so far.
    pub fn k_max(&self) -> usize {
        self.k_max.load(Ordering::Relaxed)
    }

    /// Whether any lattice hit the branch cap.
    pub fn capped(&self) -> bool {
        self.capped.load(Ordering::Relaxed)
    }

    fn level(&self, i: usize, z: Complex64) -> Result<Arc<LevelData>> {
        let key = (i, z.re.to_bits(), z.im.to_bits());
        if let Some(d) = self.levels.get(&key) {
            return Ok(d.clone());
        }
        if !(z.norm() > 0.0 && z.norm() <= self.zmax) {
            return invalid(format!("|z_{i}| = {} outside (0, {}]", z.norm(), self.zmax));
        }
        let decay = self.q.decay(i);
        let rs: LimitRootSet = limit_roots(z, &decay, &self.opts.truncation)?;
        let mut points = Vec::with_capacity(rs.left.len() + rs.right.len());
        for (side, roots) in [(Side::Left, &rs.left), (Side::Right, &rs.right)] {
            for &zeta in roots.iter() {
                points.push(LimitPoint { zeta, side, h: HSeries::new(zeta, self.zmax)?, log_weight: decay.log_f(zeta) - zeta.ln() });
            }
        }
        let k_max = rs.k_max_left.max(rs.k_max_right);
        self.k_max.fetch_max(k_max, Ordering::Relaxed);
        if rs.capped {
            self.capped.store(true, Ordering::Relaxed);
        }
        let data = LevelData { z, points, a1: a1(z)?, a2: a2(z)?, b_diag: bfun(z, z)?, k_max, capped: rs.capped };
        Ok(self.levels.entry(key).or_insert_with(|| Arc::new(data)).clone())
    }

    fn check_zs(&self, zs: &[Complex64]) -> Result<()> {
        if zs.len() != self.q.m() {
            return invalid(format!("{} contour variables for {} probes", zs.len(), self.q.m()));
        }
        Ok(())
    }

    fn levels_for(&self, zs: &[Complex64]) -> Result<Vec<Arc<LevelData>>> {
        self.check_zs(zs)?;
        zs.iter().enumerate().map(|(j, &z)| self.level(j + 1, z)).collect()
    }

    /// `C(z) = Π_ℓ z_ℓ/(z_ℓ − z_{ℓ+1}) · e^{x_ℓ(A1(z_ℓ)−A1(z_{ℓ+1})) + τ_ℓ(A2(z_ℓ)−A2(z_{ℓ+1})) + 2B(z_ℓ) − 2B(z_{ℓ+1},z_ℓ)}`
    /// with `z_{m+1} = 0`.
    pub fn c(&self, zs: &[Complex64]) -> Result<Complex64> {
        let lv = self.levels_for(zs)?;
        let m = zs.len();
        let zero = Complex64::new(0.0, 0.0);
        let mut ratio = Complex64::new(1.0, 0.0);
        let mut expo = zero;
        for l in 0..m {
            let p = self.q.points[l];
            let (zn, a1n, a2n, bn) = if l + 1 < m {
                (zs[l + 1], lv[l + 1].a1, lv[l + 1].a2, bfun(zs[l + 1], zs[l])?)
            } else {
                (zero, zero, zero, zero)
            };
            if zs[l] == zn {
                return Err(Error::InvalidInput(format!("C has a pole at z_{} = z_{}", l + 1, l + 2)));
            }
            ratio *= zs[l] / (zs[l] - zn);
            expo += (lv[l].a1 - a1n) * p.x + (lv[l].a2 - a2n) * p.tau + 2.0 * (lv[l].b_diag - bn);
        }
        Ok(ratio * expo.exp())
    }

    /// Weighted kernel points at `z`.
    pub fn points(&self, zs: &[Complex64]) -> Result<Vec<WeightedPoint>> {
        let lv = self.levels_for(zs)?;
        let m = zs.len();
        let z_at = |j: usize| if j >= 1 && j <= m { Some(zs[j - 1]) } else { None };
        let mut out = Vec::new();
        for (idx, data) in lv.iter().enumerate() {
            let level = idx + 1;
            for p in &data.points {
                let tag = PointTag { level, side: p.side };
                let h_at = |j: usize| z_at(j).map_or(Complex64::new(0.0, 0.0), |z| p.h.eval(z));
                let log_row = p.log_weight + 2.0 * h_at(level) - h_at(tag.row_neighbour());
                let q_factor = z_at(tag.col_neighbour()).map_or(Complex64::new(0.0, 0.0), |zc| (1.0 - zc / data.z).ln());
                let log_col = q_factor - h_at(tag.col_neighbour());
                out.push(WeightedPoint { w: p.zeta, tag, log_row, log_col });
            }
        }
        Ok(out)
    }

    pub fn kernels(&self, zs: &[Complex64]) -> Result<KernelPair> {
        let kp = KernelPair::assemble_with_floor(&self.points(zs)?, self.opts.kernel_floor);
        if !kp.is_finite() {
            return Err(Error::Overflow("non-finite limit kernel entry".into()));
        }
        Ok(kp)
    }

    /// `D(z) = det(I − K₁K₂)`.
    pub fn d(&self, zs: &[Complex64]) -> Result<Complex64> {
        self.kernels(zs)?.fredholm_det()
    }

    /// `C(z) D(z)`.
    pub fn integrand(&self, zs: &[Complex64]) -> Result<Complex64> {
        Ok(self.c(zs)? * self.d(zs)?)
    }

    /// Root lattice sizes `(k_max, capped)` at the levels of `z`.
    pub fn truncation_at(&self, zs: &[Complex64]) -> Result<Vec<(usize, bool)>> {
        Ok(self.levels_for(zs)?.iter().map(|d| (d.k_max, d.capped)).collect())
    }

    /// Roots and `h` series of level `i` at `z`, for the series evaluator.
    pub(crate) fn level_points(&self, i: usize, z: Complex64) -> Result<Vec<(Complex64, Side, Complex64)>> {
        let d = self.level(i, z)?;
        Ok(d.points.iter().map(|p| (p.zeta, p.side, p.log_weight)).collect())
    }

    /// `h(ζ, z)` through the cached series of a root of level `i` at `z_i`.
    pub(crate) fn h_of_root(&self, i: usize, zi: Complex64, index: usize, z: Complex64) -> Result<Complex64> {
        Ok(self.level(i, zi)?.points[index].h.eval(z))
    }
}

fn zmax_of(zs: &[Complex64]) -> f64 {
    zs.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `C(z)` for a query.
pub fn eval_c_limit(zs: &[Complex64], q: &ScaledQuery) -> Result<Complex64> {
    LimitEvaluator::new(q, &LimitOptions::default(), zmax_of(zs))?.c(zs)
}

/// The kernel pair at `z`.
pub fn build_limit_kernels(zs: &[Complex64], q: &ScaledQuery, opts: &LimitOptions) -> Result<KernelPair> {
    LimitEvaluator::new(q, opts, zmax_of(zs))?.kernels(zs)
}

/// `D(z) = det(I − K₁K₂)` at `z`.
pub fn eval_d_limit(zs: &[Complex64], q: &ScaledQuery, opts: &LimitOptions) -> Result<Complex64> {
    LimitEvaluator::new(q, opts, zmax_of(zs))?.d(zs)
}

#[cfg(test)]
mod tests {
    use super::super::ScaledPoint;
    use super::*;

    fn q2() -> ScaledQuery {
        ScaledQuery::new(vec![ScaledPoint { gamma: 0.1, tau: 1.0, x: -0.5 }, ScaledPoint { gamma: -0.2, tau: 2.0, x: 0.4 }]).unwrap()
    }

    #[test]
    fn c_single_level_shape() {
        let q = ScaledQuery::single(0.3, 1.2, -0.7).unwrap();
        let z = Complex64::from_polar(0.6, 0.9);
        let expect = (a1(z).unwrap() * -0.7 + a2(z).unwrap() * 1.2 + 2.0 * bfun(z, z).unwrap()).exp();
        assert!((eval_c_limit(&[z], &q).unwrap() - expect).norm() < 1e-14 * expect.norm());
    }

    #[test]
    fn c_rejects_coincident_levels() {
        let z = Complex64::new(0.5, 0.0);
        assert!(eval_c_limit(&[z, z], &q2()).is_err());
    }

    #[test]
    fn block_sparsity_m5() {
        let pts: Vec<ScaledPoint> = (1..=5).map(|j| ScaledPoint { gamma: 0.0, tau: j as f64, x: 0.0 }).collect();
        let q = ScaledQuery::new(pts).unwrap();
        let zs: Vec<Complex64> = (0..5).map(|j| Complex64::from_polar(0.8 * 0.7f64.powi(j), 0.3 * j as f64)).collect();
        let kp = build_limit_kernels(&zs, &q, &LimitOptions { kernel_floor: 0.0, ..Default::default() }).unwrap();
        let allowed1 = |i: usize, j: usize| if i % 2 == 1 { j == i || j == i + 1 } else { j == i || j == i - 1 };
        let allowed2 = |i: usize, j: usize| if i % 2 == 1 { j == i || j == i - 1 } else { j == i || j == i + 1 };
        for (a, ta) in kp.s1.iter().enumerate() {
            for (b, tb) in kp.s2.iter().enumerate() {
                assert_eq!(kp.k1[(a, b)] != Complex64::new(0.0, 0.0), allowed1(ta.level, tb.level));
                assert_eq!(kp.k2[(b, a)] != Complex64::new(0.0, 0.0), allowed2(tb.level, ta.level));
            }
        }
        let s1_ok = kp.s1.iter().all(|t| (t.side == Side::Left) == (t.level % 2 == 1));
        assert!(s1_ok);
    }

    #[test]
    fn sylvester() {
        let zs = [Complex64::from_polar(0.8, 0.4), Complex64::from_polar(0.45, -1.1)];
        let kp = build_limit_kernels(&zs, &q2(), &LimitOptions::default()).unwrap();
        let (d1, d2) = (kp.det_k1k2().unwrap(), kp.det_k2k1().unwrap());
        assert!((d1 - d2).norm() < 1e-12 * d1.norm().max(1.0));
    }
}
