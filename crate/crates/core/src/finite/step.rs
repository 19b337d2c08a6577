//! Step initial condition: `P(∩ x_{k_i}(t_i) ≥ a_i) = ∮…∮ C(z) D(z)` with
//! `D = det(I − K₁K₂)` on the Bethe roots of every `z_ℓ`.

use num_complex::Complex64;

use super::query::{DistributionResult, FiniteQuery, ProbePoint, Sign};
use super::FiniteOptions;
use crate::bethe::{jfun, log_hz, log_lz, log_rz, BetheRootSet, RingGeometry, RootCache};
use crate::error::{invalid, Error, Result};
use crate::kernel::{KernelPair, PointTag, Side, WeightedPoint};
use crate::numerics::{cross_log, nested_contour_integral, pairwise_sum, ContourScheme};

/// Logarithms of `w` and `w + 1` for a root, computed once.
#[derive(Clone, Copy)]
struct RootLogs {
    ln_w: Complex64,
    ln_w1: Complex64,
}

fn logs(w: Complex64) -> RootLogs {
    RootLogs { ln_w: w.ln(), ln_w1: (w + 1.0).ln() }
}

/// `log F_i(w)` with `F_i(w) = w^{−k_i+N+1} (w+1)^{−a_i+k_i−N} e^{t_i w}` and `F_0 = 1`.
fn log_big_f(n: usize, p: Option<&ProbePoint>, w: Complex64, lg: RootLogs) -> Complex64 {
    match p {
        None => Complex64::new(0.0, 0.0),
        Some(p) => {
            let n = n as i64;
            lg.ln_w * (-p.k + n + 1) as f64 + lg.ln_w1 * (-p.a + p.k - n) as f64 + w * p.t
        }
    }
}

/// `log f_i(w)`: `F_i/F_{i−1}` on the left component, `F_{i−1}/F_i` on the right.
pub(crate) fn log_small_f(geom: RingGeometry, q: &FiniteQuery, i: usize, w: Complex64, side: Side) -> Complex64 {
    let lg = logs(w);
    let cur = log_big_f(geom.n, Some(&q.points[i - 1]), w, lg);
    let prev = log_big_f(geom.n, if i >= 2 { Some(&q.points[i - 2]) } else { None }, w, lg);
    match side {
        Side::Left => cur - prev,
        Side::Right => prev - cur,
    }
}

/// `log E_i(z) = Σ_u (k_i−N−1) log(−u) + Σ_v [(−a_i+k_i−N) log(v+1) + t_i v]`, `E_0 = 1`.
fn log_e(geom: RingGeometry, p: Option<&ProbePoint>, rs: &BetheRootSet) -> Complex64 {
    let Some(p) = p else { return Complex64::new(0.0, 0.0) };
    let n = geom.n as i64;
    let left: Vec<Complex64> = rs.left.iter().map(|&u| (-u).ln() * (p.k - n - 1) as f64).collect();
    let right: Vec<Complex64> = rs.right.iter().map(|&v| (v + 1.0).ln() * (-p.a + p.k - n) as f64 + v * p.t).collect();
    pairwise_sum(&left) + pairwise_sum(&right)
}

fn sum_log_neg(ws: &[Complex64], power: usize) -> Complex64 {
    let t: Vec<Complex64> = ws.iter().map(|&u| (-u).ln() * power as f64).collect();
    pairwise_sum(&t)
}

fn sum_log_plus1(ws: &[Complex64], power: usize) -> Complex64 {
    let t: Vec<Complex64> = ws.iter().map(|&v| (v + 1.0).ln() * power as f64).collect();
    pairwise_sum(&t)
}

/// `log C(z)` for the step initial condition; `sets[ℓ−1]` holds the roots of `z_ℓ`.
pub fn step_log_c(geom: RingGeometry, q: &FiniteQuery, sets: &[&BetheRootSet]) -> Complex64 {
    let (n, m_) = (geom.n, geom.l - geom.n);
    let m = q.m();
    let mut total = Vec::new();
    for l in 1..=m {
        let rs = sets[l - 1];
        let prev = if l >= 2 { Some(&q.points[l - 2]) } else { None };
        total.push(log_e(geom, Some(&q.points[l - 1]), rs) - log_e(geom, prev, rs));
        total.push(sum_log_neg(&rs.left, n) + sum_log_plus1(&rs.right, m_) - cross_log(&rs.right, &rs.left));
        if l >= 2 {
            let pr = sets[l - 2];
            total.push(-(1.0 - rs.level / pr.level).ln());
            total.push(cross_log(&rs.right, &pr.left) - sum_log_neg(&pr.left, n) - sum_log_plus1(&rs.right, m_));
        }
    }
    pairwise_sum(&total)
}

/// Weighted kernel points for the step-IC kernels.
pub fn step_points(geom: RingGeometry, q: &FiniteQuery, sets: &[&BetheRootSet]) -> Vec<WeightedPoint> {
    let m = q.m();
    let rho = geom.rho();
    let set_at = |lvl: usize| if lvl >= 1 && lvl <= m { Some(sets[lvl - 1]) } else { None };
    let mut out = Vec::with_capacity(m * geom.l);
    for level in 1..=m {
        let rs = sets[level - 1];
        for (side, roots) in [(Side::Left, &rs.left), (Side::Right, &rs.right)] {
            for &w in roots.iter() {
                let tag = PointTag { level, side };
                let own = match side {
                    Side::Left => log_rz(rs, w),
                    Side::Right => log_lz(rs, w),
                };
                let log_row = jfun(geom, w).ln() + log_small_f(geom, q, level, w, side) + 2.0 * own
                    - log_hz(set_at(tag.row_neighbour()), w, rho);
                let cn = tag.col_neighbour();
                let q_factor = match set_at(cn) {
                    Some(other) => (1.0 - other.level / rs.level).ln(),
                    None => Complex64::new(0.0, 0.0),
                };
                let log_col = q_factor - log_hz(set_at(cn), w, rho);
                out.push(WeightedPoint { w, tag, log_row, log_col });
            }
        }
    }
    out
}

pub fn step_kernels(geom: RingGeometry, q: &FiniteQuery, sets: &[&BetheRootSet]) -> KernelPair {
    KernelPair::assemble(&step_points(geom, q, sets))
}

/// `C(z)·D(z)` at the levels `z_ℓ^L`.
pub fn step_integrand(geom: RingGeometry, q: &FiniteQuery, levels: &[Complex64], cache: &RootCache) -> Result<Complex64> {
    let owned = levels.iter().map(|&z| cache.get(z)).collect::<Result<Vec<_>>>()?;
    let sets: Vec<&BetheRootSet> = owned.iter().map(|a| a.as_ref()).collect();
    let kp = step_kernels(geom, q, &sets);
    if !kp.is_finite() {
        return Err(Error::Overflow("non-finite kernel entry".into()));
    }
    let d = kp.fredholm_det()?;
    let c = step_log_c(geom, q, &sets).exp();
    Ok(c * d)
}

/// Radii of the level circles `|z_ℓ|^L` for a z-plane scheme.
pub(crate) fn level_scheme(geom: RingGeometry, scheme: &ContourScheme) -> Result<ContourScheme> {
    let r0 = geom.r0();
    if scheme.radii.iter().any(|&r| !(r > 0.0 && r < r0)) {
        return invalid(format!("contour radii must lie in (0, r0) with r0 = {r0}"));
    }
    let mut s = scheme.clone();
    s.radii = scheme.radii.iter().map(|&r| (r.ln() * geom.l as f64).exp()).collect();
    Ok(s)
}

pub(crate) fn check_nested(radii: &[f64]) -> Result<()> {
    if radii.windows(2).any(|w| !(w[0] > w[1])) {
        return invalid("contour radii must satisfy 0 < |z_m| < ... < |z_1|");
    }
    Ok(())
}

pub(crate) fn to_result(out: crate::numerics::QuadratureOutcome, radii: &[f64], sign: f64) -> DistributionResult {
    DistributionResult {
        value: sign * out.value.re,
        im_residue: out.value.im.abs(),
        nodes: out.nodes,
        last_delta: out.last_delta,
        converged: out.converged,
        radii: radii.to_vec(),
    }
}

fn check_query(q: &FiniteQuery, radii: &[f64]) -> Result<()> {
    if radii.len() != q.m() {
        return invalid(format!("{} radii for {} probes", radii.len(), q.m()));
    }
    if !q.is_sorted() {
        return invalid("probe times must satisfy t_1 <= ... <= t_m");
    }
    Ok(())
}

/// `P(x_{k_1}(t_1) ≥ a_1, …, x_{k_m}(t_m) ≥ a_m)` for the step initial condition.
///
/// Probes must be time-ordered; the radii must be strictly decreasing and
/// below `r₀`. Any integer `k_i` is accepted.
pub fn joint_cdf_step(geom: RingGeometry, q: &FiniteQuery, scheme: &ContourScheme, opts: &FiniteOptions) -> Result<DistributionResult> {
    check_query(q, &scheme.radii)?;
    check_nested(&scheme.radii)?;
    let cache = RootCache::new(geom, opts.solver.clone());
    let ls = level_scheme(geom, scheme)?;
    let out = nested_contour_integral(|z| step_integrand(geom, q, z, &cache), &ls, opts.exec)?;
    Ok(to_result(out, &scheme.radii, 1.0))
}

/// Probability of a mixed event `Ẽ_1 ∩ … ∩ Ẽ_m` where `Minus` is
/// `{x ≥ a}` and `Plus` is `{x < a}`; the last sign must be `Minus`.
///
/// A `Plus` probe keeps its threshold, contributes a factor `−1`, and
/// reverses the nesting between `z_j` and `z_{j+1}`: summing over `x < a`
/// instead of `x ≥ a` continues the same geometric series past `|r| = 1`. The radii in `scheme`
/// must already follow that rule: `|z_j| > |z_{j+1}|` after a `Minus` probe
/// and `|z_j| < |z_{j+1}|` after a `Plus` probe.
pub fn mixed_event_prob_finite(
    geom: RingGeometry,
    q: &FiniteQuery,
    signs: &[Sign],
    scheme: &ContourScheme,
    opts: &FiniteOptions,
) -> Result<DistributionResult> {
    check_query(q, &scheme.radii)?;
    let sign = mixed_sign(signs, &scheme.radii)?;
    let cache = RootCache::new(geom, opts.solver.clone());
    let ls = level_scheme(geom, scheme)?;
    let out = nested_contour_integral(|z| step_integrand(geom, q, z, &cache), &ls, opts.exec)?;
    Ok(to_result(out, &scheme.radii, sign))
}

/// Checks one sign per probe, a trailing `Minus`, and the nesting rule
/// between consecutive radii; returns `(−1)^{#Plus}`.
pub(crate) fn mixed_sign(signs: &[Sign], radii: &[f64]) -> Result<f64> {
    if signs.len() != radii.len() || signs.last() != Some(&Sign::Minus) {
        return invalid("one sign per probe is required and the last sign must be '-'");
    }
    for j in 0..signs.len() - 1 {
        let ok = match signs[j] {
            Sign::Minus => radii[j] > radii[j + 1],
            Sign::Plus => radii[j] < radii[j + 1],
        };
        if !ok {
            return invalid(format!("radii {j} and {} violate the nesting rule for sign {:?}", j + 1, signs[j]));
        }
    }
    Ok(if signs.iter().filter(|s| **s == Sign::Plus).count() % 2 == 0 { 1.0 } else { -1.0 })
}

/// Radii obeying the nesting rule of a mixed query: walking back from the
/// last probe, each `Minus` probe steps one factor `ratio` outward and each
/// `Plus` probe one factor inward. The outermost circle gets `rmax`.
pub fn mixed_radii(rmax: f64, ratio: f64, signs: &[Sign]) -> Vec<f64> {
    let m = signs.len();
    let mut height = vec![0i32; m];
    for j in (0..m.saturating_sub(1)).rev() {
        height[j] = height[j + 1] + if signs[j] == Sign::Minus { 1 } else { -1 };
    }
    let top = height.iter().copied().max().unwrap_or(0);
    height.iter().map(|&h| rmax * ratio.powi(top - h)).collect()
}
