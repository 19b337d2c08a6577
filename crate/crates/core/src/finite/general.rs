//! General initial condition: `P_Y(∩ x_{k_ℓ}(t_ℓ) ≥ a_ℓ) = ∮…∮ C(z,k) D_Y(z,k,a,t)`.
//!
//! Each determinant entry is an `m`-fold sum over all `L` roots of every
//! level, chained through `1/(w_ℓ − w_{ℓ−1})`. The chain is folded as a
//! product of `L × L` transfer matrices, so one evaluation costs
//! `O(m N L²)` instead of `O(N² L^m)`.

use num_complex::Complex64;

use super::query::{DistributionResult, FiniteQuery, InitialCondition, ProbePoint};
use super::step::{check_nested, to_result};
use super::FiniteOptions;
use crate::bethe::{jfun, BetheRootSet, RingGeometry, RootCache};
use crate::error::{invalid, Result};
use crate::numerics::{det_complex, nested_contour_integral, powi_log, ComplexMatrix, ContourScheme};

/// `log G_ℓ(w)` without the `J(w)` factor, `t_0 = k_0 = a_0 = 0`.
fn log_g(prev: Option<&ProbePoint>, cur: &ProbePoint, w: Complex64) -> Complex64 {
    let (k0, a0, t0) = prev.map_or((0, 0, 0.0), |p| (p.k, p.a, p.t));
    let dk = (cur.k - k0) as f64;
    let da = (cur.a - a0) as f64;
    -w.ln() * dk + (w + 1.0).ln() * (-da + dk) + w * (cur.t - t0)
}

fn g_weight(geom: RingGeometry, prev: Option<&ProbePoint>, cur: &ProbePoint, w: Complex64) -> Complex64 {
    jfun(geom, w) * log_g(prev, cur, w).exp()
}

/// `C(z,k) = (−1)^{(k_m−1)(N+1) + m−1} Z_1^{k_1−1} Π_{ℓ≥2} Z_ℓ^{k_ℓ−k_{ℓ−1}} (Z_ℓ/Z_{ℓ−1} − 1)^{N−1}`.
///
/// The `(−1)^{m−1}` factor is fixed by comparison with the exact
/// transition-matrix evaluation; without it every even `m` changes sign.
pub fn general_c(geom: RingGeometry, q: &FiniteQuery, levels: &[Complex64]) -> Complex64 {
    let n = geom.n as i64;
    let m = q.m();
    let km = q.points[m - 1].k;
    let sign = if ((km - 1) * (n + 1) + m as i64 - 1).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let mut c = Complex64::new(sign, 0.0) * powi_log(levels[0], q.points[0].k - 1);
    for l in 1..m {
        c *= powi_log(levels[l], q.points[l].k - q.points[l - 1].k)
            * (levels[l] / levels[l - 1] - 1.0).powi(geom.n as i32 - 1);
    }
    c
}

/// `D_Y(z,k,a,t)` by transfer-matrix folding over the root sets.
pub fn general_d(geom: RingGeometry, y: &InitialCondition, q: &FiniteQuery, sets: &[&BetheRootSet]) -> Result<Complex64> {
    let n = geom.n;
    let m = q.m();
    let roots: Vec<Vec<Complex64>> = sets.iter().map(|s| s.all().copied().collect()).collect();
    let l = roots[0].len();
    // A[i][w_1] = w_1^i (w_1+1)^{y_i−i} G_1(w_1)
    let g1: Vec<Complex64> = roots[0].iter().map(|&w| g_weight(geom, None, &q.points[0], w)).collect();
    let mut a = ComplexMatrix::from_fn(n, l, |i, c| {
        let ii = i as i64 + 1;
        let w = roots[0][c];
        powi_log(w, ii) * powi_log(w + 1.0, y.y[i] - ii) * g1[c]
    });
    for lvl in 1..m {
        let prev = &roots[lvl - 1];
        let cur = &roots[lvl];
        let g: Vec<Complex64> = cur.iter().map(|&w| g_weight(geom, Some(&q.points[lvl - 1]), &q.points[lvl], w)).collect();
        let t = ComplexMatrix::from_fn(prev.len(), cur.len(), |r, c| g[c] / (cur[c] - prev[r]));
        a = a.mul(&t);
    }
    let last = &roots[m - 1];
    let tail = ComplexMatrix::from_fn(last.len(), n, |r, j| powi_log(last[r], -(j as i64 + 1)));
    det_complex(&a.mul(&tail))
}

fn check_general(geom: RingGeometry, y: &InitialCondition, q: &FiniteQuery, radii: &[f64]) -> Result<()> {
    InitialCondition::new(geom, y.y.clone())?;
    if radii.len() != q.m() {
        return invalid(format!("{} radii for {} probes", radii.len(), q.m()));
    }
    if !q.is_sorted() {
        return invalid("probe times must satisfy t_1 <= ... <= t_m");
    }
    if q.points.iter().any(|p| !(1..=geom.n as i64).contains(&p.k)) {
        return invalid("the general formula needs k in 1..=N; translate the query first");
    }
    check_nested(radii)
}

/// Joint distribution for a general initial condition.
pub fn joint_cdf_general(
    geom: RingGeometry,
    y: &InitialCondition,
    q: &FiniteQuery,
    scheme: &ContourScheme,
    opts: &FiniteOptions,
) -> Result<DistributionResult> {
    check_general(geom, y, q, &scheme.radii)?;
    let cache = RootCache::new(geom, opts.solver.clone());
    let ls = super::step::level_scheme(geom, scheme)?;
    let out = nested_contour_integral(
        |levels| {
            let owned = levels.iter().map(|&z| cache.get(z)).collect::<Result<Vec<_>>>()?;
            let sets: Vec<&BetheRootSet> = owned.iter().map(|a| a.as_ref()).collect();
            Ok(general_c(geom, q, levels) * general_d(geom, y, q, &sets)?)
        },
        &ls,
        opts.exec,
    )?;
    Ok(to_result(out, &scheme.radii, 1.0))
}
