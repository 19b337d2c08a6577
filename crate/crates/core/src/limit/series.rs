//! Series `D(z) = Σ_n D_n(z)/(n!)²` for the limit kernels, the independent
//! route to the Fredholm determinant.
//!
//! As in the finite series, the summand is symmetric in each tuple and
//! vanishes on repeated entries, so the ordered tuples collapse to one term
//! per pair of subsets `U^ℓ ⊂ 𝖫_{z_ℓ}`, `V^ℓ ⊂ 𝖱_{z_ℓ}` with `|U^ℓ| = |V^ℓ| = n_ℓ`.

use num_complex::Complex64;

use super::kernel::LimitEvaluator;
use super::{LimitOptions, ScaledQuery};
use crate::error::{invalid, Result};
use crate::finite::subsets;
use crate::kernel::Side;
use crate::numerics::{cross_product, pairwise_product, pairwise_sum, vandermonde};

/// Largest per-level order accepted by [`eval_d_series_limit`].
pub const MAX_SERIES_ORDER: usize = 4;

struct Choice {
    n: usize,
    u: Vec<Complex64>,
    v: Vec<Complex64>,
    /// `Δ(U)²Δ(V)²/Δ(U;V)² f̂(U) f̂(V)`.
    own: Complex64,
    /// `Σ_{ζ ∈ U ∪ V} h(ζ, z_{ℓ−1})` and `h(ζ, z_{ℓ+1})`.
    h_prev: Complex64,
    h_next: Complex64,
}

fn level_choices(ev: &LimitEvaluator, zs: &[Complex64], level: usize, n_cap: usize) -> Result<Vec<Choice>> {
    let z = zs[level - 1];
    let pts = ev.level_points(level, z)?;
    let m = zs.len();
    let h_at = |idx: usize, j: usize| -> Result<Complex64> {
        if j == 0 || j > m {
            return Ok(Complex64::new(0.0, 0.0));
        }
        ev.h_of_root(level, z, idx, zs[j - 1])
    };
    let mut fhat = Vec::with_capacity(pts.len());
    let mut hp = Vec::with_capacity(pts.len());
    let mut hn = Vec::with_capacity(pts.len());
    for (idx, &(_, _, lw)) in pts.iter().enumerate() {
        fhat.push((lw + 2.0 * h_at(idx, level)?).exp());
        hp.push(h_at(idx, level - 1)?);
        hn.push(h_at(idx, level + 1)?);
    }
    let li: Vec<usize> = (0..pts.len()).filter(|&i| pts[i].1 == Side::Left).collect();
    let ri: Vec<usize> = (0..pts.len()).filter(|&i| pts[i].1 == Side::Right).collect();
    let mut out = Vec::new();
    for n in 0..=n_cap.min(li.len()).min(ri.len()) {
        for us in subsets(&li, n) {
            for vs in subsets(&ri, n) {
                let u: Vec<Complex64> = us.iter().map(|&i| pts[i].0).collect();
                let v: Vec<Complex64> = vs.iter().map(|&i| pts[i].0).collect();
                let (du, dv, duv) = (vandermonde(&u), vandermonde(&v), cross_product(&u, &v));
                let all: Vec<usize> = us.iter().chain(&vs).copied().collect();
                let weights: Vec<Complex64> = all.iter().map(|&i| fhat[i]).collect();
                let own = du * du * dv * dv / (duv * duv) * pairwise_product(&weights);
                let h_prev = all.iter().map(|&i| hp[i]).sum();
                let h_next = all.iter().map(|&i| hn[i]).sum();
                out.push(Choice { n, u, v, own, h_prev, h_next });
            }
        }
    }
    Ok(out)
}

fn coupling(prev: &Choice, cur: &Choice, z_prev: Complex64, z_cur: Complex64) -> Complex64 {
    let num = cross_product(&cur.u, &prev.v)
        * cross_product(&cur.v, &prev.u)
        * (1.0 - z_prev / z_cur).powi(cur.n as i32)
        * (1.0 - z_cur / z_prev).powi(prev.n as i32);
    let den = cross_product(&cur.u, &prev.u) * cross_product(&cur.v, &prev.v);
    num / den * (-cur.h_prev - prev.h_next).exp()
}

/// Partial sums of the series grouped by total order `|n| = Σ n_ℓ`, each
/// level truncated at `n_ℓ ≤ n_cap`. Entry `o` of the result is the sum of
/// all terms with `|n| = o`.
pub fn d_series_by_order(zs: &[Complex64], q: &ScaledQuery, opts: &LimitOptions, n_cap: usize) -> Result<Vec<Complex64>> {
    if n_cap > MAX_SERIES_ORDER {
        return invalid(format!("series order is capped at {MAX_SERIES_ORDER} per level"));
    }
    let zmax = zs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let ev = LimitEvaluator::new(q, opts, zmax)?;
    if zs.len() != q.m() {
        return invalid(format!("{} contour variables for {} probes", zs.len(), q.m()));
    }
    let m = zs.len();
    let orders = m * n_cap + 1;
    let mut choices = Vec::with_capacity(m);
    for level in 1..=m {
        choices.push(level_choices(&ev, zs, level, n_cap)?);
    }
    // acc[c][o]: sum over chains ending in choice c with total order o
    let mut acc: Vec<Vec<Complex64>> = choices[0]
        .iter()
        .map(|c| {
            let mut v = vec![Complex64::new(0.0, 0.0); orders];
            v[c.n] = c.own;
            v
        })
        .collect();
    for l in 1..m {
        let mut next = Vec::with_capacity(choices[l].len());
        for cur in &choices[l] {
            let mut v = vec![Complex64::new(0.0, 0.0); orders];
            for o in 0..orders - cur.n {
                let terms: Vec<Complex64> = choices[l - 1]
                    .iter()
                    .zip(&acc)
                    .filter(|(_, a)| a[o] != Complex64::new(0.0, 0.0))
                    .map(|(prev, a)| a[o] * coupling(prev, cur, zs[l - 1], zs[l]))
                    .collect();
                v[o + cur.n] = pairwise_sum(&terms) * cur.own;
            }
            next.push(v);
        }
        acc = next;
    }
    Ok((0..orders).map(|o| pairwise_sum(&acc.iter().map(|a| a[o]).collect::<Vec<_>>())).collect())
}

/// `Σ_{n_ℓ ≤ n_cap} D_n(z)/(n!)²` with `n_cap ≤ 4`.
pub fn eval_d_series_limit(zs: &[Complex64], q: &ScaledQuery, opts: &LimitOptions, n_cap: usize) -> Result<Complex64> {
    Ok(pairwise_sum(&d_series_by_order(zs, q, opts, n_cap)?))
}

#[cfg(test)]
mod tests {
    use super::super::build_limit_kernels;
    use super::*;

    #[test]
    fn leading_terms() {
        let q = ScaledQuery::single(0.0, 1.0, 0.5).unwrap();
        let zs = [Complex64::from_polar(0.7, 0.5)];
        let by = d_series_by_order(&zs, &q, &LimitOptions::default(), 2).unwrap();
        assert_eq!(by[0], Complex64::new(1.0, 0.0));
        let kp = build_limit_kernels(&zs, &q, &LimitOptions::default()).unwrap();
        let prod = kp.k1.mul(&kp.k2);
        let trace: Complex64 = (0..prod.rows()).map(|i| prod[(i, i)]).sum();
        assert!((by[1] + trace).norm() < 1e-12 * trace.norm().max(1e-300), "{} vs {}", by[1], -trace);
    }

    #[test]
    fn order_cap() {
        let q = ScaledQuery::single(0.0, 1.0, 0.5).unwrap();
        assert!(eval_d_series_limit(&[Complex64::new(0.5, 0.0)], &q, &LimitOptions::default(), 5).is_err());
    }
}
