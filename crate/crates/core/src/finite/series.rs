//! Finite series `D(z) = Σ_n D_n(z)/(n!)²` for the step initial condition,
//! the independent route to the Fredholm determinant.
//!
//! `D_n` sums over tuples `U^ℓ ∈ L_{z_ℓ}^{n_ℓ}`, `V^ℓ ∈ R_{z_ℓ}^{n_ℓ}`. The
//! summand is symmetric in each tuple and vanishes on repeated entries, so
//! the `(n!)²` ordered tuples collapse to one term per pair of subsets.

use num_complex::Complex64;

use super::query::FiniteQuery;
use super::step::log_small_f;
use crate::bethe::{eval_lz, eval_rz, jfun, BetheRootSet, RingGeometry};
use crate::error::Result;
use crate::kernel::Side;
use crate::numerics::{cross_product, pairwise_product, pairwise_sum, vandermonde};

/// All `k`-element subsets of `xs`, in lexicographic index order.
pub fn subsets<T: Copy>(xs: &[T], k: usize) -> Vec<Vec<T>> {
    fn rec<T: Copy>(xs: &[T], k: usize, start: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..xs.len() {
            if xs.len() - i < k - cur.len() {
                break;
            }
            cur.push(xs[i]);
            rec(xs, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(xs, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// `f̂_ℓ(w) = J(w) f_ℓ(w) H_{z_ℓ}(w)²`.
fn f_hat(geom: RingGeometry, q: &FiniteQuery, level: usize, rs: &BetheRootSet, w: Complex64, side: Side) -> Result<Complex64> {
    let h = match side {
        Side::Left => eval_rz(rs, w)?,
        Side::Right => eval_lz(rs, w)?,
    };
    Ok(jfun(geom, w) * log_small_f(geom, q, level, w, side).exp() * h * h)
}

/// One level's choice of subsets.
struct Choice {
    u: Vec<Complex64>,
    v: Vec<Complex64>,
    /// `Δ(U)²Δ(V)²/Δ(U;V)² f̂(U) f̂(V)`.
    own: Complex64,
}

fn level_choices(geom: RingGeometry, q: &FiniteQuery, level: usize, rs: &BetheRootSet) -> Result<Vec<Choice>> {
    let nmax = rs.left.len().min(rs.right.len());
    let fl: Vec<Complex64> = rs.left.iter().map(|&u| f_hat(geom, q, level, rs, u, Side::Left)).collect::<Result<_>>()?;
    let fr: Vec<Complex64> = rs.right.iter().map(|&v| f_hat(geom, q, level, rs, v, Side::Right)).collect::<Result<_>>()?;
    let li: Vec<usize> = (0..rs.left.len()).collect();
    let ri: Vec<usize> = (0..rs.right.len()).collect();
    let mut out = Vec::new();
    for n in 0..=nmax {
        for us in subsets(&li, n) {
            for vs in subsets(&ri, n) {
                let u: Vec<Complex64> = us.iter().map(|&i| rs.left[i]).collect();
                let v: Vec<Complex64> = vs.iter().map(|&i| rs.right[i]).collect();
                let du = vandermonde(&u);
                let dv = vandermonde(&v);
                let duv = cross_product(&u, &v);
                let weights: Vec<Complex64> = us.iter().map(|&i| fl[i]).chain(vs.iter().map(|&i| fr[i])).collect();
                let own = du * du * dv * dv / (duv * duv) * pairwise_product(&weights);
                out.push(Choice { u, v, own });
            }
        }
    }
    Ok(out)
}

fn coupling(prev: &Choice, cur: &Choice, rs_prev: &BetheRootSet, rs_cur: &BetheRootSet) -> Result<Complex64> {
    let ratio = rs_cur.level / rs_prev.level;
    let num = cross_product(&cur.u, &prev.v)
        * cross_product(&cur.v, &prev.u)
        * (1.0 - ratio).powi(prev.u.len() as i32)
        * (1.0 - 1.0 / ratio).powi(cur.u.len() as i32);
    let mut den = cross_product(&cur.u, &prev.u) * cross_product(&cur.v, &prev.v);
    for &u in &cur.u {
        den *= eval_rz(rs_prev, u)?;
    }
    for &u in &prev.u {
        den *= eval_rz(rs_cur, u)?;
    }
    for &v in &cur.v {
        den *= eval_lz(rs_prev, v)?;
    }
    for &v in &prev.v {
        den *= eval_lz(rs_cur, v)?;
    }
    Ok(num / den)
}

/// `Σ_n D_n(z)/(n!)²` summed over every admissible `n`.
///
/// The level choices are chained left to right, so the cost is
/// `Σ_ℓ |choices_{ℓ−1}|·|choices_ℓ|` rather than the full product.
pub fn step_series_d(geom: RingGeometry, q: &FiniteQuery, sets: &[&BetheRootSet]) -> Result<Complex64> {
    let m = q.m();
    let mut choices = Vec::with_capacity(m);
    for (lvl, rs) in sets.iter().enumerate() {
        choices.push(level_choices(geom, q, lvl + 1, rs)?);
    }
    // acc[c] = sum over all earlier-level choices ending in choice c of level ℓ
    let mut acc: Vec<Complex64> = choices[0].iter().map(|c| c.own).collect();
    for lvl in 1..m {
        let mut next = Vec::with_capacity(choices[lvl].len());
        for cur in &choices[lvl] {
            let mut terms = Vec::with_capacity(acc.len());
            for (prev, &a) in choices[lvl - 1].iter().zip(&acc) {
                terms.push(a * coupling(prev, cur, sets[lvl - 1], sets[lvl])?);
            }
            next.push(pairwise_sum(&terms) * cur.own);
        }
        acc = next;
    }
    Ok(pairwise_sum(&acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_counts() {
        let xs: Vec<usize> = (0..5).collect();
        let counts: Vec<usize> = (0..=5).map(|k| subsets(&xs, k).len()).collect();
        assert_eq!(counts, vec![1, 5, 10, 10, 5, 1]);
    }
}
