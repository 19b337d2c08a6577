//! The configuration sum `H_{k,a}(W;W′) = Σ_{X: x_k ≥ a} R_X(W) L_X(W′)` in
//! closed form and by direct enumeration.
//!
//! `R_X(W) = det[w_i^{−j} (w_i+1)^{−x_j+j}]` and
//! `L_X(W′) = det[w′_i^{j} (w′_i+1)^{x_j−j}]`, with `W ∈ R_z^N` and
//! `W′ ∈ R_{z′}^N`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bethe::RingGeometry;
use crate::error::{invalid, Error, Result};
use crate::numerics::{cauchy_det, det_complex, pairwise_product, powi_log, ComplexMatrix};

/// A pair of root tuples with their levels `Z = z^L`, `Z′ = z′^L`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootPair {
    pub geom: RingGeometry,
    pub w: Vec<Complex64>,
    pub wp: Vec<Complex64>,
    pub level: Complex64,
    pub level_p: Complex64,
}

impl RootPair {
    fn validate(&self) -> Result<()> {
        let n = self.geom.n;
        if self.w.len() != n || self.wp.len() != n {
            return invalid(format!("root tuples must have N={n} entries"));
        }
        if (self.level - self.level_p).norm() <= 1e-14 * self.level.norm().max(self.level_p.norm()) {
            return invalid("the two levels must differ");
        }
        Ok(())
    }

    /// `r = Π (w′_j+1)/(w_j+1)`, the ratio of consecutive `x_k` slices.
    pub fn ratio(&self) -> Complex64 {
        let f: Vec<Complex64> = self.w.iter().zip(&self.wp).map(|(&w, &wp)| (wp + 1.0) / (w + 1.0)).collect();
        pairwise_product(&f)
    }
}

/// `R_X(W)`.
pub fn r_x(w: &[Complex64], x: &[i64]) -> Result<Complex64> {
    let n = w.len();
    let m = ComplexMatrix::from_fn(n, n, |i, j| {
        let jj = j as i64 + 1;
        powi_log(w[i], -jj) * powi_log(w[i] + 1.0, -x[j] + jj)
    });
    det_complex(&m)
}

/// `L_X(W′)`.
pub fn l_x(wp: &[Complex64], x: &[i64]) -> Result<Complex64> {
    let n = wp.len();
    let m = ComplexMatrix::from_fn(n, n, |i, j| {
        let jj = j as i64 + 1;
        powi_log(wp[i], jj) * powi_log(wp[i] + 1.0, x[j] - jj)
    });
    det_complex(&m)
}

/// `det[1/(w_i − w′_j)]`.
fn cauchy(w: &[Complex64], wp: &[Complex64]) -> Result<Complex64> {
    cauchy_det(w, wp)
}

/// Closed form of `H_{k,a}(W;W′)`:
/// `(Z/Z′)^{k−1} (1 − Z′/Z)^{N−1} Π w_j^{−k}(w_j+1)^{−a+k+1} / (w′_j^{−k}(w′_j+1)^{−a+k}) · det[1/(w_i − w′_j)]`.
///
/// Valid as a sum when `|r| < 1`; the caller decides whether that holds.
pub fn hka_closed(p: &RootPair, k: i64, a: i64) -> Result<Complex64> {
    p.validate()?;
    let n = p.geom.n as i32;
    let lead = (p.level / p.level_p).powi(k as i32 - 1) * (1.0 - p.level_p / p.level).powi(n - 1);
    let f: Vec<Complex64> = p
        .w
        .iter()
        .zip(&p.wp)
        .map(|(&w, &wp)| {
            powi_log(w, -k) * powi_log(w + 1.0, -a + k + 1) / (powi_log(wp, -k) * powi_log(wp + 1.0, -a + k))
        })
        .collect();
    Ok(lead * pairwise_product(&f) * cauchy(&p.w, &p.wp)?)
}

/// Closed form of `Σ_{X: x_k < a} R_X(W) L_X(W′)` for `|r| > 1`: the
/// continuation of the same geometric series, `−hka_closed(p, k, a)`.
pub fn hka_closed_below(p: &RootPair, k: i64, a: i64) -> Result<Complex64> {
    Ok(-hka_closed(p, k, a)?)
}

/// Closed form of the finite slice `H_a(W;W′) = Σ_{X: x_1 = a} R_X(W) L_X(W′)`:
/// `−((Z′/Z) − 1)^{N−1} (Π w′(w′+1)^{a−1}/(w(w+1)^{a−2}) − Π w′(w′+1)^a/(w(w+1)^{a−1})) det[1/(w′_j − w_i)]`.
pub fn h_slice_closed(p: &RootPair, a: i64) -> Result<Complex64> {
    p.validate()?;
    let n = p.geom.n as i32;
    let prod = |e_wp: i64, e_w: i64| {
        let f: Vec<Complex64> = p
            .w
            .iter()
            .zip(&p.wp)
            .map(|(&w, &wp)| wp * powi_log(wp + 1.0, e_wp) / (w * powi_log(w + 1.0, e_w)))
            .collect();
        pairwise_product(&f)
    };
    let det = cauchy(&p.wp, &p.w)?;
    // det[1/(w′_{i′} − w_i)]_{i,i′} is the transpose of the Cauchy matrix on (w′, w)
    Ok(-(p.level_p / p.level - 1.0).powi(n - 1) * (prod(a - 1, a - 2) - prod(a, a - 1)) * det)
}

/// Configurations in `X_N(L)` with `x_k = b`, for `1 ≤ k ≤ N`.
pub fn configurations_with(geom: RingGeometry, k: usize, b: i64) -> Vec<Vec<i64>> {
    let (n, l) = (geom.n, geom.l as i64);
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    x[k - 1] = b;
    // fill x_1..x_{k−1} below b, then x_{k+1}..x_N above, keeping x_N < x_1 + L
    fn below(
        j: usize,
        k: usize,
        n: usize,
        l: i64,
        x: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        if j == 0 {
            above(k, n, l, x, out);
            return;
        }
        // x_j < x_{j+1}, x_j > x_k − L
        let hi = x[j] - 1;
        let lo = x[k - 1] - l + 1 + (j as i64 - 1);
        let mut v = hi;
        while v >= lo {
            x[j - 1] = v;
            below(j - 1, k, n, l, x, out);
            v -= 1;
        }
    }
    fn above(j: usize, n: usize, l: i64, x: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if j == n {
            out.push(x.clone());
            return;
        }
        let lo = x[j - 1] + 1;
        let hi = x[0] + l - 1 - (n - 1 - j) as i64;
        for v in lo..=hi {
            x[j] = v;
            above(j + 1, n, l, x, out);
        }
    }
    below(k - 1, k, n, l, &mut x, &mut out);
    out
}

/// `Σ_{X: x_k = b} R_X(W) L_X(W′)`.
pub fn h_slice_bruteforce(p: &RootPair, k: usize, b: i64) -> Result<Complex64> {
    p.validate()?;
    let mut terms = Vec::new();
    for x in configurations_with(p.geom, k, b) {
        terms.push(r_x(&p.w, &x)? * l_x(&p.wp, &x)?);
    }
    Ok(crate::numerics::pairwise_sum(&terms))
}

/// Brute-force value with its certified tail bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BruteForce {
    pub value: Complex64,
    pub tail_bound: f64,
    pub slices: usize,
}

/// Sums slices `b = start, start+step, …` until the geometric tail bound
/// `|S_last| q/(1 − q)` drops below `tail_tol`, with at most `max_slices` terms.
fn geometric_slices(p: &RootPair, k: usize, start: i64, step: i64, q: f64, max_slices: usize, tail_tol: f64) -> Result<BruteForce> {
    let mut terms = Vec::new();
    let mut b = start;
    loop {
        let s = h_slice_bruteforce(p, k, b)?;
        if !s.is_finite() {
            return Err(Error::Overflow(format!("slice x_k = {b} is not finite")));
        }
        terms.push(s);
        let tail_bound = s.norm() * q / (1.0 - q);
        if tail_bound <= tail_tol {
            return Ok(BruteForce { value: crate::numerics::pairwise_sum(&terms), tail_bound, slices: terms.len() });
        }
        if terms.len() >= max_slices {
            return Err(Error::NonConvergence(format!("tail bound {tail_bound:e} above {tail_tol:e} after {max_slices} slices")));
        }
        b += step;
    }
}

/// `H_{k,a}` by summing the slices `x_k = b` for `b = a, a+1, …`.
///
/// Each slice is the previous one times `r = Π(w′+1)/(w+1)`, so after the
/// slice `S_b` the discarded tail is at most `|S_b| |r| / (1 − |r|)`.
/// Fails when `|r| ≥ 1` or when the bound stays above `tail_tol`.
pub fn hka_bruteforce(p: &RootPair, k: usize, a: i64, max_slices: usize, tail_tol: f64) -> Result<BruteForce> {
    if !(1..=p.geom.n).contains(&k) {
        return invalid(format!("k must lie in 1..={}", p.geom.n));
    }
    let r = p.ratio().norm();
    if !(r < 1.0) {
        return invalid(format!("the series needs |r| < 1, got {r}"));
    }
    geometric_slices(p, k, a, 1, r, max_slices, tail_tol)
}

/// `Σ_{X: x_k < a}` by summing the slices `b = a−1, a−2, …`; needs `|r| > 1`.
pub fn hka_bruteforce_below(p: &RootPair, k: usize, a: i64, max_slices: usize, tail_tol: f64) -> Result<BruteForce> {
    if !(1..=p.geom.n).contains(&k) {
        return invalid(format!("k must lie in 1..={}", p.geom.n));
    }
    let r = p.ratio().norm();
    if !(r > 1.0) {
        return invalid(format!("the series below a needs |r| > 1, got {r}"));
    }
    geometric_slices(p, k, a - 1, -1, 1.0 / r, max_slices, tail_tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn configuration_counts() {
        // with x_k fixed the remaining N−1 sites are chosen among L−1 positions of a window
        let g = RingGeometry::new(6, 3).unwrap();
        for k in 1..=3 {
            let xs = configurations_with(g, k, 4);
            assert_eq!(xs.len(), 10);
            for x in &xs {
                assert_eq!(x[k - 1], 4);
                assert!(x.windows(2).all(|w| w[0] < w[1]) && x[2] < x[0] + 6);
            }
        }
    }
}
