//! Exact transition probabilities of the ring TASEP by uniformization.
//!
//! States are absolute configurations reachable from the initial one. The
//! uniformized chain has rate `Λ = N`: at each Poisson event a uniformly
//! chosen particle attempts a jump. After `n` events the total displacement
//! is at most `n`, so truncating the Poisson series at `K` also bounds the
//! state space.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{check_signs, probe_holds, RingState};
use crate::bethe::RingGeometry;
use crate::error::{invalid, Error, Result};
use crate::finite::{FiniteQuery, InitialCondition, Sign};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactOptions {
    /// Bound on the Poisson tail mass discarded per time segment.
    pub tail: f64,
    /// Refuse queries whose reachable state space exceeds this size.
    pub max_states: usize,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self { tail: 1e-12, max_states: 100_000 }
    }
}

/// Smallest `K` with `P(Poisson(λ) > K) < tail`, together with the weights
/// `P(Poisson(λ) = n)` for `n ≤ K`.
fn poisson_weights(lambda: f64, tail: f64) -> Vec<f64> {
    if lambda == 0.0 {
        return vec![1.0];
    }
    let mut w = vec![(-lambda).exp()];
    let mut log_p = -lambda;
    let mut n = 0usize;
    loop {
        n += 1;
        log_p += lambda.ln() - (n as f64).ln();
        w.push(log_p.exp());
        // terms beyond n shrink at least geometrically with ratio λ/(n+2)
        let ratio = lambda / (n + 2) as f64;
        if ratio < 1.0 && w[n] * ratio / (1.0 - ratio) < tail {
            return w;
        }
    }
}

type Dist = HashMap<Vec<i64>, f64>;

/// Evolve a distribution over configurations for time `t`.
fn evolve(geom: RingGeometry, dist: Dist, t: f64, opts: &ExactOptions) -> Result<Dist> {
    let weights = poisson_weights(geom.n as f64 * t, opts.tail);
    let inv_n = 1.0 / geom.n as f64;
    let mut out: Dist = HashMap::new();
    let mut cur = dist;
    for (step, &pw) in weights.iter().enumerate() {
        for (x, p) in &cur {
            *out.entry(x.clone()).or_insert(0.0) += pw * p;
        }
        if step + 1 == weights.len() {
            break;
        }
        let mut next: Dist = HashMap::with_capacity(cur.len() * 2);
        for (x, p) in &cur {
            let state = RingState { x: x.clone(), j0: 0 };
            let mut stay = 0.0;
            for i in 0..geom.n {
                if state.free(geom, i) {
                    let mut y = x.clone();
                    y[i] += 1;
                    *next.entry(y).or_insert(0.0) += p * inv_n;
                } else {
                    stay += p * inv_n;
                }
            }
            if stay > 0.0 {
                *next.entry(x.clone()).or_insert(0.0) += stay;
            }
        }
        if next.len() > opts.max_states {
            return Err(Error::InvalidInput(format!(
                "exact oracle needs more than {} states; shorten the time or shrink the ring",
                opts.max_states
            )));
        }
        cur = next;
    }
    Ok(out)
}

/// Distribution of the absolute configuration at time `t`.
pub fn exact_distribution(geom: RingGeometry, y: &InitialCondition, t: f64, opts: &ExactOptions) -> Result<Vec<(Vec<i64>, f64)>> {
    if !(t.is_finite() && t >= 0.0) {
        return invalid("time must be finite and non-negative");
    }
    let start: Dist = HashMap::from([(y.y.clone(), 1.0)]);
    let mut v: Vec<(Vec<i64>, f64)> = evolve(geom, start, t, opts)?.into_iter().collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(v)
}

/// Exact `P(∩_j Ẽ_j)` with `Ẽ_j = {x_{k_j}(t_j) ≥ a_j}` for `Minus` and
/// `{x_{k_j}(t_j) < a_j}` for `Plus`. The chain is evolved through the
/// sorted probe times and filtered by each event in turn.
pub fn exact_cdf_small(
    geom: RingGeometry,
    y: &InitialCondition,
    q: &FiniteQuery,
    signs: Option<&[Sign]>,
    opts: &ExactOptions,
) -> Result<f64> {
    let signs = check_signs(q, signs)?;
    let (q, perm) = q.canonical();
    let signs: Vec<Sign> = perm.iter().map(|&i| signs[i]).collect();
    let mut dist: Dist = HashMap::from([(y.y.clone(), 1.0)]);
    let mut now = 0.0;
    for (p, &s) in q.points.iter().zip(&signs) {
        dist = evolve(geom, dist, p.t - now, opts)?;
        now = p.t;
        dist.retain(|x, _| probe_holds(geom, &RingState { x: x.clone(), j0: 0 }, p.k, p.a, s));
    }
    let mut mass: Vec<f64> = dist.into_values().collect();
    mass.sort_by(f64::total_cmp);
    Ok(mass.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poisson_tail_is_below_bound() {
        for lambda in [0.3, 2.0, 9.0] {
            let w = poisson_weights(lambda, 1e-12);
            let mass: f64 = w.iter().sum();
            assert!((1.0 - mass).abs() < 2e-12, "lambda={lambda}");
        }
    }

    #[test]
    fn mass_is_conserved() {
        let g = RingGeometry::new(5, 2).unwrap();
        let d = exact_distribution(g, &InitialCondition::step(g), 1.3, &ExactOptions::default()).unwrap();
        let total: f64 = d.iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-11);
    }

    #[test]
    fn single_particle_is_poisson() {
        // with N = 1 and L large the particle never blocks itself
        let g = RingGeometry::new(40, 1).unwrap();
        let t = 1.7;
        let d = exact_distribution(g, &InitialCondition::step(g), t, &ExactOptions::default()).unwrap();
        for (x, p) in d.iter().take(6) {
            let n = x[0] as i32;
            let expect = (-t).exp() * t.powi(n) / (1..=n).map(f64::from).product::<f64>();
            assert!((p - expect).abs() < 1e-13);
        }
    }
}
