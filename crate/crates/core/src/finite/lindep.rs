//! Independence of the ring size: for the step initial condition and
//! `L > max_i(a_i − k_i) − y_1 + N + 1`, the joint law of the queried
//! particles coincides with that of `N` particles on `ℤ`, so any two
//! admissible ring sizes give the same probability.

use serde::{Deserialize, Serialize};

use super::query::{default_finite_scheme, FiniteQuery};
use super::step::joint_cdf_step;
use super::FiniteOptions;
use crate::bethe::RingGeometry;
use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LIndependenceReport {
    pub n: usize,
    pub l1: usize,
    pub l2: usize,
    pub p1: f64,
    pub p2: f64,
    pub diff: f64,
}

/// Smallest ring size allowed for `q` with `N` particles under step initial data.
pub fn l_threshold(n: usize, q: &FiniteQuery) -> i64 {
    let y1 = 1 - n as i64;
    let worst = q.points.iter().map(|p| p.a - p.k).max().unwrap_or(i64::MIN / 2);
    (worst - y1 + n as i64 + 2).max(n as i64 + 1)
}

pub fn check_l_independence(n: usize, q: &FiniteQuery, l1: usize, l2: usize, tol: f64, opts: &FiniteOptions) -> Result<LIndependenceReport> {
    if q.points.iter().any(|p| !(1..=n as i64).contains(&p.k)) {
        return invalid("ring-size independence is stated for k in 1..=N");
    }
    let min = l_threshold(n, q);
    for l in [l1, l2] {
        if (l as i64) < min {
            return invalid(format!("L={l} is below the admissible threshold {min}"));
        }
    }
    let eval = |l: usize| -> Result<f64> {
        let g = RingGeometry::new(l, n)?;
        let s = default_finite_scheme(g, q.m()).with_tol(tol);
        Ok(joint_cdf_step(g, q, &s, opts)?.value)
    };
    let (p1, p2) = (eval(l1)?, eval(l2)?);
    Ok(LIndependenceReport { n, l1, l2, p1, p2, diff: (p1 - p2).abs() })
}
