use serde::{Deserialize, Serialize};

use crate::bethe::RingGeometry;
use crate::error::{invalid, Result};
use crate::numerics::ContourScheme;

/// One space-time probe `x_k(t) ≥ a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbePoint {
    pub k: i64,
    pub a: i64,
    pub t: f64,
}

/// The event attached to a probe in mixed queries.
///
/// `Minus` is `{x_k(t) ≥ a}` (the scaled height lies below its threshold),
/// `Plus` is the complement `{x_k(t) < a}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "+")]
    Plus,
}

impl Sign {
    pub fn parse(s: &str) -> Result<Vec<Sign>> {
        s.chars()
            .filter(|c| !matches!(c, ',' | ' '))
            .map(|c| match c {
                '-' => Ok(Sign::Minus),
                '+' => Ok(Sign::Plus),
                other => invalid(format!("unknown sign '{other}'")),
            })
            .collect()
    }
}

/// A joint query `P(x_{k_1}(t_1) ≥ a_1, …, x_{k_m}(t_m) ≥ a_m)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteQuery {
    pub points: Vec<ProbePoint>,
}

impl FiniteQuery {
    pub fn new(points: Vec<ProbePoint>) -> Result<Self> {
        if points.is_empty() {
            return invalid("a query needs at least one probe");
        }
        if points.iter().any(|p| !(p.t.is_finite() && p.t >= 0.0)) {
            return invalid("probe times must be finite and non-negative");
        }
        Ok(Self { points })
    }

    pub fn single(k: i64, a: i64, t: f64) -> Result<Self> {
        Self::new(vec![ProbePoint { k, a, t }])
    }

    pub fn m(&self) -> usize {
        self.points.len()
    }

    /// Probes sorted by time, then by particle index. The permutation applied
    /// is returned alongside so that per-probe data can follow.
    pub fn canonical(&self) -> (FiniteQuery, Vec<usize>) {
        let mut idx: Vec<usize> = (0..self.points.len()).collect();
        idx.sort_by(|&i, &j| {
            let (p, q) = (self.points[i], self.points[j]);
            p.t.total_cmp(&q.t).then(p.k.cmp(&q.k))
        });
        let points = idx.iter().map(|&i| self.points[i]).collect();
        (FiniteQuery { points }, idx)
    }

    pub fn is_sorted(&self) -> bool {
        self.points.windows(2).all(|w| w[0].t <= w[1].t)
    }
}

/// An initial configuration `y_1 < … < y_N < y_1 + L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitialCondition {
    pub y: Vec<i64>,
}

impl InitialCondition {
    pub fn new(geom: RingGeometry, y: Vec<i64>) -> Result<Self> {
        if y.len() != geom.n {
            return invalid(format!("initial condition has {} entries, expected N={}", y.len(), geom.n));
        }
        if y.windows(2).any(|w| w[0] >= w[1]) || y[geom.n - 1] >= y[0] + geom.l as i64 {
            return invalid("initial condition must satisfy x_1 < x_2 < ... < x_N < x_1 + L");
        }
        Ok(Self { y })
    }

    /// Step initial condition `y_i = i − N`.
    pub fn step(geom: RingGeometry) -> Self {
        Self { y: (1..=geom.n as i64).map(|i| i - geom.n as i64).collect() }
    }
}

/// A probability computed from a contour integral.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionResult {
    pub value: f64,
    /// `|Im|` of the raw integral.
    pub im_residue: f64,
    pub nodes: usize,
    pub last_delta: f64,
    pub converged: bool,
    pub radii: Vec<f64>,
}

/// Default nested radii `|z_j| = 0.9·r₀·0.7^{j−1}`.
pub fn default_finite_scheme(geom: RingGeometry, m: usize) -> ContourScheme {
    let r0 = geom.r0();
    ContourScheme::new((0..m).map(|j| 0.9 * r0 * 0.7f64.powi(j as i32)).collect())
}

/// Radii whose levels `|z_j/r₀|^L` equal the given values, for large rings
/// where the default radii push `|z^L|` far below the scale of the problem.
pub fn level_scaled_scheme(geom: RingGeometry, scaled_levels: &[f64]) -> ContourScheme {
    let r0 = geom.r0();
    ContourScheme::new(scaled_levels.iter().map(|s| r0 * s.powf(1.0 / geom.l as f64)).collect())
}

/// Move `k` into `{1..N}` using `x_{k+nN} = x_k + nL`.
pub fn translate_query(geom: RingGeometry, k: i64, a: i64) -> (i64, i64) {
    let (n, l) = (geom.n as i64, geom.l as i64);
    let shift = (k - 1).div_euclid(n);
    (k - shift * n, a - shift * l)
}
