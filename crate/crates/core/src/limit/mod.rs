//! The large-time limit `F(x_1, …, x_m; p_1, …, p_m) = ∮…∮ C(z) D(z)` of the
//! joint distribution of scaled heights, with `D = det(I − K₁K₂)` on the
//! root lattices `e^{−ζ²/2} = z_ℓ`.

mod eval;
mod kernel;
mod props;
mod roots;
mod series;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numerics::Execution;

pub use eval::{default_limit_scheme, eval_f, eval_f_mixed, limit_integrand, LimitDistribution};
pub use kernel::{build_limit_kernels, eval_c_limit, eval_d_limit, LimitEvaluator, LIMIT_ENTRY_FLOOR};
pub use props::{
    check_consistency, check_contour_exchange, check_gamma_periodicity, check_residue_collapse, check_stability,
    check_sylvester, ConsistencyReport, ContourExchangeReport, ResidueCollapseReport, StabilityReport,
};
pub use roots::{branch_root, limit_roots, limit_roots_branches, LevelDecay, LimitRootSet, TruncationConfig};
pub use series::eval_d_series_limit;

/// One probe `(γ, τ, x)`: the scaled height at spatial position `γ` and
/// time `τ` lies below `x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledPoint {
    pub gamma: f64,
    pub tau: f64,
    pub x: f64,
}

/// `m` probes with `0 < τ_1 ≤ … ≤ τ_m`; a tie `τ_i = τ_{i+1}` requires
/// `x_i < x_{i+1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledQuery {
    pub points: Vec<ScaledPoint>,
}

impl ScaledQuery {
    pub fn new(points: Vec<ScaledPoint>) -> Result<Self> {
        if points.is_empty() {
            return invalid("a query needs at least one probe");
        }
        if points.iter().any(|p| !(p.gamma.is_finite() && p.tau.is_finite() && p.x.is_finite())) {
            return invalid("probe parameters must be finite");
        }
        if points.iter().any(|p| p.tau <= 0.0) {
            return invalid("probe times must be positive");
        }
        for (i, w) in points.windows(2).enumerate() {
            if w[1].tau < w[0].tau {
                return invalid("probe times must be non-decreasing");
            }
            if w[1].tau == w[0].tau && w[1].x <= w[0].x {
                return invalid(format!("equal times at probes {} and {} need x_{} < x_{}", i + 1, i + 2, i + 1, i + 2));
            }
        }
        Ok(Self { points })
    }

    pub fn single(gamma: f64, tau: f64, x: f64) -> Result<Self> {
        Self::new(vec![ScaledPoint { gamma, tau, x }])
    }

    pub fn m(&self) -> usize {
        self.points.len()
    }

    /// The query with probe `k` (1-based) removed.
    pub fn without(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.m() || self.m() == 1 {
            return invalid(format!("cannot remove probe {k} from a {}-point query", self.m()));
        }
        let mut points = self.points.clone();
        points.remove(k - 1);
        Self::new(points)
    }

    /// The query with `x` replaced.
    pub fn with_x(&self, x: &[f64]) -> Result<Self> {
        if x.len() != self.m() {
            return invalid(format!("{} thresholds for {} probes", x.len(), self.m()));
        }
        Self::new(self.points.iter().zip(x).map(|(p, &x)| ScaledPoint { x, ..*p }).collect())
    }

    /// Increments `(Δτ, Δγ, Δx)` at level `i` (1-based) with `τ₀ = γ₀ = x₀ = 0`.
    pub fn decay(&self, i: usize) -> LevelDecay {
        let cur = self.points[i - 1];
        let prev = if i >= 2 { self.points[i - 2] } else { ScaledPoint { gamma: 0.0, tau: 0.0, x: 0.0 } };
        LevelDecay { dtau: cur.tau - prev.tau, dgamma: cur.gamma - prev.gamma, dx: cur.x - prev.x }
    }
}

/// Truncation, kernel and execution settings of the limit evaluators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitOptions {
    pub truncation: TruncationConfig,
    /// Balanced kernel entries below this modulus are stored as zeros.
    pub kernel_floor: f64,
    pub exec: Execution,
}

impl Default for LimitOptions {
    fn default() -> Self {
        Self { truncation: TruncationConfig::default(), kernel_floor: LIMIT_ENTRY_FLOOR, exec: Execution::default() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(gamma: f64, tau: f64, x: f64) -> ScaledPoint {
        ScaledPoint { gamma, tau, x }
    }

    #[test]
    fn query_validation() {
        assert!(ScaledQuery::new(vec![]).is_err());
        assert!(ScaledQuery::single(0.0, 0.0, 1.0).is_err());
        assert!(ScaledQuery::new(vec![p(0.0, 2.0, 0.0), p(0.0, 1.0, 0.0)]).is_err());
        assert!(ScaledQuery::new(vec![p(0.0, 1.0, 0.5), p(0.3, 1.0, 0.5)]).is_err());
        assert!(ScaledQuery::new(vec![p(0.0, 1.0, 0.5), p(0.3, 1.0, 0.7)]).is_ok());
    }

    #[test]
    fn decay_uses_zero_origin() {
        let q = ScaledQuery::new(vec![p(0.2, 1.0, -1.0), p(0.5, 3.0, 2.0)]).unwrap();
        assert_eq!(q.decay(1), LevelDecay { dtau: 1.0, dgamma: 0.2, dx: -1.0 });
        assert_eq!(q.decay(2), LevelDecay { dtau: 2.0, dgamma: 0.3, dx: 3.0 });
        let r = q.without(1).unwrap();
        assert_eq!(r.decay(1), LevelDecay { dtau: 3.0, dgamma: 0.5, dx: 2.0 });
    }
}
