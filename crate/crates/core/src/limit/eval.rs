//! Contour integration of `C(z) D(z)` over nested circles.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::kernel::{LimitEvaluator, MAX_LIMIT_RADIUS};
use super::{LimitOptions, ScaledQuery};
use crate::error::{invalid, Result};
use crate::finite::{check_nested, mixed_sign, to_result, DistributionResult, Sign};
use crate::numerics::{nested_contour_integral, ContourScheme};

/// A limit probability with its quadrature and truncation diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitDistribution {
    #[serde(flatten)]
    pub dist: DistributionResult,
    /// Largest root branch `|k|` used by any level.
    pub k_max: usize,
    /// Whether the branch cap stopped a lattice before the decay threshold.
    pub capped: bool,
}

impl LimitDistribution {
    pub fn value(&self) -> f64 {
        self.dist.value
    }
}

/// Default radii `|z_j| = 0.8·0.6^{j−1}`.
pub fn default_limit_scheme(m: usize) -> ContourScheme {
    ContourScheme::new((0..m).map(|j| 0.8 * 0.6f64.powi(j as i32)).collect())
}

fn check_radii(q: &ScaledQuery, scheme: &ContourScheme) -> Result<f64> {
    if scheme.radii.len() != q.m() {
        return invalid(format!("{} radii for {} probes", scheme.radii.len(), q.m()));
    }
    if scheme.radii.iter().any(|&r| !(r > 0.0 && r <= MAX_LIMIT_RADIUS)) {
        return invalid(format!("limit radii must lie in (0, {MAX_LIMIT_RADIUS}]"));
    }
    Ok(scheme.radii.iter().copied().fold(0.0, f64::max))
}

/// `C(z) D(z)` at one node; the evaluator caches per-level data.
pub fn limit_integrand(ev: &LimitEvaluator, zs: &[Complex64]) -> Result<Complex64> {
    ev.integrand(zs)
}

fn integrate(q: &ScaledQuery, scheme: &ContourScheme, opts: &LimitOptions, sign: f64) -> Result<LimitDistribution> {
    let zmax = check_radii(q, scheme)?;
    let ev = LimitEvaluator::new(q, opts, zmax)?;
    let out = nested_contour_integral(|z| ev.integrand(z), scheme, opts.exec)?;
    Ok(LimitDistribution { dist: to_result(out, &scheme.radii, sign), k_max: ev.k_max(), capped: ev.capped() })
}

/// The integral of `C(z) D(z)` on the given circles, in any order.
pub(crate) fn eval_raw(q: &ScaledQuery, scheme: &ContourScheme, opts: &LimitOptions) -> Result<Complex64> {
    let zmax = check_radii(q, scheme)?;
    let ev = LimitEvaluator::new(q, opts, zmax)?;
    Ok(nested_contour_integral(|z| ev.integrand(z), scheme, opts.exec)?.value)
}

/// `F(x_1, …, x_m; p_1, …, p_m)` on nested circles `|z_m| < … < |z_1| ≤ 0.9`.
pub fn eval_f(q: &ScaledQuery, scheme: &ContourScheme, opts: &LimitOptions) -> Result<LimitDistribution> {
    check_nested(&scheme.radii)?;
    integrate(q, scheme, opts, 1.0)
}

/// Probability of `E_1 ∩ … ∩ E_m` where `Minus` is the event that the scaled
/// height lies below `x_j` and `Plus` its complement; the last sign must be
/// `Minus`.
///
/// After a `Minus` probe the circles satisfy `|z_j| > |z_{j+1}|`, after a
/// `Plus` probe `|z_j| < |z_{j+1}|`; each `Plus` contributes a factor `−1`.
pub fn eval_f_mixed(q: &ScaledQuery, signs: &[Sign], scheme: &ContourScheme, opts: &LimitOptions) -> Result<LimitDistribution> {
    check_radii(q, scheme)?;
    let sign = mixed_sign(signs, &scheme.radii)?;
    integrate(q, scheme, opts, sign)
}
