//! Structural checks of the limit distribution: consistency as a threshold
//! grows, collapse of coincident levels, contour exchange, periodicity in
//! `γ`, the Sylvester identity and truncation stability.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eval::{default_limit_scheme, eval_f};
use super::kernel::{build_limit_kernels, eval_c_limit, eval_d_limit};
use super::{LimitOptions, ScaledQuery};
use crate::error::{invalid, Result};
use crate::numerics::ContourScheme;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    /// The probe (1 or 2) whose threshold is sent to `+∞`.
    pub probe: usize,
    /// `F^{(1)}` at the remaining probe.
    pub marginal: f64,
    pub large_x: Vec<f64>,
    /// `F^{(2)}` with the chosen threshold set to each `X`.
    pub joint: Vec<f64>,
    /// `|F^{(2)} − F^{(1)}|` for each `X`.
    pub gaps: Vec<f64>,
    pub decreasing: bool,
    /// For `probe = 1`: `1 − F^{(1)}(X; p_1)`, which bounds the gap because
    /// `F^{(1)}(x_2) − F^{(2)}(X, x_2)` is the probability that the first
    /// height exceeds `X` while the second does not. Empty for `probe = 2`.
    pub bounds: Vec<f64>,
}

/// `F^{(2)} → F^{(1)}` as the threshold `x` of `probe` grows; `x_other` is
/// the threshold of the other probe.
pub fn check_consistency(q2: &ScaledQuery, probe: usize, x_other: f64, large_x: &[f64], opts: &LimitOptions) -> Result<ConsistencyReport> {
    if q2.m() != 2 || !(probe == 1 || probe == 2) {
        return invalid("the consistency check takes a two-point query and probe 1 or 2");
    }
    let other = 3 - probe;
    let q1 = q2.without(probe)?.with_x(&[x_other])?;
    let marginal = eval_f(&q1, &default_limit_scheme(1), opts)?.value();
    let mut joint = Vec::with_capacity(large_x.len());
    let mut bounds = Vec::new();
    for &x in large_x {
        let mut xs = [0.0; 2];
        xs[probe - 1] = x;
        xs[other - 1] = x_other;
        joint.push(eval_f(&q2.with_x(&xs)?, &default_limit_scheme(2), opts)?.value());
        if probe == 1 {
            let q_first = q2.without(2)?.with_x(&[x])?;
            bounds.push(1.0 - eval_f(&q_first, &default_limit_scheme(1), opts)?.value());
        }
    }
    let gaps: Vec<f64> = joint.iter().map(|j| (j - marginal).abs()).collect();
    let decreasing = gaps.windows(2).all(|w| w[1] <= w[0]);
    Ok(ConsistencyReport { probe, marginal, large_x: large_x.to_vec(), joint, gaps, decreasing, bounds })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidueCollapseReport {
    pub deltas: Vec<f64>,
    /// `D^{(m)}` at `z_k = z_{k+1}(1 + δ)`.
    pub values: Vec<Complex64>,
    /// Linear extrapolation to `δ = 0` from the two smallest `δ`.
    pub extrapolated: Complex64,
    /// `D^{(m−1)}` with level `k` and probe `k` removed.
    pub target: Complex64,
    pub d_error: f64,
    /// `|(z_k − z_{k+1}) C^{(m)} − z_{k+1} C^{(m−1)}|` relative to the right
    /// side, after the same extrapolation.
    pub c_error: f64,
}

/// Collapse of level `k` onto level `k + 1` (both 1-based, `k < m`).
pub fn check_residue_collapse(
    zs: &[Complex64],
    k: usize,
    q: &ScaledQuery,
    deltas: &[f64],
    opts: &LimitOptions,
) -> Result<ResidueCollapseReport> {
    let m = q.m();
    if zs.len() != m || k == 0 || k >= m {
        return invalid("collapse needs m >= 2 levels and 1 <= k < m");
    }
    if deltas.len() < 2 {
        return invalid("collapse needs at least two offsets");
    }
    let reduced_q = q.without(k)?;
    let mut reduced_z = zs.to_vec();
    reduced_z.remove(k - 1);
    let target = eval_d_limit(&reduced_z, &reduced_q, opts)?;
    let c_reduced = eval_c_limit(&reduced_z, &reduced_q)?;
    let at = |d: f64| {
        let mut z = zs.to_vec();
        z[k - 1] = zs[k] * (1.0 + d);
        z
    };
    let mut values = Vec::with_capacity(deltas.len());
    for &d in deltas {
        values.push(eval_d_limit(&at(d), q, opts)?);
    }
    let mut order: Vec<usize> = (0..deltas.len()).collect();
    order.sort_by(|&a, &b| deltas[a].abs().total_cmp(&deltas[b].abs()));
    let (i1, i2) = (order[0], order[1]);
    let (d1, d2) = (deltas[i1], deltas[i2]);
    let extrapolated = (values[i1] * d2 - values[i2] * d1) / (d2 - d1);
    let scaled_c = |d: f64| -> Result<Complex64> {
        let z = at(d);
        Ok((z[k - 1] - z[k]) * eval_c_limit(&z, q)?)
    };
    let lhs = (scaled_c(d1)? * d2 - scaled_c(d2)? * d1) / (d2 - d1);
    let rhs = zs[k] * c_reduced;
    Ok(ResidueCollapseReport {
        deltas: deltas.to_vec(),
        values,
        extrapolated,
        target,
        d_error: (extrapolated - target).norm(),
        c_error: (lhs - rhs).norm() / rhs.norm(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourExchangeReport {
    /// `F^{(2)}` on `|z_1| > |z_2|`.
    pub nested: f64,
    /// The same integrand on `|z_1| < |z_2|`.
    pub swapped: f64,
    /// `F^{(1)}(x_2; p_2)`.
    pub marginal: f64,
    /// `|nested − swapped − marginal|`.
    pub residual: f64,
}

/// Moving `z_1` inside `z_2` picks up the residue at `z_1 = z_2`, which is
/// the one-point function of the second probe.
pub fn check_contour_exchange(q2: &ScaledQuery, outer: f64, inner: f64, opts: &LimitOptions) -> Result<ContourExchangeReport> {
    if q2.m() != 2 || !(inner < outer) {
        return invalid("contour exchange takes a two-point query and inner < outer");
    }
    let nested = eval_f(q2, &ContourScheme::new(vec![outer, inner]), opts)?.value();
    let swapped = super::eval::eval_raw(q2, &ContourScheme::new(vec![inner, outer]), opts)?.re;
    let marginal = eval_f(&q2.without(1)?, &default_limit_scheme(1), opts)?.value();
    Ok(ContourExchangeReport { nested, swapped, marginal, residual: (nested - swapped - marginal).abs() })
}

/// `|F(q) − F(q with γ_i + 1)|` for each probe `i`.
pub fn check_gamma_periodicity(q: &ScaledQuery, scheme: &ContourScheme, opts: &LimitOptions) -> Result<Vec<f64>> {
    let base = eval_f(q, scheme, opts)?.value();
    let mut out = Vec::with_capacity(q.m());
    for i in 0..q.m() {
        let mut shifted = q.clone();
        shifted.points[i].gamma += 1.0;
        out.push((eval_f(&shifted, scheme, opts)?.value() - base).abs());
    }
    Ok(out)
}

/// `|det(I − K₁K₂) − det(I − K₂K₁)|` at `z`.
pub fn check_sylvester(zs: &[Complex64], q: &ScaledQuery, opts: &LimitOptions) -> Result<f64> {
    let kp = build_limit_kernels(zs, q, opts)?;
    Ok((kp.det_k1k2()? - kp.det_k2k1()?).norm())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub base: f64,
    pub base_nodes: usize,
    pub base_k_max: usize,
    /// Twice as many root branches (per side, plus one).
    pub more_branches: f64,
    pub more_branches_k_max: usize,
    /// Twice the converged node count, fixed.
    pub more_nodes: f64,
    pub max_diff: f64,
}

/// Change of `F` under doubling the root branches and the quadrature nodes.
pub fn check_stability(q: &ScaledQuery, scheme: &ContourScheme, opts: &LimitOptions) -> Result<StabilityReport> {
    let base = eval_f(q, scheme, opts)?;
    let mut wide = opts.clone();
    wide.truncation.branch_multiplier *= 2;
    let more_b = eval_f(q, scheme, &wide)?;
    let more_n = eval_f(q, &ContourScheme::fixed(scheme.radii.clone(), 2 * base.dist.nodes), opts)?;
    let max_diff = (more_b.value() - base.value()).abs().max((more_n.value() - base.value()).abs());
    Ok(StabilityReport {
        base: base.value(),
        base_nodes: base.dist.nodes,
        base_k_max: base.k_max,
        more_branches: more_b.value(),
        more_branches_k_max: more_b.k_max,
        more_nodes: more_n.value(),
        max_diff,
    })
}
