//! Transition probability
//! `P_X(X′; t) = ∮ det[(1/L) Σ_w w^{j−i+1} (w+1)^{−x′_i+x_j+i−j} e^{tw} / (w+ρ)] dz/(2πiz)`,
//! the sum running over all `L` roots of level `z^L`.

use num_complex::Complex64;

use super::query::{DistributionResult, InitialCondition};
use super::step::{level_scheme, to_result};
use super::FiniteOptions;
use crate::bethe::{BetheRootSet, RingGeometry, RootCache};
use crate::error::{invalid, Result};
use crate::numerics::{det_complex, nested_contour_integral, pairwise_sum, powi_log, ComplexMatrix, ContourScheme};

/// Integrand of the transition probability at one root set.
pub fn transition_integrand(
    geom: RingGeometry,
    x: &InitialCondition,
    xp: &InitialCondition,
    t: f64,
    rs: &BetheRootSet,
) -> Result<Complex64> {
    let n = geom.n;
    let rho = geom.rho();
    let roots: Vec<Complex64> = rs.all().copied().collect();
    let base: Vec<Complex64> = roots.iter().map(|&w| (w * t).exp() / (w + rho)).collect();
    let m = ComplexMatrix::from_fn(n, n, |i, j| {
        let (ii, jj) = (i as i64 + 1, j as i64 + 1);
        let terms: Vec<Complex64> = roots
            .iter()
            .zip(&base)
            .map(|(&w, &b)| powi_log(w, jj - ii + 1) * powi_log(w + 1.0, -xp.y[i] + x.y[j] + ii - jj) * b)
            .collect();
        pairwise_sum(&terms) / geom.l as f64
    });
    det_complex(&m)
}

/// `P_X(X′; t)` on a circle `|z| = radius` (any radius in `(0, r₀)`).
pub fn transition_probability(
    geom: RingGeometry,
    x: &InitialCondition,
    xp: &InitialCondition,
    t: f64,
    scheme: &ContourScheme,
    opts: &FiniteOptions,
) -> Result<DistributionResult> {
    InitialCondition::new(geom, x.y.clone())?;
    InitialCondition::new(geom, xp.y.clone())?;
    if !(t.is_finite() && t >= 0.0) {
        return invalid("time must be finite and non-negative");
    }
    if scheme.dim() != 1 {
        return invalid("the transition probability is a single contour integral");
    }
    let cache = RootCache::new(geom, opts.solver.clone());
    let ls = level_scheme(geom, scheme)?;
    let out = nested_contour_integral(|z| transition_integrand(geom, x, xp, t, &*cache.get(z[0])?), &ls, opts.exec)?;
    Ok(to_result(out, &scheme.radii, 1.0))
}
