use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{map_indexed, pairwise_sum, Execution};
use crate::error::{invalid, Error, Result};

/// Nested circles and trapezoid settings for an m-fold contour integral.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourScheme {
    /// One radius per integration variable, in variable order.
    pub radii: Vec<f64>,
    /// Starting node count per circle.
    pub nodes_per_circle: usize,
    /// Double the node count until successive estimates agree to `tol`.
    pub adaptive: bool,
    pub tol: f64,
    pub max_doublings: usize,
    /// Angle of node 0 on each circle; missing entries default to 0.
    #[serde(default)]
    pub phases: Vec<f64>,
}

impl ContourScheme {
    /// Adaptive scheme starting at 64 nodes per circle. The doubling cap
    /// shrinks with the dimension so a non-converging integrand stops after
    /// at most `512²` (m = 2) or `128^m` (m ≥ 3) evaluations.
    pub fn new(radii: Vec<f64>) -> Self {
        let max_doublings = match radii.len() {
            0 | 1 => 6,
            2 => 3,
            _ => 1,
        };
        Self { radii, nodes_per_circle: 64, adaptive: true, tol: 1e-8, max_doublings, phases: Vec::new() }
    }

    pub fn fixed(radii: Vec<f64>, nodes: usize) -> Self {
        Self { adaptive: false, nodes_per_circle: nodes, ..Self::new(radii) }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes_per_circle = nodes;
        self
    }

    pub fn with_phases(mut self, phases: Vec<f64>) -> Self {
        self.phases = phases;
        self
    }

    pub fn dim(&self) -> usize {
        self.radii.len()
    }

    fn phase(&self, j: usize) -> f64 {
        self.phases.get(j).copied().unwrap_or(0.0)
    }

    /// Node `k` of `n` on circle `j`.
    pub fn node(&self, j: usize, k: usize, n: usize) -> Complex64 {
        Complex64::from_polar(self.radii[j], self.phase(j) + 2.0 * PI * k as f64 / n as f64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.radii.is_empty() {
            return invalid("contour scheme without circles");
        }
        if self.radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return invalid("contour radii must be positive and finite");
        }
        if self.nodes_per_circle < 8 {
            return invalid("at least 8 nodes per circle are required");
        }
        if self.adaptive && !self.nodes_per_circle.is_power_of_two() {
            return invalid("adaptive quadrature needs a power-of-two node count");
        }
        Ok(())
    }
}

/// Result of a nested contour integral.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureOutcome {
    pub value: Complex64,
    /// Nodes per circle used for `value`.
    pub nodes: usize,
    /// `|I_n − I_{n/2}|` for the last doubling (NaN when not adaptive).
    pub last_delta: f64,
    pub converged: bool,
}

const CHUNK: usize = 256;

/// m-fold tensor trapezoid rule for `∮…∮ f(z) Π dz_j/(2πi z_j)`, i.e. the mean
/// of `f` over equally spaced phases on each circle.
///
/// The node sum is reduced in fixed-size chunks followed by a pairwise tree,
/// so the result is bit-identical for a given node count regardless of the
/// execution strategy. When adaptive, every doubling reuses the previous
/// nodes. Non-convergence is reported through `converged`, not as an error;
/// errors from `f` are propagated.
pub fn nested_contour_integral<F>(f: F, scheme: &ContourScheme, exec: Execution) -> Result<QuadratureOutcome>
where
    F: Fn(&[Complex64]) -> Result<Complex64> + Sync + Send,
{
    scheme.validate()?;
    let m = scheme.dim();
    let mut n = scheme.nodes_per_circle;
    let mut total = grid_sum(&f, scheme, n, false, exec)?;
    let mut value = total / (n as f64).powi(m as i32);
    if !scheme.adaptive {
        return Ok(QuadratureOutcome { value, nodes: n, last_delta: f64::NAN, converged: true });
    }
    let mut last_delta = f64::INFINITY;
    for _ in 0..scheme.max_doublings {
        n *= 2;
        total += grid_sum(&f, scheme, n, true, exec)?;
        let next = total / (n as f64).powi(m as i32);
        last_delta = (next - value).norm();
        value = next;
        if last_delta < scheme.tol {
            return Ok(QuadratureOutcome { value, nodes: n, last_delta, converged: true });
        }
    }
    Ok(QuadratureOutcome { value, nodes: n, last_delta, converged: false })
}

/// Sum of `f` over the `n^m` grid; with `skip_even` the points already present
/// on the `n/2` grid (all indices even) are left out.
fn grid_sum<F>(f: &F, scheme: &ContourScheme, n: usize, skip_even: bool, exec: Execution) -> Result<Complex64>
where
    F: Fn(&[Complex64]) -> Result<Complex64> + Sync + Send,
{
    let m = scheme.dim();
    let count = n.checked_pow(m as u32).ok_or_else(|| Error::InvalidInput("quadrature grid too large".into()))?;
    let circles: Vec<Vec<Complex64>> = (0..m).map(|j| (0..n).map(|k| scheme.node(j, k, n)).collect()).collect();
    let chunks = count.div_ceil(CHUNK);
    let partial: Vec<Result<Complex64>> = map_indexed(exec, chunks, |c| {
        let start = c * CHUNK;
        let end = (start + CHUNK).min(count);
        let mut vals = Vec::with_capacity(end - start);
        let mut z = vec![Complex64::new(0.0, 0.0); m];
        for flat in start..end {
            let mut rest = flat;
            let mut all_even = true;
            for (j, zj) in z.iter_mut().enumerate() {
                let k = rest % n;
                rest /= n;
                all_even &= k.is_multiple_of(2);
                *zj = circles[j][k];
            }
            if skip_even && all_even {
                continue;
            }
            vals.push(f(&z)?);
        }
        Ok(pairwise_sum(&vals))
    });
    let partial: Vec<Complex64> = partial.into_iter().collect::<Result<_>>()?;
    Ok(pairwise_sum(&partial))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(v: Complex64) -> Result<Complex64> {
        Ok(v)
    }

    #[test]
    fn constant_and_monomials() {
        let s = ContourScheme::fixed(vec![0.7], 16);
        let one = nested_contour_integral(|_| ok(Complex64::new(1.0, 0.0)), &s, Execution::Sequential).unwrap();
        assert!((one.value - 1.0).norm() < 1e-15);
        for k in [-15i32, -3, 1, 7, 15] {
            let v = nested_contour_integral(|z| ok(z[0].powi(k)), &s, Execution::Sequential).unwrap();
            assert!(v.value.norm() < 1e-14 * 0.7f64.powi(k).max(1.0), "k={k}: {}", v.value);
        }
    }

    #[test]
    fn nested_geometric_series() {
        let s = ContourScheme::new(vec![1.0, 0.5]).with_tol(1e-13);
        let v = nested_contour_integral(|z| ok(z[0] / (z[0] - z[1])), &s, Execution::Parallel).unwrap();
        assert!(v.converged);
        assert!((v.value - 1.0).norm() < 1e-13);
    }

    #[test]
    fn parallel_matches_sequential_bitwise() {
        let s = ContourScheme::fixed(vec![0.9, 0.4], 64);
        let f = |z: &[Complex64]| ok((z[0] * z[1]).exp() / (z[0] - z[1]));
        let a = nested_contour_integral(f, &s, Execution::Parallel).unwrap();
        let b = nested_contour_integral(f, &s, Execution::Sequential).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn errors_propagate() {
        let s = ContourScheme::fixed(vec![0.5], 8);
        let r = nested_contour_integral(|_| Err(Error::Overflow("x".into())), &s, Execution::Sequential);
        assert!(r.is_err());
    }
}
