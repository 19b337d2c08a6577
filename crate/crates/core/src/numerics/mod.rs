//! Complex utilities, dense determinants and the nested contour quadrature
//! engine shared by all formula evaluators.

mod exec;
mod matrix;
mod quadrature;

pub use exec::{map_indexed, Execution};
pub use matrix::{cauchy_det, det_complex, ComplexMatrix};
pub use quadrature::{nested_contour_integral, ContourScheme, QuadratureOutcome};

use num_complex::Complex64;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Pairwise (tree) summation. The reduction order depends only on the length.
pub fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    const BLOCK: usize = 8;
    if xs.len() <= BLOCK {
        return xs.iter().fold(Complex64::new(0.0, 0.0), |a, &b| a + b);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Pairwise (tree) product.
pub fn pairwise_product(xs: &[Complex64]) -> Complex64 {
    const BLOCK: usize = 8;
    if xs.len() <= BLOCK {
        return xs.iter().fold(Complex64::new(1.0, 0.0), |a, &b| a * b);
    }
    let mid = xs.len() / 2;
    pairwise_product(&xs[..mid]) * pairwise_product(&xs[mid..])
}

/// `Π_{a∈xs, b∈ys} (a − b)`.
pub fn cross_product(xs: &[Complex64], ys: &[Complex64]) -> Complex64 {
    let terms: Vec<Complex64> = xs.iter().flat_map(|&a| ys.iter().map(move |&b| a - b)).collect();
    pairwise_product(&terms)
}

/// `Σ_{a∈xs, b∈ys} log(a − b)` on the principal branch; only `exp` of the
/// result is meaningful.
pub fn cross_log(xs: &[Complex64], ys: &[Complex64]) -> Complex64 {
    let terms: Vec<Complex64> = xs.iter().flat_map(|&a| ys.iter().map(move |&b| (a - b).ln())).collect();
    pairwise_sum(&terms)
}

/// Vandermonde-type product `Π_{i<j} (x_j − x_i)`.
pub fn vandermonde(xs: &[Complex64]) -> Complex64 {
    let mut terms = Vec::with_capacity(xs.len() * xs.len() / 2);
    for j in 0..xs.len() {
        for i in 0..j {
            terms.push(xs[j] - xs[i]);
        }
    }
    pairwise_product(&terms)
}

/// Relative distance `|a − b| / max(|a|, |b|, floor)`.
pub fn rel_err(a: Complex64, b: Complex64, floor: f64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(floor)
}

/// Integer power of a complex number computed through the logarithm, for
/// exponents large enough that repeated squaring would under/overflow in
/// intermediate steps.
pub fn powi_log(w: Complex64, n: i64) -> Complex64 {
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    (w.ln() * n as f64).exp()
}
