//! Quadrature and determinant properties.

use num_complex::Complex64;
use proptest::prelude::*;

use ptasep_core::numerics::{det_complex, nested_contour_integral, ComplexMatrix, ContourScheme, Execution};

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(complex(), n * n).prop_map(move |v| ComplexMatrix::from_rows(n, n, v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trapezoid_is_exact_for_laurent_monomials(k in -15i32..16, r in 0.3..2.0f64, phase in 0.0..6.3f64) {
        let scheme = ContourScheme::fixed(vec![r], 16).with_phases(vec![phase]);
        let out = nested_contour_integral(|z| Ok(z[0].powi(k)), &scheme, Execution::Sequential).unwrap();
        let expected = if k == 0 { 1.0 } else { 0.0 };
        prop_assert!((out.value - expected).norm() < 1e-12 * r.powi(k).max(1.0), "k={k}: {}", out.value);
    }

    #[test]
    fn determinant_is_multiplicative((a, b) in (1usize..7).prop_flat_map(|n| (matrix(n), matrix(n)))) {
        let lhs = det_complex(&a.mul(&b)).unwrap();
        let rhs = det_complex(&a).unwrap() * det_complex(&b).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1e-12), "{lhs} vs {rhs}");
    }

    #[test]
    fn nested_integral_ignores_starting_phase(p1 in 0.0..6.3f64, p2 in 0.0..6.3f64, a in complex()) {
        // 1/(1 - z2/z1) with |z2| < |z1| has mean 1 over both circles; the extra factors keep it non-trivial
        let f = move |z: &[Complex64]| Ok((a * z[0] + 2.0) / (1.0 - z[1] / z[0]) * (1.0 + z[1] * z[1]));
        let base = ContourScheme::new(vec![1.0, 0.5]).with_tol(1e-12);
        let turned = base.clone().with_phases(vec![p1, p2]);
        let v0 = nested_contour_integral(f, &base, Execution::Sequential).unwrap().value;
        let v1 = nested_contour_integral(f, &turned, Execution::Sequential).unwrap().value;
        prop_assert!((v0 - v1).norm() < 1e-10, "{v0} vs {v1}");
        prop_assert!((v0 - 2.0).norm() < 1e-10);
    }
}
