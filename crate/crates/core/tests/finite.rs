//! Properties of the finite-time formulas.

use num_complex::Complex64;
use proptest::prelude::*;

use ptasep_core::bethe::{solve_bethe_level, BetheRootSet, RingGeometry, RootSolverConfig};
use ptasep_core::finite::{
    default_finite_scheme, joint_cdf_step, mixed_event_prob_finite, mixed_radii, step_kernels, step_series_d, FiniteOptions,
    FiniteQuery, InitialCondition, ProbePoint, Sign,
};
use ptasep_core::numerics::ContourScheme;
use ptasep_core::sim::{exact_cdf_small, ExactOptions};

fn geom() -> RingGeometry {
    RingGeometry::new(6, 3).unwrap()
}

fn query(points: &[(i64, i64, f64)]) -> FiniteQuery {
    FiniteQuery::new(points.iter().map(|&(k, a, t)| ProbePoint { k, a, t }).collect()).unwrap()
}

fn step(q: &FiniteQuery, scheme: &ContourScheme) -> f64 {
    let r = joint_cdf_step(geom(), q, scheme, &FiniteOptions::default()).unwrap();
    assert!(r.converged && r.im_residue < 1e-8, "{r:?}");
    r.value
}

fn levels(g: RingGeometry, zs: &[Complex64]) -> Vec<BetheRootSet> {
    zs.iter().map(|&z| solve_bethe_level(g, z, &RootSolverConfig::default()).unwrap()).collect()
}

fn fredholm(g: RingGeometry, q: &FiniteQuery, zs: &[Complex64]) -> Complex64 {
    let sets = levels(g, zs);
    let refs: Vec<&BetheRootSet> = sets.iter().collect();
    step_kernels(g, q, &refs).fredholm_det().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn radius_perturbation_leaves_value_unchanged(k in 1i64..4, a in -2i64..3, t in 0.3..2.0f64, s1 in -0.1..0.1f64, s2 in -0.1..0.1f64) {
        let q = query(&[(k, a, t), (k.max(2), a + 1, t + 0.5)]);
        let base = default_finite_scheme(geom(), 2).with_tol(1e-11);
        let moved = ContourScheme::new(vec![base.radii[0] * (1.0 + s1).min(1.05), base.radii[1] * (1.0 + s2)]).with_tol(1e-11);
        let (p0, p1) = (step(&q, &base), step(&q, &moved));
        prop_assert!((p0 - p1).abs() < 1e-8, "{p0} vs {p1}");
    }

    #[test]
    fn probabilities_are_bounded_and_monotone_in_a(k in 1i64..4, a in -3i64..3, t in 0.2..3.0f64) {
        let scheme = default_finite_scheme(geom(), 1).with_tol(1e-10);
        let p = step(&query(&[(k, a, t)]), &scheme);
        let p_next = step(&query(&[(k, a + 1, t)]), &scheme);
        prop_assert!((-1e-10..=1.0 + 1e-10).contains(&p), "{p}");
        prop_assert!(p_next <= p + 1e-10, "P(x >= a+1) = {p_next} > P(x >= a) = {p}");
    }

    #[test]
    fn series_matches_fredholm_determinant(r1 in 0.05..0.9f64, r2 in 0.05..0.9f64, th1 in 0.0..std::f64::consts::TAU, th2 in 0.0..std::f64::consts::TAU) {
        let g = RingGeometry::new(5, 2).unwrap();
        let top = g.r0().powi(5);
        let zs = [Complex64::from_polar(r1 * top, th1), Complex64::from_polar(r2 * top, th2)];
        prop_assume!((zs[0] - zs[1]).norm() > 1e-3 * top);
        let q = query(&[(1, 0, 0.4), (2, 1, 1.1)]);
        let sets = levels(g, &zs);
        let refs: Vec<&BetheRootSet> = sets.iter().collect();
        let det = step_kernels(g, &q, &refs).det_k2k1().unwrap();
        let series = step_series_d(g, &q, &refs).unwrap();
        prop_assert!((series - det).norm() <= 1e-10 * det.norm().max(1.0), "{series} vs {det}");
    }
}

#[test]
fn determinant_is_continuous_across_equal_moduli() {
    let g = geom();
    let q = query(&[(1, 0, 0.5), (2, 1, 1.0)]);
    let top = g.r0().powi(6);
    let z1 = Complex64::from_polar(0.5 * top, 0.3);
    let at_equal = fredholm(g, &q, &[z1, Complex64::from_polar(0.5 * top, 1.1)]);
    for eps in [1e-4, 1e-7] {
        for sign in [1.0, -1.0] {
            let near = fredholm(g, &q, &[z1, Complex64::from_polar(0.5 * top * (1.0 + sign * eps), 1.1)]);
            assert!((near - at_equal).norm() < 1e3 * eps * at_equal.norm().max(1.0), "eps={eps}: {near} vs {at_equal}");
        }
    }
}

#[test]
fn complementary_signs_sum_to_the_marginal() {
    let g = geom();
    let q = query(&[(2, 0, 0.7), (3, 2, 1.5)]);
    let opts = FiniteOptions::default();
    let minus = joint_cdf_step(g, &q, &default_finite_scheme(g, 2).with_tol(1e-11), &opts).unwrap().value;
    let signs = [Sign::Plus, Sign::Minus];
    let radii = mixed_radii(0.9 * g.r0(), 0.85, &signs);
    let plus = mixed_event_prob_finite(g, &q, &signs, &ContourScheme::new(radii).with_tol(1e-11), &opts).unwrap().value;
    let marginal = joint_cdf_step(g, &query(&[(3, 2, 1.5)]), &default_finite_scheme(g, 1).with_tol(1e-11), &opts).unwrap().value;
    assert!((minus + plus - marginal).abs() < 1e-9, "{minus} + {plus} vs {marginal}");
}

#[test]
fn exact_oracle_partitions_unity() {
    let g = geom();
    let y = InitialCondition::step(g);
    let q = query(&[(1, -1, 0.6), (3, 1, 1.3)]);
    let mut total = 0.0;
    for s1 in [Sign::Minus, Sign::Plus] {
        for s2 in [Sign::Minus, Sign::Plus] {
            total += exact_cdf_small(g, &y, &q, Some(&[s1, s2]), &ExactOptions::default()).unwrap();
        }
    }
    assert!((total - 1.0).abs() < 1e-10, "{total}");
}
