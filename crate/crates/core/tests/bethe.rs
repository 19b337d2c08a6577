//! Properties of the Bethe root sets.

use num_complex::Complex64;
use proptest::prelude::*;

use ptasep_core::bethe::{eval_lz, jfun, solve_bethe_roots, RingGeometry, RootSolverConfig};

fn geometry() -> impl Strategy<Value = RingGeometry> {
    (3usize..20).prop_flat_map(|l| (Just(l), 1..l)).prop_map(|(l, n)| RingGeometry::new(l, n).unwrap())
}

/// A point `z` with `0.05 r₀ ≤ |z| ≤ 0.95 r₀`.
fn inside(g: RingGeometry) -> impl Strategy<Value = Complex64> {
    (0.05..0.95f64, 0.0..std::f64::consts::TAU).prop_map(move |(s, th)| Complex64::from_polar(s * g.r0(), th))
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn roots_factor_the_level_difference((g, z, zp) in geometry().prop_flat_map(|g| (Just(g), inside(g), inside(g)))) {
        prop_assume!((z - zp).norm() > 1e-3 * g.r0());
        let cfg = RootSolverConfig::default();
        let rs = solve_bethe_roots(g, z, &cfg).unwrap();
        let rp = solve_bethe_roots(g, zp, &cfg).unwrap();
        let diff = rp.level - rs.level;
        for &vp in &rp.right {
            let prod: Complex64 = rs.all().map(|&w| vp - w).product();
            prop_assert!(rel(prod, diff) < 1e-9, "v'={vp}: {prod} vs {diff}");
        }
    }

    #[test]
    fn right_factor_derivative((g, z) in geometry().prop_flat_map(|g| (Just(g), inside(g)))) {
        let rs = solve_bethe_roots(g, z, &RootSolverConfig::default()).unwrap();
        for (i, &v) in rs.right.iter().enumerate() {
            let dq: Complex64 = rs.right.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &w)| v - w).product();
            let closed = v.powi(g.n as i32) / (jfun(g, v) * eval_lz(&rs, v).unwrap());
            prop_assert!(rel(dq, closed) < 1e-9, "{dq} vs {closed}");
        }
    }

    #[test]
    fn continuation_step_count_does_not_move_roots((g, z) in geometry().prop_flat_map(|g| (Just(g), inside(g)))) {
        let coarse = RootSolverConfig::default();
        let fine = RootSolverConfig { steps: 2 * coarse.steps, ..coarse.clone() };
        let a = solve_bethe_roots(g, z, &coarse).unwrap();
        let b = solve_bethe_roots(g, z, &fine).unwrap();
        for (x, y) in a.all().zip(b.all()) {
            prop_assert!((x - y).norm() < 1e-10, "{x} vs {y}");
        }
    }
}
