//! Special functions against independent oracles: brute-force partial sums,
//! integral representations by adaptive quadrature, and a continued
//! fraction for `erfcx`.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use ptasep_core::specfun::*;
use quadrature::double_exponential::integrate;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn polylog_half_partial_sum() {
    let brute: f64 = (1..=1_000_000u32).map(|k| 0.1f64.powi(k.min(400) as i32) / (k as f64).sqrt()).sum();
    let v = polylog(PolyOrder::Half, c(0.1, 0.0)).unwrap();
    assert!((v.re - brute).abs() < 1e-15 && v.im == 0.0);
    assert!((v.re - 0.1077).abs() < 1e-4);
}

#[test]
fn polylog_three_halves_integral() {
    // Li_{3/2}(z) = z/Γ(3/2) ∫_0^∞ x^{1/2}/(e^x − z) dx, Γ(3/2) = √π/2
    let z = 0.5;
    let integral = integrate(|x| x.sqrt() / (x.exp() - z), 0.0, 60.0, 1e-14).integral;
    let oracle = z * integral / (PI.sqrt() / 2.0);
    let v = polylog(PolyOrder::ThreeHalves, c(z, 0.0)).unwrap();
    assert!((v.re - oracle).abs() < 1e-10, "{} vs {oracle}", v.re);
}

#[test]
fn a1_a2_series() {
    let z = c(0.3, 0.0);
    let s32: f64 = (1..200).map(|k| 0.3f64.powi(k) / (k as f64).powf(1.5)).sum();
    let s52: f64 = (1..200).map(|k| 0.3f64.powi(k) / (k as f64).powf(2.5)).sum();
    let norm = (2.0 * PI).sqrt();
    assert!((a1(z).unwrap() + s32 / norm).norm() < 1e-15);
    assert!((a2(z).unwrap() + s52 / norm).norm() < 1e-15);
    for x in [0.1, 0.5, 0.9] {
        assert_eq!(a2(c(x, 0.0)).unwrap().im, 0.0);
    }
}

#[test]
fn b_diagonal_integral() {
    // B(z, z) = (1/4π) ∫_0^z Li_{1/2}(y)²/y dy, radial path y = z t
    let z = 0.4;
    let integral = integrate(|t| polylog(PolyOrder::Half, c(z * t, 0.0)).unwrap().re.powi(2) / t, 1e-300, 1.0, 1e-14).integral;
    let oracle = integral / (4.0 * PI);
    let v = bfun(c(z, 0.0), c(z, 0.0)).unwrap();
    assert!((v.re - oracle).abs() < 1e-9, "{} vs {oracle}", v.re);
}

#[test]
fn h_matches_quadrature() {
    let cases = [(c(-1.5, 0.0), c(0.4, 0.0)), (c(-0.8, 1.3), c(0.3, -0.5)), (c(1.1, -0.6), c(-0.7, 0.2)), (c(-0.3, -2.0), c(0.85, 0.1))];
    for (zeta, z) in cases {
        let series = hfun(zeta, z).unwrap();
        let quad = hfun_quadrature(zeta, z, 1e-13).unwrap();
        assert!((series - quad).norm() < 1e-8, "ζ={zeta} z={z}: {series} vs {quad}");
    }
}

#[test]
fn h_decay_along_rays() {
    let z = c(0.5, 0.3);
    for arg in [PI / 4.0, -PI / 4.0, 3.0 * PI / 4.0, -3.0 * PI / 4.0] {
        let scaled: Vec<f64> = [5.0, 10.0, 20.0]
            .iter()
            .map(|&r| hfun(Complex64::from_polar(r, arg), z).unwrap().norm() * r)
            .collect();
        assert!(scaled.iter().all(|&s| s < 2.0), "arg {arg}: {scaled:?}");
        assert!(scaled[2] < 1.2 * scaled[1], "arg {arg}: {scaled:?}");
    }
}

/// `erfcx(x) = (1/√π) / (x + (1/2)/(x + 1/(x + (3/2)/(x + …))))` by modified Lentz.
fn erfcx_continued_fraction(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = x;
    let (mut cc, mut d) = (f, 0.0);
    for n in 1..100_000 {
        let a = n as f64 / 2.0;
        d = x + a * d;
        d = if d.abs() < tiny { tiny } else { d };
        cc = x + a / cc;
        cc = if cc.abs() < tiny { tiny } else { cc };
        d = 1.0 / d;
        let delta = cc * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / (PI.sqrt() * f)
}

#[test]
fn erfcx_real_axis_continued_fraction() {
    for x in [1.0, 2.0, 5.0] {
        let oracle = erfcx_continued_fraction(x);
        let v = erfcx(c(x, 0.0)).unwrap();
        assert!((v.re - oracle).abs() < 1e-12 * oracle && v.im.abs() < 1e-15, "x={x}: {v} vs {oracle}");
    }
}

fn cauchy_riemann(f: impl Fn(Complex64) -> Complex64, z: Complex64) -> f64 {
    let e = 1e-5;
    let dx = (f(z + e) - f(z - e)) / (2.0 * e);
    let dy = (f(z + c(0.0, e)) - f(z - c(0.0, e))) / c(0.0, 2.0 * e);
    (dx - dy).norm() / dx.norm().max(1e-3)
}

#[test]
fn analyticity_in_z() {
    let zeta = c(-0.9, 0.7);
    let z1 = c(0.2, 0.35);
    for z in [c(0.3, -0.2), c(-0.5, 0.4), c(0.1, 0.7)] {
        assert!(cauchy_riemann(|z| polylog(PolyOrder::Half, z).unwrap(), z) < 1e-6);
        assert!(cauchy_riemann(|z| a1(z).unwrap(), z) < 1e-6);
        assert!(cauchy_riemann(|z| a2(z).unwrap(), z) < 1e-6);
        assert!(cauchy_riemann(|z| bfun(z, z1).unwrap(), z) < 1e-6);
        assert!(cauchy_riemann(|z| hfun(zeta, z).unwrap(), z) < 1e-6);
    }
}

fn disk_point() -> impl Strategy<Value = Complex64> {
    (0.0..0.9f64, -PI..PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn b_is_symmetric(z in disk_point(), zp in disk_point()) {
        let (a, b) = (bfun(z, zp).unwrap(), bfun(zp, z).unwrap());
        prop_assert!((a - b).norm() <= 1e-14 * a.norm());
    }

    #[test]
    fn h_is_even(re in 0.05..3.0f64, im in -4.0..4.0f64, z in disk_point()) {
        let zeta = c(-re, im);
        prop_assert_eq!(hfun(zeta, z).unwrap(), hfun(-zeta, z).unwrap());
    }

    #[test]
    fn erfcx_reflection(re in -5.0..5.0f64, im in -5.0..5.0f64) {
        let u = c(re, im);
        let (a, b) = (erfcx(u).unwrap(), erfcx(u.conj()).unwrap().conj());
        prop_assert!((a - b).norm() <= 1e-13 * a.norm());
    }
}
