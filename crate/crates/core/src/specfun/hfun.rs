use std::f64::consts::PI;

use num_complex::Complex64;

use super::erfcx::erfcx_right;
use super::polylog::{polylog, PolyOrder, POLYLOG_MAX_RADIUS};
use crate::error::{invalid, Result};

fn inv_sqrt_2pi() -> f64 {
    1.0 / (2.0 * PI).sqrt()
}

/// `A1(z) = −Li_{3/2}(z)/√(2π)`
pub fn a1(z: Complex64) -> Result<Complex64> {
    Ok(-polylog(PolyOrder::ThreeHalves, z)? * inv_sqrt_2pi())
}

/// `A2(z) = −Li_{5/2}(z)/√(2π)`
pub fn a2(z: Complex64) -> Result<Complex64> {
    Ok(-polylog(PolyOrder::FiveHalves, z)? * inv_sqrt_2pi())
}

fn check_radius(z: Complex64) -> Result<()> {
    if !(z.norm() <= POLYLOG_MAX_RADIUS) {
        return invalid(format!("|z|={} exceeds {POLYLOG_MAX_RADIUS}", z.norm()));
    }
    Ok(())
}

/// Number of terms so that `Σ_{k>K} r^k / k < eps`.
fn geometric_terms(r: f64, eps: f64) -> usize {
    if r == 0.0 {
        return 0;
    }
    let mut k = 1usize;
    let mut rk = r;
    while rk / (k as f64 * (1.0 - r)) >= eps {
        k += 1;
        rk *= r;
    }
    k
}

/// `B(z, z′) = (1/4π) Σ_{k,k′≥1} z^k z′^{k′} / ((k+k′)√(kk′))`.
pub fn bfun(z: Complex64, zp: Complex64) -> Result<Complex64> {
    check_radius(z)?;
    check_radius(zp)?;
    let (r, rp) = (z.norm(), zp.norm());
    if r == 0.0 || rp == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    // |term| ≤ r^k rp^k' / 2, so each truncated index contributes a geometric
    // tail bounded by r^K / ((1−r)(1−rp)).
    let eps = 1e-16 * (1.0 - r.max(rp));
    let kmax = geometric_terms(r, eps).max(1);
    let kpmax = geometric_terms(rp, eps).max(1);
    let p: Vec<Complex64> = powers_over_sqrt(z, kmax);
    let q: Vec<Complex64> = powers_over_sqrt(zp, kpmax);
    let mut sum = Complex64::new(0.0, 0.0);
    for (i, &pk) in p.iter().enumerate() {
        let mut inner = Complex64::new(0.0, 0.0);
        for (j, &qk) in q.iter().enumerate() {
            inner += qk / (i + j + 2) as f64;
        }
        sum += pk * inner;
    }
    Ok(sum / (4.0 * PI))
}

fn powers_over_sqrt(z: Complex64, n: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n);
    let mut zk = Complex64::new(1.0, 0.0);
    for k in 1..=n {
        zk *= z;
        out.push(zk / (k as f64).sqrt());
    }
    out
}

/// Power series of `z ↦ h(ζ, z)` for a fixed `ζ`, valid for `|z| ≤ zmax`.
///
/// For `Re ζ < 0`, `h(ζ, z) = −½ Σ_k (z^k/k) erfcx(−ζ √(k/2))`; the right
/// half-plane uses `h(ζ, z) = h(−ζ, z)`. Since `|erfcx| ≤ 1` on the right
/// half-plane, the tail after `K` terms is below `zmax^{K+1}/(2(K+1)(1−zmax))`.
#[derive(Clone, Debug)]
pub struct HSeries {
    coeffs: Vec<Complex64>,
}

impl HSeries {
    pub fn new(zeta: Complex64, zmax: f64) -> Result<Self> {
        if zeta.re == 0.0 || !zeta.re.is_finite() || !zeta.im.is_finite() {
            return invalid(format!("h(ζ, z) needs Re ζ ≠ 0, got ζ={zeta}"));
        }
        if !(zmax <= POLYLOG_MAX_RADIUS) {
            return invalid(format!("|z|={zmax} exceeds {POLYLOG_MAX_RADIUS}"));
        }
        let left = if zeta.re < 0.0 { zeta } else { -zeta };
        let terms = geometric_terms(zmax, 2e-17 * (1.0 - zmax));
        let coeffs = (1..=terms)
            .map(|k| {
                let kf = k as f64;
                -0.5 * erfcx_right(-left * (kf / 2.0).sqrt()) / kf
            })
            .collect();
        Ok(Self { coeffs })
    }

    /// `h(ζ, z)`; callers must keep `|z| ≤ zmax`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = (acc + c) * z;
        }
        acc
    }
}

/// `h(ζ, z)` for `Re ζ ≠ 0` and `|z| ≤ 0.95`.
pub fn hfun(zeta: Complex64, z: Complex64) -> Result<Complex64> {
    check_radius(z)?;
    if z.norm() == 0.0 {
        if zeta.re == 0.0 {
            return invalid("h(ζ, z) needs Re ζ ≠ 0");
        }
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(HSeries::new(zeta, z.norm())?.eval(z))
}

/// `h(ζ, z)` by direct quadrature of `−(2π)^{−1/2} ∫ Li_{1/2}(z e^{(ζ²−y²)/2}) dy`
/// from `−∞` to `−|Re ζ| + i·Im ζ'` along the real axis and then vertically,
/// where `ζ' = ζ` for `Re ζ < 0` and `−ζ` otherwise. Slower than
/// [`hfun`] and used as its independent check.
///
/// On both pieces `|z e^{(ζ²−y²)/2}| ≤ |z|`, so the polylogarithm series
/// applies. The real piece is cut where the integrand falls below `e^{−72}`.
pub fn hfun_quadrature(zeta: Complex64, z: Complex64, tol: f64) -> Result<Complex64> {
    check_radius(z)?;
    if zeta.re == 0.0 {
        return invalid("h(ζ, z) needs Re ζ ≠ 0");
    }
    let end = if zeta.re < 0.0 { zeta } else { -zeta };
    let sq = end * end;
    let li = |y: Complex64| polylog(PolyOrder::Half, z * ((sq - y * y) / 2.0).exp());
    let integrate = |f: &dyn Fn(f64) -> Result<Complex64>, a: f64, b: f64| -> Result<Complex64> {
        let err = std::cell::Cell::new(None);
        let part = |pick: fn(Complex64) -> f64| {
            quadrature::double_exponential::integrate(
                |t| match f(t) {
                    Ok(v) => pick(v),
                    Err(e) => {
                        err.set(Some(e));
                        0.0
                    }
                },
                a,
                b,
                tol,
            )
            .integral
        };
        let v = Complex64::new(part(|c| c.re), part(|c| c.im));
        match err.into_inner() {
            Some(e) => Err(e),
            None => Ok(v),
        }
    };
    let a = end.re;
    let y_min = -(end.norm() + 12.0);
    let real = integrate(&|y| li(Complex64::new(y, 0.0)), y_min, a)?;
    // y(s) = a + i·Im(ζ')·s, dy = i·Im(ζ') ds
    let b = end.im;
    let vertical = if b == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        integrate(&|s| li(Complex64::new(a, b * s)), 0.0, 1.0)? * Complex64::new(0.0, b)
    };
    Ok(-(real + vertical) * inv_sqrt_2pi())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_arguments() {
        let z = Complex64::new(0.0, 0.0);
        assert_eq!(a1(z).unwrap(), z);
        assert_eq!(a2(z).unwrap(), z);
        assert_eq!(bfun(z, Complex64::new(0.3, 0.1)).unwrap(), z);
        assert_eq!(hfun(Complex64::new(-1.0, 0.3), z).unwrap(), z);
    }

    #[test]
    fn h_is_even_in_zeta() {
        let zeta = Complex64::new(-0.7, 1.9);
        let z = Complex64::new(0.3, -0.5);
        assert_eq!(hfun(zeta, z).unwrap(), hfun(-zeta, z).unwrap());
        assert!(hfun(Complex64::new(0.0, 1.0), z).is_err());
    }

    #[test]
    fn radius_guard() {
        assert!(bfun(Complex64::new(0.96, 0.0), Complex64::new(0.1, 0.0)).is_err());
        assert!(a1(Complex64::new(0.0, 0.99)).is_err());
    }
}
