//! π, the arithmetic-geometric mean, and the lemniscate constant ϖ.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;

use super::real::Real;

/// `atan(1/n)` at `bits` fractional bits.
fn atan_inv(n: i64, bits: u32) -> Real {
    let one = BigInt::from(1) << bits;
    let n2 = BigInt::from(n * n);
    let mut power = one / n; // 1/n^(2k+1)
    let mut sum = BigInt::zero();
    let mut k = 0i64;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &n2;
        k += 1;
    }
    Real::from_mantissa(sum, bits)
}

/// π by Machin's formula `π = 16 atan(1/5) - 4 atan(1/239)`.
pub fn pi(bits: u32) -> Real {
    let w = bits + 16;
    atan_inv(5, w).mul_int(16).sub(&atan_inv(239, w).mul_int(4)).with_bits(bits)
}

/// Arithmetic-geometric mean of two positive reals.
pub fn agm(a: &Real, b: &Real) -> Real {
    let bits = a.bits().min(b.bits());
    let (mut a, mut b) = (a.clone(), b.clone());
    // quadratic convergence: stop once the iterates agree to a few ulps
    while !a.sub(&b).abs_below_pow2(-(bits as i64) + 4) {
        let next_a = a.add(&b).ldexp(-1);
        b = a.mul(&b).sqrt().expect("AGM iterates stay positive");
        a = next_a;
    }
    a.add(&b).ldexp(-1)
}

const GUARD: u32 = 16;

fn compute_varpi(bits: u32) -> Real {
    let w = bits + GUARD;
    let sqrt2 = Real::from_int(2, w).sqrt().expect("positive");
    let m = agm(&Real::from_int(1, w), &sqrt2);
    pi(w).div(&m.ldexp(1)).expect("AGM is positive").with_bits(bits)
}

/// `ϖ = π / (2 AGM(1, √2))`, the integral of `1/√(1 - t^4)` over `[0, 1]`.
/// Values are cached per precision.
pub fn lemniscate_constant(bits: u32) -> Real {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Real>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("cache lock").get(&bits) {
        return (**v).clone();
    }
    let v = compute_varpi(bits);
    cache.lock().expect("cache lock").insert(bits, Arc::new(v.clone()));
    v
}

/// `ϖ` by quadrature, independent of the AGM route.
///
/// Substituting `t = sin θ` gives `∫_0^{π/2} dθ / √(1 + sin^2 θ)`, whose
/// integrand is smooth and π-periodic, so the trapezoidal rule over a full
/// period converges geometrically. The node count doubles until two
/// consecutive sums agree to the working precision.
pub fn lemniscate_constant_quadrature(bits: u32) -> Real {
    let w = bits + GUARD;
    let pi = pi(w);
    let mut prev: Option<Real> = None;
    let mut m: u64 = 8;
    loop {
        let sum = periodic_trapezoid(m, &pi, w);
        if let Some(p) = &prev {
            if sum.sub(p).abs_below_pow2(-(bits as i64) - 4) {
                return sum.with_bits(bits);
            }
        }
        prev = Some(sum);
        m *= 2;
        assert!(m <= 1 << 20, "quadrature failed to converge");
    }
}

/// `(π / 2m) Σ_{j<m} (1 + sin^2(jπ/m))^{-1/2}`, with `sin^2(jπ/m)` taken
/// from the powers of `e^{2πi/m}`.
fn periodic_trapezoid(m: u64, pi: &Real, w: u32) -> Real {
    let one = Real::from_int(1, w);
    let angle = pi.ldexp(1).div_int(m as i64);
    let (c, s) = cos_sin_small(&angle);
    let g = |cos2: &Real| {
        // 1 + sin^2 = (3 - cos 2θ) / 2
        let d = Real::from_int(3, w).sub(cos2).ldexp(-1);
        one.div(&d.sqrt().expect("positive")).expect("nonzero")
    };
    let (mut re, mut im) = (one.clone(), Real::zero(w));
    let mut sum = Real::zero(w);
    for _ in 0..m {
        sum = sum.add(&g(&re));
        let next_re = re.mul(&c).sub(&im.mul(&s));
        im = re.mul(&s).add(&im.mul(&c));
        re = next_re;
    }
    pi.mul(&sum).div_int(2 * m as i64)
}

/// Taylor series for `cos x` and `sin x`, meant for `|x| < 1`.
fn cos_sin_small(x: &Real) -> (Real, Real) {
    let w = x.bits();
    let x2 = x.sqr();
    let (mut cos, mut sin) = (Real::from_int(1, w), x.clone());
    let (mut tc, mut ts) = (cos.clone(), sin.clone());
    let mut k: i64 = 1;
    while !tc.abs_below_pow2(-(w as i64) - 2) || !ts.abs_below_pow2(-(w as i64) - 2) {
        tc = tc.mul(&x2).div_int((2 * k - 1) * (2 * k)).neg();
        ts = ts.mul(&x2).div_int((2 * k) * (2 * k + 1)).neg();
        cos = cos.add(&tc);
        sin = sin.add(&ts);
        k += 1;
    }
    (cos, sin)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_digits() {
        assert_eq!(pi(200).to_decimal(40), "3.1415926535897932384626433832795028841971");
    }

    #[test]
    fn varpi_value_and_identity() {
        let bits = 256;
        let v = lemniscate_constant(bits);
        assert_eq!(v.to_decimal(20), "1.31102877714605990523");
        // 2 ϖ AGM(1, √2) / π = 1
        let m = agm(&Real::from_int(1, bits), &Real::from_int(2, bits).sqrt().unwrap());
        let ratio = v.ldexp(1).mul(&m).div(&pi(bits)).unwrap();
        assert!(ratio.sub(&Real::from_int(1, bits)).abs_below_pow2(-(bits as i64) + 8));
        // doubling precision barely moves the value
        let fine = lemniscate_constant(2 * bits);
        assert!(fine.sub(&v).abs_below_pow2(-(bits as i64) + 4));
    }

    #[test]
    fn quadrature_agrees_with_agm() {
        for bits in [128, 256, 512] {
            let q = lemniscate_constant_quadrature(bits);
            assert!(q.sub(&lemniscate_constant(bits)).abs_below_pow2(-(bits as i64) + 8), "{q:?}");
        }
    }
}
