//! Binary fixed-point reals and complex numbers over `BigInt`.
//!
//! A [`Real`] is `m / 2^bits`. Mixing operands of different precision
//! truncates to the coarser one.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Real {
    m: BigInt,
    bits: u32,
}

impl Real {
    pub fn zero(bits: u32) -> Real {
        Real { m: BigInt::zero(), bits }
    }

    pub fn from_int(n: impl Into<BigInt>, bits: u32) -> Real {
        Real { m: n.into() << bits, bits }
    }

    /// `num / den`, rounded toward negative infinity.
    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>, bits: u32) -> Real {
        Real { m: (num.into() << bits).div_floor(&den.into()), bits }
    }

    /// Exact binary value of a finite `f64`, truncated to `bits`.
    pub fn from_f64(x: f64, bits: u32) -> Real {
        assert!(x.is_finite());
        let (mant, exp, sign) = num_traits::float::FloatCore::integer_decode(x);
        let m = BigInt::from(mant) * sign as i64;
        let shift = exp as i64 + bits as i64;
        let m = if shift >= 0 { m << shift as u32 } else { m >> (-shift) as u32 };
        Real { m, bits }
    }

    pub fn from_mantissa(m: BigInt, bits: u32) -> Real {
        Real { m, bits }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.m
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn with_bits(&self, bits: u32) -> Real {
        let m = match bits.cmp(&self.bits) {
            Ordering::Equal => self.m.clone(),
            Ordering::Greater => &self.m << (bits - self.bits),
            Ordering::Less => &self.m >> (self.bits - bits),
        };
        Real { m, bits }
    }

    fn align(&self, other: &Real) -> (BigInt, BigInt, u32) {
        let bits = self.bits.min(other.bits);
        (self.with_bits(bits).m, other.with_bits(bits).m, bits)
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn add(&self, other: &Real) -> Real {
        let (a, b, bits) = self.align(other);
        Real { m: a + b, bits }
    }

    pub fn sub(&self, other: &Real) -> Real {
        let (a, b, bits) = self.align(other);
        Real { m: a - b, bits }
    }

    pub fn neg(&self) -> Real {
        Real { m: -&self.m, bits: self.bits }
    }

    pub fn mul(&self, other: &Real) -> Real {
        let (a, b, bits) = self.align(other);
        Real { m: (a * b) >> bits, bits }
    }

    pub fn div(&self, other: &Real) -> Result<Real> {
        let (a, b, bits) = self.align(other);
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Real { m: (a << bits).div_floor(&b), bits })
    }

    pub fn mul_int(&self, k: i64) -> Real {
        Real { m: &self.m * k, bits: self.bits }
    }

    pub fn div_int(&self, k: i64) -> Real {
        Real { m: self.m.div_floor(&BigInt::from(k)), bits: self.bits }
    }

    /// Multiplies by `2^k` (`k` may be negative).
    pub fn ldexp(&self, k: i32) -> Real {
        let m = if k >= 0 { &self.m << k as u32 } else { &self.m >> (-k) as u32 };
        Real { m, bits: self.bits }
    }

    pub fn sqr(&self) -> Real {
        self.mul(self)
    }

    pub fn sqrt(&self) -> Result<Real> {
        if self.m.is_negative() {
            return Err(Error::invalid("square root of a negative real"));
        }
        Ok(Real { m: (&self.m << self.bits).sqrt(), bits: self.bits })
    }

    pub fn abs(&self) -> Real {
        Real { m: self.m.abs(), bits: self.bits }
    }

    pub fn signum(&self) -> i32 {
        match self.m.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Nearest integer, halves away from zero.
    pub fn round(&self) -> BigInt {
        let half = BigInt::one() << self.bits.saturating_sub(1);
        if self.m.is_negative() {
            -((-&self.m + half) >> self.bits)
        } else {
            (&self.m + half) >> self.bits
        }
    }

    /// `floor(log2 |x|)`, or `None` for zero.
    pub fn log2_floor(&self) -> Option<i64> {
        (!self.m.is_zero()).then(|| self.m.bits() as i64 - 1 - self.bits as i64)
    }

    /// `|self| < 2^k`.
    pub fn abs_below_pow2(&self, k: i64) -> bool {
        self.log2_floor().is_none_or(|l| l < k)
    }

    pub fn to_f64(&self) -> f64 {
        let shift = self.m.bits().saturating_sub(60) as u32;
        let top = (&self.m >> shift).to_f64().unwrap_or(0.0);
        top * 2f64.powi(shift as i32 - self.bits as i32)
    }

    /// Decimal rendering with `digits` places after the point.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10).pow(digits as u32);
        let scaled = (&self.m * &scale) >> self.bits;
        let neg = scaled.is_negative();
        let s = scaled.abs().to_string();
        let s = format!("{s:0>width$}", width = digits + 1);
        let (int, frac) = s.split_at(s.len() - digits);
        format!("{}{int}.{frac}", if neg { "-" } else { "" })
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Real) -> Option<Ordering> {
        let (a, b, _) = self.align(other);
        Some(a.cmp(&b))
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct BigComplex {
    pub re: Real,
    pub im: Real,
}

impl BigComplex {
    pub fn new(re: Real, im: Real) -> BigComplex {
        BigComplex { re, im }
    }

    pub fn zero(bits: u32) -> BigComplex {
        BigComplex { re: Real::zero(bits), im: Real::zero(bits) }
    }

    pub fn one(bits: u32) -> BigComplex {
        BigComplex::from_int(1, 0, bits)
    }

    pub fn from_int(re: impl Into<BigInt>, im: impl Into<BigInt>, bits: u32) -> BigComplex {
        BigComplex { re: Real::from_int(re, bits), im: Real::from_int(im, bits) }
    }

    pub fn from_real(re: Real) -> BigComplex {
        let bits = re.bits();
        BigComplex { re, im: Real::zero(bits) }
    }

    pub fn from_f64(re: f64, im: f64, bits: u32) -> BigComplex {
        BigComplex { re: Real::from_f64(re, bits), im: Real::from_f64(im, bits) }
    }

    /// Precision of the coarser component.
    pub fn bits(&self) -> u32 {
        self.re.bits().min(self.im.bits())
    }

    pub fn with_bits(&self, bits: u32) -> BigComplex {
        BigComplex { re: self.re.with_bits(bits), im: self.im.with_bits(bits) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &BigComplex) -> BigComplex {
        BigComplex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &BigComplex) -> BigComplex {
        BigComplex { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> BigComplex {
        BigComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> BigComplex {
        BigComplex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &BigComplex) -> BigComplex {
        BigComplex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn sqr(&self) -> BigComplex {
        self.mul(self)
    }

    pub fn mul_i(&self) -> BigComplex {
        BigComplex { re: self.im.neg(), im: self.re.clone() }
    }

    pub fn scale(&self, k: &Real) -> BigComplex {
        BigComplex { re: self.re.mul(k), im: self.im.mul(k) }
    }

    pub fn mul_int(&self, k: i64) -> BigComplex {
        BigComplex { re: self.re.mul_int(k), im: self.im.mul_int(k) }
    }

    pub fn ldexp(&self, k: i32) -> BigComplex {
        BigComplex { re: self.re.ldexp(k), im: self.im.ldexp(k) }
    }

    pub fn norm_sqr(&self) -> Real {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt().expect("norms are nonnegative")
    }

    pub fn div(&self, o: &BigComplex) -> Result<BigComplex> {
        let n = o.norm_sqr();
        let num = self.mul(&o.conj());
        Ok(BigComplex { re: num.re.div(&n)?, im: num.im.div(&n)? })
    }

    /// `max(|re|, |im|) < 2^k`.
    pub fn abs_below_pow2(&self, k: i64) -> bool {
        self.re.abs_below_pow2(k) && self.im.abs_below_pow2(k)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}
