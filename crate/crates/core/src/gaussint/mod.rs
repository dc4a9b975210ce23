//! Exact arithmetic in the Gaussian integers Z[i].

mod factor;
mod parse;
pub mod rational;

pub use factor::{factor, is_prime, primes_up_to_norm, Factorization, GaussPrime, PrimeKind};

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An element `re + im*i` of Z[i].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussInt { re: re.into(), im: im.into() }
    }

    pub fn zero() -> Self {
        GaussInt::default()
    }

    pub fn one() -> Self {
        GaussInt::new(1, 0)
    }

    pub fn i() -> Self {
        GaussInt::new(0, 1)
    }

    /// The ramified prime 1+i.
    pub fn one_plus_i() -> Self {
        GaussInt::new(1, 1)
    }

    /// The four units 1, i, -1, -i in that order.
    pub fn units() -> [GaussInt; 4] {
        [GaussInt::new(1, 0), GaussInt::new(0, 1), GaussInt::new(-1, 0), GaussInt::new(0, -1)]
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    /// The norm as a `u64`, failing for values beyond desk scale.
    pub fn norm_u64(&self) -> Result<u64> {
        self.norm().to_u64().ok_or_else(|| Error::TooLarge(self.to_string()))
    }

    pub fn conj(&self) -> Self {
        GaussInt { re: self.re.clone(), im: -&self.im }
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        GaussInt { re: -&self.im, im: self.re.clone() }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        GaussInt { re: &self.re * k, im: &self.im * k }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = GaussInt::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division `self = q*d + r` with `N(r) <= N(d)/2`.
    ///
    /// Each coordinate of the exact quotient is rounded to the nearest
    /// integer, halves rounding toward negative infinity.
    pub fn divmod(&self, d: &GaussInt) -> Result<(GaussInt, GaussInt)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = d.norm();
        let num = self * &d.conj();
        let q = GaussInt { re: round_half_down(&num.re, &n), im: round_half_down(&num.im, &n) };
        let r = self - &(&q * d);
        Ok((q, r))
    }

    /// The quotient `self / d` when `d` divides `self`.
    pub fn div_exact(&self, d: &GaussInt) -> Option<GaussInt> {
        if d.is_zero() {
            return None;
        }
        let n = d.norm();
        let num = self * &d.conj();
        let (qr, rr) = num.re.div_rem(&n);
        let (qi, ri) = num.im.div_rem(&n);
        (rr.is_zero() && ri.is_zero()).then_some(GaussInt { re: qr, im: qi })
    }

    pub fn divides(&self, other: &GaussInt) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_exact(self).is_some()
    }

    /// Not divisible by 1+i, equivalently `re + im` odd.
    pub fn is_odd(&self) -> bool {
        (&self.re + &self.im).is_odd()
    }

    /// The associate in the first quadrant (`re > 0`, `im >= 0`); zero maps to zero.
    pub fn canonical_associate(&self) -> GaussInt {
        if self.is_zero() {
            return GaussInt::zero();
        }
        let mut z = self.clone();
        for _ in 0..4 {
            if z.re.is_positive() && !z.im.is_negative() {
                return z;
            }
            z = z.mul_i();
        }
        unreachable!("one associate of a nonzero Gaussian integer lies in the first quadrant")
    }

    /// Congruent to 1 modulo 2+2i.
    pub fn is_primary(&self) -> bool {
        let shifted = self - &GaussInt::one();
        GaussInt::new(2, 2).divides(&shifted)
    }

    /// Returns `(u, p)` with `u` a unit, `p = u*self` and `p = 1 mod (1+i)^3`.
    pub fn primary_normalize(&self) -> Result<(GaussInt, GaussInt)> {
        if !self.is_odd() {
            return Err(Error::NotOdd(self.to_string()));
        }
        for u in GaussInt::units() {
            let p = &u * self;
            if p.is_primary() {
                return Ok((u, p));
            }
        }
        unreachable!("exactly one associate of an odd Gaussian integer is primary")
    }

    /// The primary associate, for odd inputs.
    pub fn primary(&self) -> Result<GaussInt> {
        self.primary_normalize().map(|(_, p)| p)
    }

    /// The unit `u` with `u*u_inv = 1`; `None` for non-units.
    pub fn unit_inverse(&self) -> Option<GaussInt> {
        self.is_unit().then(|| self.conj())
    }

    /// Ordering used for primes and divisor lists: norm, then real part
    /// ascending, then imaginary part descending.
    pub fn listing_cmp(&self, other: &GaussInt) -> Ordering {
        self.norm()
            .cmp(&other.norm())
            .then_with(|| self.re.cmp(&other.re))
            .then_with(|| other.im.cmp(&self.im))
    }
}

/// Nearest integer to `x/n` (n > 0), halves toward negative infinity.
fn round_half_down(x: &BigInt, n: &BigInt) -> BigInt {
    // ceil((2x - n) / 2n)
    let num: BigInt = x * 2 - n;
    let den: BigInt = n * 2;
    -((-num).div_floor(&den))
}

/// Greatest common divisor in first-quadrant canonical form.
pub fn gcd(a: &GaussInt, b: &GaussInt) -> Result<GaussInt> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::invalid("gcd(0, 0) is undefined"));
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let (_, r) = x.divmod(&y)?;
        x = y;
        y = r;
    }
    Ok(x.canonical_associate())
}

/// True when `gcd(a, b)` is a unit.
pub fn coprime(a: &GaussInt, b: &GaussInt) -> bool {
    gcd(a, b).map(|g| g.is_one()).unwrap_or(false)
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_abs = self.im.abs();
        let im_part = if im_abs.is_one() { String::new() } else { im_abs.to_string() };
        match (self.re.is_zero(), self.im.sign()) {
            (_, num_bigint::Sign::NoSign) => write!(f, "{}", self.re),
            (true, num_bigint::Sign::Plus) => write!(f, "{im_part}i"),
            (true, num_bigint::Sign::Minus) => write!(f, "-{im_part}i"),
            (false, num_bigint::Sign::Plus) => write!(f, "{}+{im_part}i", self.re),
            (false, num_bigint::Sign::Minus) => write!(f, "{}-{im_part}i", self.re),
        }
    }
}

impl fmt::Debug for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GaussInt({self})")
    }
}

impl FromStr for GaussInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse::parse_gaussint(s)
    }
}

impl Serialize for GaussInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for GaussInt {
    fn from(re: i64) -> Self {
        GaussInt::new(re, 0)
    }
}

impl From<(i64, i64)> for GaussInt {
    fn from((re, im): (i64, i64)) -> Self {
        GaussInt::new(re, im)
    }
}

impl Add<&GaussInt> for &GaussInt {
    type Output = GaussInt;
    fn add(self, rhs: &GaussInt) -> GaussInt {
        GaussInt { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub<&GaussInt> for &GaussInt {
    type Output = GaussInt;
    fn sub(self, rhs: &GaussInt) -> GaussInt {
        GaussInt { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul<&GaussInt> for &GaussInt {
    type Output = GaussInt;
    fn mul(self, rhs: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt { re: -&self.re, im: -&self.im }
    }
}

impl Neg for GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt { re: -self.re, im: -self.im }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<GaussInt> for GaussInt {
            type Output = GaussInt;
            fn $m(self, rhs: GaussInt) -> GaussInt { (&self).$m(&rhs) }
        }
        impl $tr<&GaussInt> for GaussInt {
            type Output = GaussInt;
            fn $m(self, rhs: &GaussInt) -> GaussInt { (&self).$m(rhs) }
        }
        impl $tr<GaussInt> for &GaussInt {
            type Output = GaussInt;
            fn $m(self, rhs: GaussInt) -> GaussInt { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl AddAssign<&GaussInt> for GaussInt {
    fn add_assign(&mut self, rhs: &GaussInt) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussInt> for GaussInt {
    fn sub_assign(&mut self, rhs: &GaussInt) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussInt> for GaussInt {
    fn mul_assign(&mut self, rhs: &GaussInt) {
        *self = &*self * rhs;
    }
}

impl Zero for GaussInt {
    fn zero() -> Self {
        GaussInt::default()
    }
    fn is_zero(&self) -> bool {
        GaussInt::is_zero(self)
    }
}

impl One for GaussInt {
    fn one() -> Self {
        GaussInt::new(1, 0)
    }
}
