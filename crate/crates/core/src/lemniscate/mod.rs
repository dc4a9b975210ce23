//! The lemniscate sine `sl` in arbitrary precision, its torsion values, and
//! the numeric route to lemnatomic polynomials.
//!
//! `sl` satisfies `sl'^2 = 1 - sl^4` and `sl'' = -2 sl^3`. With
//! `ϖ = 1.3110287771...` it obeys `sl(z + 2ϖ) = -sl(z)` and
//! `sl(z + (1+i)ϖ) = -i / sl(z)`, so its period lattice is
//! `L = 2(1+i)ϖ Z[i]`, spanned by `2(1+i)ϖ` and `2(1-i)ϖ`. Poles sit at
//! `(±1±i)ϖ + L`. Torsion points are taken relative to `L`:
//! the β-torsion module is generated by `S = 2(1+i)ϖ/β`.

mod constants;
mod real;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

pub use constants::{agm, lemniscate_constant, lemniscate_constant_quadrature, pi};
pub use real::{BigComplex, Real};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gaussint::GaussInt;
use crate::residue::{Residue, ResidueRing};
use crate::zipoly::PolyZi;

pub const DEFAULT_PRECISION: u32 = 256;
pub const MAX_PRECISION: u32 = 4096;

/// Extra bits carried internally beyond the requested precision.
pub const GUARD_BITS: u32 = 32;

/// Scalars the addition law can run over: complex numbers here, elements of
/// the function field `Q(i)(s, c)` in the exact pipeline.
pub trait PairScalar: Clone {
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Result<Self>;
    /// The integer `n` in the same context (precision, field) as `self`.
    fn constant(&self, n: i64) -> Self;
    /// Rejects denominators too small to divide by reliably.
    fn check_denominator(&self) -> Result<()> {
        Ok(())
    }
}

impl PairScalar for BigComplex {
    fn add(&self, o: &Self) -> Self {
        BigComplex::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        BigComplex::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        BigComplex::mul(self, o)
    }
    fn div(&self, o: &Self) -> Result<Self> {
        BigComplex::div(self, o)
    }
    fn constant(&self, n: i64) -> Self {
        BigComplex::from_int(n, 0, self.bits())
    }
    fn check_denominator(&self) -> Result<()> {
        let floor = -(self.bits() as i64) / 4;
        if self.abs_below_pow2(floor) {
            Err(Error::PrecisionLoss(format!("addition-law denominator below 2^{floor}")))
        } else {
            Ok(())
        }
    }
}

/// The values `(sl(z), sl'(z))` at one argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlPair<T = BigComplex> {
    pub s: T,
    pub c: T,
}

impl SlPair<BigComplex> {
    /// `(0, 1)`, the pair at `z = 0`.
    pub fn neutral(bits: u32) -> Self {
        SlPair { s: BigComplex::zero(bits), c: BigComplex::one(bits) }
    }

    /// `|c^2 - (1 - s^4)|`, which vanishes for exact values.
    pub fn consistency_defect(&self) -> Real {
        let s2 = self.s.sqr();
        let one = BigComplex::one(self.s.bits());
        self.c.sqr().sub(&one.sub(&s2.sqr())).abs()
    }

    pub fn with_bits(&self, bits: u32) -> Self {
        SlPair { s: self.s.with_bits(bits), c: self.c.with_bits(bits) }
    }
}

/// Addition law for the pair `(sl, sl')`:
///
/// ```text
/// s(u+v) = (s_u c_v + s_v c_u) / (1 + s_u^2 s_v^2)
/// c(u+v) = (c_u c_v (1 - s_u^2 s_v^2) - 2 s_u s_v (s_u^2 + s_v^2)) / (1 + s_u^2 s_v^2)^2
/// ```
///
/// The second line is the derivative of the first along `u` with `v` fixed,
/// simplified with `c^2 = 1 - s^4`.
pub fn sl_pair_add<T: PairScalar>(a: &SlPair<T>, b: &SlPair<T>) -> Result<SlPair<T>> {
    let su2 = a.s.mul(&a.s);
    let sv2 = b.s.mul(&b.s);
    let p = su2.mul(&sv2);
    let one = a.s.constant(1);
    let d = one.add(&p);
    d.check_denominator()?;
    let s = a.s.mul(&b.c).add(&b.s.mul(&a.c)).div(&d)?;
    let cross = a.s.mul(&b.s).mul(&su2.add(&sv2));
    let c_num = a.c.mul(&b.c).mul(&one.sub(&p)).sub(&cross.add(&cross));
    let c = c_num.div(&d.mul(&d))?;
    Ok(SlPair { s, c })
}

/// `(sl(-z), sl'(-z)) = (-sl(z), sl'(z))`.
pub fn sl_pair_neg<T: PairScalar>(a: &SlPair<T>) -> SlPair<T> {
    SlPair { s: a.s.constant(0).sub(&a.s), c: a.c.clone() }
}

/// `n` times the argument, by double-and-add; `n` may be negative.
pub fn sl_pair_scalar_mul<T: PairScalar>(a: &SlPair<T>, n: i64, neutral: SlPair<T>) -> Result<SlPair<T>> {
    let mut acc = neutral;
    let mut base = if n < 0 { sl_pair_neg(a) } else { a.clone() };
    let mut k = n.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc = sl_pair_add(&acc, &base)?;
        }
        k >>= 1;
        if k > 0 {
            base = sl_pair_add(&base, &base)?;
        }
    }
    Ok(acc)
}

/// Maclaurin coefficients `a_n` of `sl(z) = Σ a_n z^(4n+1)`, from
/// `a_{n+1} (4n+5)(4n+4) = -2 Σ_{i+j+k=n} a_i a_j a_k`.
fn series_coefficients(bits: u32) -> Arc<Vec<Real>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<Real>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("cache lock").get(&bits) {
        return v.clone();
    }
    // |z| < 1/2 and a radius of convergence ≈ 1.85 give ≈ 7.5 bits per term
    let terms = (bits / 7 + 4) as usize;
    let mut a = vec![Real::from_int(1, bits)];
    let mut squares: Vec<Real> = Vec::new(); // Σ_{i+j=m} a_i a_j
    for n in 0..terms - 1 {
        let sq = (0..=n).fold(Real::zero(bits), |acc, i| acc.add(&a[i].mul(&a[n - i])));
        squares.push(sq);
        let cube = (0..=n).fold(Real::zero(bits), |acc, m| acc.add(&squares[m].mul(&a[n - m])));
        let den = ((4 * n + 5) * (4 * n + 4)) as i64;
        a.push(cube.mul_int(-2).div_int(den));
    }
    let a = Arc::new(a);
    cache.lock().expect("cache lock").insert(bits, a.clone());
    a
}

/// Series evaluation for `|z| < 1/2`.
fn sl_series(z: &BigComplex) -> SlPair {
    let bits = z.bits();
    let coeffs = series_coefficients(bits);
    let w = z.sqr().sqr();
    let mut s = BigComplex::zero(bits);
    let mut c = BigComplex::zero(bits);
    for (n, a) in coeffs.iter().enumerate().rev() {
        s = s.mul(&w).add(&BigComplex::from_real(a.clone()));
        c = c.mul(&w).add(&BigComplex::from_real(a.mul_int(4 * n as i64 + 1)));
    }
    SlPair { s: s.mul(z), c }
}

/// The lattice generator `2(1+i)ϖ`.
fn lattice_generator(bits: u32) -> BigComplex {
    let v = lemniscate_constant(bits).ldexp(1);
    BigComplex::new(v.clone(), v)
}

/// `(sl(z), sl'(z))` at the precision of `z`.
///
/// `z` is reduced modulo `L`, halved until `|z| < 1/2`, evaluated by series,
/// and then doubled back with the addition law.
pub fn sl_eval(z: &BigComplex) -> Result<SlPair> {
    let bits = z.bits();
    let w = bits + GUARD_BITS;
    let omega = lattice_generator(w);
    let mut z = z.with_bits(w);
    let t = z.div(&omega)?;
    let (n1, n2) = (t.re.round(), t.im.round());
    z = z.sub(&omega.mul(&BigComplex::from_int(n1, n2, w)));
    let quarter = Real::from_ratio(1, 4, w);
    let mut k = 0;
    while z.norm_sqr() >= quarter {
        z = z.ldexp(-1);
        k += 1;
    }
    let mut pair = sl_series(&z);
    for _ in 0..k {
        pair = sl_pair_add(&pair, &pair).map_err(|e| match e {
            Error::PrecisionLoss(msg) => Error::PoleProximity(msg),
            other => other,
        })?;
    }
    Ok(pair.with_bits(bits))
}

/// `sl` at the point `t · 2(1+i)ϖ` for an exact `t = (a + b i) / n`.
fn sl_at_fraction(a: &BigInt, b: &BigInt, n: &BigInt, bits: u32) -> Result<SlPair> {
    // reduce t modulo Z[i] to the nearest representative
    let round = |x: &BigInt| -> BigInt {
        let (q, r) = x.div_mod_floor(n);
        if r * 2 > *n {
            x - (q + 1) * n
        } else {
            x - q * n
        }
    };
    let (a, b) = (round(a), round(b));
    let w = bits + GUARD_BITS;
    let v2 = lemniscate_constant(w).ldexp(1);
    // (a + b i)(1 + i) = (a - b) + (a + b) i
    let z = BigComplex::new(
        v2.mul(&Real::from_ratio(&a - &b, n.clone(), w)),
        v2.mul(&Real::from_ratio(&a + &b, n.clone(), w)),
    );
    Ok(sl_eval(&z)?.with_bits(bits))
}

/// A β-torsion point `λ S` and the value of `sl` there.
#[derive(Debug, Clone)]
pub struct TorsionValue {
    pub lambda: Residue,
    pub value: BigComplex,
}

/// `sl(λ S)` for every canonical residue `λ` mod β, in canonical order, with
/// `S = 2(1+i)ϖ / β`. Fails if two values are not separated at the working
/// precision.
pub fn torsion_values(beta: &GaussInt, bits: u32, exec: Exec) -> Result<Vec<TorsionValue>> {
    let ring = ResidueRing::new(beta)?;
    let lambdas: Vec<Residue> = ring.representatives().collect();
    torsion_values_for(&ring, &lambdas, bits, exec, true)
}

fn torsion_values_for(
    ring: &ResidueRing,
    lambdas: &[Residue],
    bits: u32,
    exec: Exec,
    check_distinct: bool,
) -> Result<Vec<TorsionValue>> {
    let beta = ring.modulus();
    let n = beta.norm();
    let conj = beta.conj();
    let values = exec.map(lambdas, |&lambda| {
        // λ / β = λ conj(β) / N(β)
        let num = &lambda.to_gaussint() * &conj;
        sl_at_fraction(&num.re, &num.im, &n, bits).map(|p| TorsionValue { lambda, value: p.s })
    });
    let values = values.into_iter().collect::<Result<Vec<_>>>()?;
    if check_distinct {
        let floor = -(bits as i64) / 2;
        for (i, x) in values.iter().enumerate() {
            for y in &values[i + 1..] {
                if x.value.sub(&y.value).abs_below_pow2(floor) {
                    return Err(Error::PrecisionLoss(format!(
                        "torsion values at {} and {} coincide to 2^{floor}",
                        x.lambda, y.lambda
                    )));
                }
            }
        }
    }
    Ok(values)
}

/// Diagnostics for an accepted numeric lemnatomic polynomial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericReport {
    pub beta: GaussInt,
    pub degree: usize,
    /// Precision at which the rounding was first clean.
    pub precision_bits: u32,
    /// Precision of the confirming run.
    pub confirm_bits: u32,
    /// `log2` of the largest coefficient distance to a Gaussian integer.
    pub max_rounding_error_log2: f64,
}

/// `Π (X - r)` over the given roots.
pub fn expand_roots(roots: &[BigComplex], bits: u32) -> Vec<BigComplex> {
    let mut coeffs = vec![BigComplex::one(bits)];
    for r in roots {
        let mut next = vec![BigComplex::zero(bits); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c);
            next[k] = next[k].sub(&c.mul(r));
        }
        coeffs = next;
    }
    coeffs
}

/// Rounds each coefficient to the nearest Gaussian integer, returning the
/// polynomial and the largest rounding distance as `log2` (or `-inf`).
fn round_coefficients(coeffs: &[BigComplex]) -> (PolyZi, f64) {
    let mut worst = f64::NEG_INFINITY;
    let mut out = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        let (re, im) = (c.re.round(), c.im.round());
        let bits = c.bits();
        for (part, r) in [(&c.re, &re), (&c.im, &im)] {
            let err = part.sub(&Real::from_int(r.clone(), bits));
            if let Some(l) = err.log2_floor() {
                worst = worst.max(l as f64);
            }
        }
        out.push(GaussInt { re, im });
    }
    (PolyZi::new(out), worst)
}

/// Largest accepted rounding distance, as a power of two.
pub const ROUNDING_TOLERANCE_LOG2: f64 = -30.0;

/// One expansion attempt at a fixed precision with generator `λ0 S`.
fn numeric_attempt(ring: &ResidueRing, units: &[Residue], bits: u32, exec: Exec) -> Result<(PolyZi, f64)> {
    let values = torsion_values_for(ring, units, bits, exec, true)?;
    let roots: Vec<BigComplex> = values.into_iter().map(|t| t.value.with_bits(bits + GUARD_BITS)).collect();
    let coeffs = expand_roots(&roots, bits + GUARD_BITS);
    Ok(round_coefficients(&coeffs))
}

/// `Λ_β` from the product of `X - sl(λ S)` over invertible `λ`, starting at
/// `bits` and doubling up to [`MAX_PRECISION`] until the rounding is within
/// tolerance and unchanged by one more doubling.
pub fn lemnatomic_numeric(beta: &GaussInt, bits: u32, exec: Exec) -> Result<(PolyZi, NumericReport)> {
    lemnatomic_numeric_with_generator(beta, bits, exec, None)
}

/// As [`lemnatomic_numeric`], with the torsion generator replaced by
/// `λ0 S` for an invertible `λ0`.
pub fn lemnatomic_numeric_with_generator(
    beta: &GaussInt,
    bits: u32,
    exec: Exec,
    lambda0: Option<&GaussInt>,
) -> Result<(PolyZi, NumericReport)> {
    if bits < 64 {
        return Err(Error::invalid("precision must be at least 64 bits"));
    }
    let ring = ResidueRing::new(beta)?;
    let mut units: Vec<Residue> = ring.representatives().filter(|&r| ring.is_unit(r)).collect();
    if let Some(l0) = lambda0 {
        let l0 = ring.canonical_rep(l0);
        if !ring.is_unit(l0) {
            return Err(Error::NotCoprime(l0.to_string(), ring.modulus().to_string()));
        }
        units = units.into_iter().map(|u| ring.mul(u, l0)).collect();
    }
    let degree = units.len();
    let mut previous: Option<(PolyZi, u32, f64)> = None;
    let mut b = bits;
    while b <= MAX_PRECISION {
        match numeric_attempt(&ring, &units, b, exec) {
            Ok((poly, err)) if err < ROUNDING_TOLERANCE_LOG2 => {
                if let Some((prev, prev_bits, prev_err)) = &previous {
                    if *prev == poly {
                        let report = NumericReport {
                            beta: ring.modulus().clone(),
                            degree,
                            precision_bits: *prev_bits,
                            confirm_bits: b,
                            max_rounding_error_log2: *prev_err,
                        };
                        return Ok((poly, report));
                    }
                }
                previous = Some((poly, b, err));
            }
            Ok(_) => previous = None,
            Err(e @ (Error::PrecisionLoss(_) | Error::PoleProximity(_))) => {
                if b * 2 > MAX_PRECISION {
                    return Err(e);
                }
                previous = None;
            }
            Err(e) => return Err(e),
        }
        b *= 2;
    }
    Err(Error::RoundingUnstable { bits: MAX_PRECISION })
}
