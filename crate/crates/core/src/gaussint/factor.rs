//! Gaussian primes: classification, factorization, enumeration by norm.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::rational::{factor_u64, is_prime_u64, sieve, sqrt_minus_one};
use super::{gcd, GaussInt};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimeKind {
    /// Lies over a rational prime `p = 1 mod 4`; norm `p`.
    Split,
    /// A rational prime `p = 3 mod 4`; norm `p^2`.
    Inert,
    /// An associate of 1+i.
    Ramified,
}

/// A Gaussian prime in normalized form: primary for odd primes, `1+i` for
/// the ramified one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaussPrime {
    pub value: GaussInt,
    pub norm: u64,
    pub kind: PrimeKind,
}

impl GaussPrime {
    /// Builds the normalized prime associated with `z`, or `None` if `z` is
    /// not prime.
    pub fn from_associate(z: &GaussInt) -> Option<GaussPrime> {
        let norm = z.norm_u64().ok()?;
        let kind = classify_norm(norm)?;
        let value = match kind {
            PrimeKind::Ramified => GaussInt::one_plus_i(),
            _ => z.primary().ok()?,
        };
        Some(GaussPrime { value, norm, kind })
    }

    /// The rational prime below this one.
    pub fn characteristic(&self) -> u64 {
        match self.kind {
            PrimeKind::Inert => (self.norm as f64).sqrt().round() as u64,
            _ => self.norm,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.kind != PrimeKind::Ramified
    }

    pub fn listing_cmp(&self, other: &GaussPrime) -> Ordering {
        self.value.listing_cmp(&other.value)
    }
}

fn classify_norm(norm: u64) -> Option<PrimeKind> {
    if norm == 2 {
        return Some(PrimeKind::Ramified);
    }
    if is_prime_u64(norm) && norm % 4 == 1 {
        return Some(PrimeKind::Split);
    }
    let r = (norm as f64).sqrt().round() as u64;
    (r * r == norm && r % 4 == 3 && is_prime_u64(r)).then_some(PrimeKind::Inert)
}

/// Primality in Z[i]: the norm is a rational prime, or the square of a
/// rational prime `p = 3 mod 4`.
pub fn is_prime(z: &GaussInt) -> bool {
    match z.norm_u64() {
        Ok(n) => classify_norm(n).is_some(),
        Err(_) => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub unit: GaussInt,
    pub factors: Vec<(GaussPrime, u32)>,
}

impl Factorization {
    /// `unit * prod(p^e)`.
    pub fn product(&self) -> GaussInt {
        self.factors.iter().fold(self.unit.clone(), |acc, (p, e)| acc * p.value.pow(*e))
    }
}

/// The normalized primes of norm `p` for a rational prime `p = 1 mod 4`.
fn split_primes_over(p: u64) -> [GaussInt; 2] {
    let r = sqrt_minus_one(p);
    let pi = gcd(&GaussInt::from(p as i64), &GaussInt::new(r, 1)).expect("p is nonzero");
    let a = pi.primary().expect("split primes are odd");
    let b = a.conj();
    [a, b]
}

/// Unit times primary prime powers. The norm is factored over Z and each
/// rational prime is lifted to Z[i].
pub fn factor(z: &GaussInt) -> Result<Factorization> {
    if z.is_zero() {
        return Err(Error::invalid("cannot factor zero"));
    }
    let norm = z.norm_u64()?;
    let mut rest = z.clone();
    let mut factors = Vec::new();
    let mut push = |prime: GaussInt, kind: PrimeKind, rest: &mut GaussInt| {
        let mut e = 0u32;
        while let Some(q) = rest.div_exact(&prime) {
            *rest = q;
            e += 1;
        }
        if e > 0 {
            let norm = prime.norm_u64().expect("prime norms are small");
            factors.push((GaussPrime { value: prime, norm, kind }, e));
        }
    };
    for (p, _) in factor_u64(norm) {
        match p % 4 {
            2 => push(GaussInt::one_plus_i(), PrimeKind::Ramified, &mut rest),
            3 => push(GaussInt::from(-(p as i64)), PrimeKind::Inert, &mut rest),
            _ => {
                for pi in split_primes_over(p) {
                    push(pi, PrimeKind::Split, &mut rest);
                }
            }
        }
    }
    if !rest.is_unit() {
        return Err(Error::Invariant(format!("factorization of {z} left cofactor {rest}")));
    }
    factors.sort_by(|a, b| a.0.listing_cmp(&b.0));
    Ok(Factorization { unit: rest, factors })
}

/// All normalized Gaussian primes with norm `<= bound`, listed by
/// (norm, re, descending im).
pub fn primes_up_to_norm(bound: u64, odd_only: bool) -> Vec<GaussPrime> {
    let mut out = Vec::new();
    for p in sieve(bound) {
        match p % 4 {
            2 => {
                if !odd_only {
                    out.push(GaussPrime { value: GaussInt::one_plus_i(), norm: 2, kind: PrimeKind::Ramified });
                }
            }
            3 => {
                if let Some(n) = p.checked_mul(p).filter(|&n| n <= bound) {
                    out.push(GaussPrime { value: GaussInt::from(-(p as i64)), norm: n, kind: PrimeKind::Inert });
                }
            }
            _ => {
                for pi in split_primes_over(p) {
                    out.push(GaussPrime { value: pi, norm: p, kind: PrimeKind::Split });
                }
            }
        }
    }
    out.sort_by(|a, b| a.listing_cmp(b));
    out
}
