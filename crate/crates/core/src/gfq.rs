//! Residue fields Z[i]/πZ[i] for odd primes π and polynomials over them.
//!
//! A split prime of norm `p` gives `F_p`, with `i` sent to the root of
//! `X^2 + 1` that π kills. An inert prime `p` gives `F_{p^2}`, stored as pairs
//! `x + y ι` with `ι^2 = -1`, so reduction from Z[i] is coefficientwise.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::gaussint::rational::{inv_mod, mul_mod};
use crate::gaussint::{GaussInt, GaussPrime, PrimeKind};
use crate::zipoly::PolyZi;

/// An element `a + b ι`; `b` is always zero in a prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fe {
    pub a: u64,
    pub b: u64,
}

impl Fe {
    pub const ZERO: Fe = Fe { a: 0, b: 0 };
    pub const ONE: Fe = Fe { a: 1, b: 0 };

    pub fn is_zero(self) -> bool {
        self == Fe::ZERO
    }
}

/// Field arithmetic for `F_p` (`degree == 1`) or `F_p[ι]/(ι^2 + 1)` with
/// `p = 3 mod 4` (`degree == 2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fq {
    p: u64,
    degree: u8,
}

impl Fq {
    pub fn prime_field(p: u64) -> Fq {
        Fq { p, degree: 1 }
    }

    /// `F_{p^2}` as `F_p(ι)`; needs `p = 3 mod 4` so that `X^2 + 1` is irreducible.
    pub fn quadratic(p: u64) -> Fq {
        debug_assert!(p % 4 == 3);
        Fq { p, degree: 2 }
    }

    pub fn characteristic(self) -> u64 {
        self.p
    }

    pub fn degree(self) -> u8 {
        self.degree
    }

    pub fn size(self) -> u64 {
        self.p.pow(self.degree as u32)
    }

    pub fn from_u64(self, n: u64) -> Fe {
        Fe { a: n % self.p, b: 0 }
    }

    pub fn add(self, x: Fe, y: Fe) -> Fe {
        let p = self.p as u128;
        Fe { a: ((x.a as u128 + y.a as u128) % p) as u64, b: ((x.b as u128 + y.b as u128) % p) as u64 }
    }

    pub fn neg(self, x: Fe) -> Fe {
        let n = |v: u64| if v == 0 { 0 } else { self.p - v };
        Fe { a: n(x.a), b: n(x.b) }
    }

    pub fn sub(self, x: Fe, y: Fe) -> Fe {
        self.add(x, self.neg(y))
    }

    pub fn mul(self, x: Fe, y: Fe) -> Fe {
        let p = self.p;
        if self.degree == 1 {
            return Fe { a: mul_mod(x.a, y.a, p), b: 0 };
        }
        let ac = mul_mod(x.a, y.a, p);
        let bd = mul_mod(x.b, y.b, p);
        let ad = mul_mod(x.a, y.b, p);
        let bc = mul_mod(x.b, y.a, p);
        Fe { a: (ac + p - bd) % p, b: ((ad as u128 + bc as u128) % p as u128) as u64 }
    }

    pub fn inv(self, x: Fe) -> Result<Fe> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.p;
        // (a + bι)^-1 = (a - bι) / (a^2 + b^2)
        let n = ((mul_mod(x.a, x.a, p) as u128 + mul_mod(x.b, x.b, p) as u128) % p as u128) as u64;
        let ninv = inv_mod(n, p);
        Ok(Fe { a: mul_mod(x.a, ninv, p), b: mul_mod(self.neg(x).b, ninv, p) })
    }

    pub fn pow(self, mut x: Fe, mut e: u64) -> Fe {
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        acc
    }

    /// Every element, in `(a, b)` order.
    pub fn elements(self) -> impl Iterator<Item = Fe> {
        let p = self.p;
        let bs = if self.degree == 1 { 1 } else { p };
        (0..p).flat_map(move |a| (0..bs).map(move |b| Fe { a, b }))
    }
}

/// The residue field of an odd Gaussian prime, with the reduction map from Z[i].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueField {
    pi: GaussPrime,
    fq: Fq,
    /// Image of `i`.
    iota: Fe,
}

impl ResidueField {
    pub fn new(pi: &GaussPrime) -> Result<ResidueField> {
        match pi.kind {
            PrimeKind::Ramified => Err(Error::NotOdd(pi.value.to_string())),
            PrimeKind::Inert => {
                let fq = Fq::quadratic(pi.characteristic());
                Ok(ResidueField { pi: pi.clone(), fq, iota: Fe { a: 0, b: 1 } })
            }
            PrimeKind::Split => {
                // pi = a + b i = 0 forces i = -a / b
                let p = pi.norm;
                let pb = BigInt::from(p);
                let a = pi.value.re.mod_floor(&pb).to_u64().expect("reduced");
                let b = pi.value.im.mod_floor(&pb).to_u64().expect("reduced");
                let fq = Fq::prime_field(p);
                let iota = fq.mul(fq.neg(fq.from_u64(a)), Fe { a: inv_mod(b, p), b: 0 });
                Ok(ResidueField { pi: pi.clone(), fq, iota })
            }
        }
    }

    /// Convenience constructor from any associate of a prime.
    pub fn from_gaussint(z: &GaussInt) -> Result<ResidueField> {
        let pi = GaussPrime::from_associate(z).ok_or_else(|| Error::invalid(format!("{z} is not a Gaussian prime")))?;
        ResidueField::new(&pi)
    }

    pub fn prime(&self) -> &GaussPrime {
        &self.pi
    }

    pub fn arith(&self) -> Fq {
        self.fq
    }

    pub fn size(&self) -> u64 {
        self.fq.size()
    }

    pub fn i_image(&self) -> Fe {
        self.iota
    }

    pub fn reduce(&self, z: &GaussInt) -> Fe {
        let pb = BigInt::from(self.fq.p);
        let a = self.fq.from_u64(z.re.mod_floor(&pb).to_u64().expect("reduced"));
        let b = self.fq.from_u64(z.im.mod_floor(&pb).to_u64().expect("reduced"));
        self.fq.add(a, self.fq.mul(b, self.iota))
    }

    pub fn reduce_poly(&self, f: &PolyZi) -> PolyFq {
        PolyFq::new(self.fq, f.coeffs().iter().map(|c| self.reduce(c)).collect())
    }
}

/// Polynomial over a finite field; coefficients ascending, trimmed.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyFq {
    fq: Fq,
    coeffs: Vec<Fe>,
}

impl fmt::Debug for PolyFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.coeffs.iter().map(|c| format!("{}+{}ι", c.a, c.b)).collect();
        write!(f, "PolyFq(p={}, deg={}, [{}])", self.fq.p, self.fq.degree, terms.join(", "))
    }
}

impl PolyFq {
    pub fn new(fq: Fq, mut coeffs: Vec<Fe>) -> PolyFq {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyFq { fq, coeffs }
    }

    pub fn from_u64s(fq: Fq, coeffs: &[u64]) -> PolyFq {
        PolyFq::new(fq, coeffs.iter().map(|&c| fq.from_u64(c)).collect())
    }

    fn constant(fq: Fq, c: Fe) -> PolyFq {
        PolyFq::new(fq, vec![c])
    }

    fn x(fq: Fq) -> PolyFq {
        PolyFq::new(fq, vec![Fe::ZERO, Fe::ONE])
    }

    pub fn field(&self) -> Fq {
        self.fq
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: Fe) -> Fe {
        self.coeffs.iter().rev().fold(Fe::ZERO, |acc, &c| self.fq.add(self.fq.mul(acc, x), c))
    }

    pub fn add(&self, other: &PolyFq) -> PolyFq {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[Fe], k: usize| v.get(k).copied().unwrap_or_default();
        PolyFq::new(self.fq, (0..n).map(|k| self.fq.add(get(&self.coeffs, k), get(&other.coeffs, k))).collect())
    }

    pub fn sub(&self, other: &PolyFq) -> PolyFq {
        self.add(&PolyFq::new(self.fq, other.coeffs.iter().map(|&c| self.fq.neg(c)).collect()))
    }

    pub fn mul(&self, other: &PolyFq) -> PolyFq {
        if self.is_zero() || other.is_zero() {
            return PolyFq::new(self.fq, Vec::new());
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = self.fq.add(out[i + j], self.fq.mul(a, b));
            }
        }
        PolyFq::new(self.fq, out)
    }

    pub fn derivative(&self) -> PolyFq {
        PolyFq::new(
            self.fq,
            self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| self.fq.mul(self.fq.from_u64(k as u64), c)).collect(),
        )
    }

    /// Scales to leading coefficient one; zero stays zero.
    pub fn monic(&self) -> PolyFq {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lc) => {
                let inv = self.fq.inv(lc).expect("leading coefficient is nonzero");
                PolyFq::new(self.fq, self.coeffs.iter().map(|&c| self.fq.mul(c, inv)).collect())
            }
        }
    }

    pub fn divrem(&self, d: &PolyFq) -> Result<(PolyFq, PolyFq)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lc_inv = self.fq.inv(d.coeffs[dd])?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((PolyFq::new(self.fq, Vec::new()), self.clone()));
        }
        let mut q = vec![Fe::ZERO; r.len() - dd];
        for k in (0..q.len()).rev() {
            let t = self.fq.mul(r[k + dd], lc_inv);
            q[k] = t;
            if t.is_zero() {
                continue;
            }
            for (j, &c) in d.coeffs.iter().enumerate() {
                r[k + j] = self.fq.sub(r[k + j], self.fq.mul(t, c));
            }
        }
        r.truncate(dd);
        Ok((PolyFq::new(self.fq, q), PolyFq::new(self.fq, r)))
    }

    fn rem(&self, d: &PolyFq) -> PolyFq {
        self.divrem(d).expect("nonzero modulus").1
    }

    /// Monic gcd by Euclid's algorithm.
    pub fn gcd(&self, other: &PolyFq) -> Result<PolyFq> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::invalid("gcd of two zero polynomials"));
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn is_squarefree(&self) -> bool {
        if self.degree().unwrap_or(0) == 0 {
            return !self.is_zero();
        }
        self.gcd(&self.derivative()).is_ok_and(|g| g.degree() == Some(0))
    }

    /// `base^e mod m`.
    fn powmod(base: &PolyFq, mut e: u64, m: &PolyFq) -> PolyFq {
        let mut acc = PolyFq::constant(m.fq, Fe::ONE).rem(m);
        let mut b = base.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b).rem(m);
            }
            b = b.mul(&b).rem(m);
            e >>= 1;
        }
        acc
    }

    /// `X^q mod self`, where `q` is the field size.
    fn frobenius_x(&self) -> PolyFq {
        PolyFq::powmod(&PolyFq::x(self.fq), self.fq.size(), self)
    }

    /// Squarefree and a product of linear factors: `X^q = X` modulo `self`.
    pub fn splits_completely(&self) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(1) => true,
            Some(_) => self.is_squarefree() && self.frobenius_x() == PolyFq::x(self.fq).rem(self),
        }
    }

    /// Whether `self` has a root in the field: `deg gcd(X^q - X, self) >= 1`.
    pub fn has_root(&self) -> bool {
        match self.degree() {
            None => true,
            Some(0) => false,
            Some(_) => {
                let h = self.frobenius_x().sub(&PolyFq::x(self.fq));
                self.gcd(&h).map(|g| g.degree().unwrap_or(0) >= 1).unwrap_or(false)
            }
        }
    }

    /// Distinct-degree factorization profile, ascending. Requires a
    /// squarefree polynomial of positive degree.
    pub fn factor_degrees(&self) -> Result<Vec<u32>> {
        if self.degree().unwrap_or(0) == 0 {
            return Err(Error::invalid("factor_degrees needs a nonconstant polynomial"));
        }
        if !self.is_squarefree() {
            return Err(Error::invalid("factor_degrees needs a squarefree polynomial"));
        }
        let q = self.fq.size();
        let x = PolyFq::x(self.fq);
        let mut f = self.monic();
        let mut h = x.rem(&f);
        let mut out = Vec::new();
        let mut d = 0u32;
        while f.degree().unwrap_or(0) > 0 {
            d += 1;
            if 2 * d as usize > f.degree().unwrap() {
                // what remains is irreducible
                out.push(f.degree().unwrap() as u32);
                break;
            }
            h = PolyFq::powmod(&h, q, &f);
            let g = f.gcd(&h.sub(&x))?;
            let gd = g.degree().unwrap_or(0);
            if gd > 0 {
                out.extend(std::iter::repeat_n(d, gd / d as usize));
                f = f.divrem(&g)?.0;
                h = h.rem(&f);
            }
        }
        Ok(out)
    }
}
