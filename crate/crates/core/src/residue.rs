//! Residue rings Z[i]/βZ[i] for odd β, their unit groups, and the classes of
//! primes in them.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussint::rational::factor_u64;
use crate::gaussint::{factor, GaussInt};

/// Largest modulus norm accepted by [`ResidueRing`]; keeps class products
/// inside `i128`.
pub const MAX_RING_NORM: u64 = 1 << 40;

/// Largest modulus norm for which the unit group is enumerated.
pub const MAX_GROUP_NORM: u64 = 100_000;

/// How the class of a prime is read off in `(R/βR)*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Through the primary associate.
    #[default]
    Primary,
    /// The residue of the element as given.
    Raw,
}

impl std::str::FromStr for Normalization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "primary" => Ok(Normalization::Primary),
            "raw" => Ok(Normalization::Raw),
            other => Err(Error::invalid(format!("unknown normalization '{other}'"))),
        }
    }
}

/// A residue class, stored as its canonical representative `x + y i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    pub x: u64,
    pub y: u64,
}

impl Residue {
    pub fn to_gaussint(self) -> GaussInt {
        GaussInt::new(self.x, self.y)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_gaussint().fmt(f)
    }
}

impl Serialize for Residue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `Z[i]/βZ[i]` with representatives `x + y i`, `0 <= x < n1`, `0 <= y < n2`.
///
/// The lattice `βZ[i]` has the echelon basis `(n1, 0)`, `(shear, n2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueRing {
    modulus: GaussInt,
    n1: u64,
    n2: u64,
    shear: u64,
    /// Primary prime divisors of the modulus as `(a, b, norm)`.
    primes: Vec<(i128, i128, i128)>,
}

impl ResidueRing {
    /// The ring modulo `beta`, which must be odd and not a unit. The stored
    /// modulus is the primary associate.
    pub fn new(beta: &GaussInt) -> Result<ResidueRing> {
        if beta.is_zero() || beta.is_unit() {
            return Err(Error::invalid(format!("modulus {beta} must be a non-unit")));
        }
        let modulus = beta.primary()?;
        let norm = modulus.norm_u64()?;
        if norm > MAX_RING_NORM {
            return Err(Error::TooLarge(format!("modulus norm {norm} exceeds {MAX_RING_NORM}")));
        }
        let (a, b) = (&modulus.re, &modulus.im);
        let ext = b.extended_gcd(a);
        // u*b + v*a = g, and u*beta + v*(i*beta) = (u a - v b) + g i
        let g = ext.gcd.abs();
        let sign = if ext.gcd.is_negative() { -1 } else { 1 };
        let (u, v) = (&ext.x * sign, &ext.y * sign);
        let n2 = g.to_u64().expect("gcd is bounded by the norm");
        let n1 = norm / n2;
        let shear_raw: BigInt = &u * a - &v * b;
        let shear = shear_raw.mod_floor(&BigInt::from(n1)).to_u64().expect("reduced");
        let primes = factor(&modulus)?
            .factors
            .iter()
            .map(|(p, _)| (to_i128(&p.value.re), to_i128(&p.value.im), p.norm as i128))
            .collect();
        Ok(ResidueRing { modulus, n1, n2, shear, primes })
    }

    pub fn modulus(&self) -> &GaussInt {
        &self.modulus
    }

    pub fn size(&self) -> u64 {
        self.n1 * self.n2
    }

    /// `(n1, n2, shear)`.
    pub fn hnf(&self) -> (u64, u64, u64) {
        (self.n1, self.n2, self.shear)
    }

    fn reduce_i128(&self, x: i128, y: i128) -> Residue {
        let (n1, n2, c) = (self.n1 as i128, self.n2 as i128, self.shear as i128);
        let k = y.div_euclid(n2);
        let y = y.rem_euclid(n2);
        let x = (x - k.rem_euclid(n1) * c).rem_euclid(n1);
        Residue { x: x as u64, y: y as u64 }
    }

    pub fn canonical_rep(&self, z: &GaussInt) -> Residue {
        let n1 = BigInt::from(self.n1);
        let n2 = BigInt::from(self.n2);
        let (k, y) = z.im.div_mod_floor(&n2);
        let x = (&z.re - (k.mod_floor(&n1)) * BigInt::from(self.shear)).mod_floor(&n1);
        Residue { x: x.to_u64().expect("reduced"), y: y.to_u64().expect("reduced") }
    }

    pub fn mul(&self, a: Residue, b: Residue) -> Residue {
        let (ax, ay, bx, by) = (a.x as i128, a.y as i128, b.x as i128, b.y as i128);
        self.reduce_i128(ax * bx - ay * by, ax * by + ay * bx)
    }

    pub fn one(&self) -> Residue {
        self.reduce_i128(1, 0)
    }

    /// Every canonical representative, in lexicographic `(x, y)` order.
    pub fn representatives(&self) -> impl Iterator<Item = Residue> + '_ {
        (0..self.n1).flat_map(move |x| (0..self.n2).map(move |y| Residue { x, y }))
    }

    /// A class is invertible iff no prime divisor of the modulus divides it.
    pub fn is_unit(&self, r: Residue) -> bool {
        let (x, y) = (r.x as i128, r.y as i128);
        self.primes.iter().all(|&(a, b, n)| {
            // (x + y i)(a - b i) divisible by N(pi)
            ((x * a + y * b) % n != 0) || ((y * a - x * b) % n != 0)
        })
    }

    /// The class of `z` in `(R/βR)*`.
    pub fn class_of(&self, z: &GaussInt, normalization: Normalization) -> Result<Residue> {
        let z = match normalization {
            Normalization::Primary => z.primary()?,
            Normalization::Raw => z.clone(),
        };
        let r = self.canonical_rep(&z);
        if !self.is_unit(r) {
            return Err(Error::NotCoprime(z.to_string(), self.modulus.to_string()));
        }
        Ok(r)
    }
}

fn to_i128(v: &BigInt) -> i128 {
    v.to_i128().expect("prime divisors of a bounded modulus are small")
}

/// A finite abelian group presented by its full element list.
pub trait FiniteAbelianGroup {
    type Elem: Copy + Eq + Hash + Ord;

    fn identity(&self) -> Self::Elem;
    fn op(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn elements(&self) -> &[Self::Elem];

    fn order(&self) -> u64 {
        self.elements().len() as u64
    }

    fn pow(&self, mut g: Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.op(acc, g);
            }
            g = self.op(g, g);
            e >>= 1;
        }
        acc
    }

    fn element_order(&self, g: Self::Elem) -> u64 {
        let mut ord = self.order();
        for (p, _) in factor_u64(ord) {
            while ord.is_multiple_of(p) && self.pow(g, ord / p) == self.identity() {
                ord /= p;
            }
        }
        ord
    }
}

/// Invariant factors `d1 | d2 | ...` with product equal to the group order.
///
/// For each prime `p`, `#{g : g^(p^k) = 1} = p^(sum_j min(k, a_j))` where the
/// `a_j` are the exponents of the cyclic p-factors, so successive ratios give
/// how many factors have exponent at least `k`.
pub fn invariant_factors<G: FiniteAbelianGroup>(group: &G) -> Vec<u64> {
    let orders: Vec<u64> = group.elements().iter().map(|&g| group.element_order(g)).collect();
    let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
    for (p, e) in factor_u64(group.order()) {
        let mut at_least = Vec::new();
        let mut prev = 1u64;
        let mut pk = 1u64;
        for _ in 1..=e {
            pk *= p;
            let killed = orders.iter().filter(|&&o| pk.is_multiple_of(o)).count() as u64;
            let mut ratio = killed / prev;
            let mut r = 0usize;
            while ratio > 1 {
                ratio /= p;
                r += 1;
            }
            at_least.push(r);
            prev = killed;
        }
        // exponent list, ascending
        let mut exps = Vec::new();
        for k in (1..=e as usize).rev() {
            let exactly = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
            exps.extend(std::iter::repeat_n(k as u32, exactly));
        }
        exps.reverse();
        per_prime.push((p, exps));
    }
    let rank = per_prime.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    let mut out = vec![1u64; rank];
    for (p, exps) in &per_prime {
        // the largest exponents go to the last invariant factors
        for (slot, &k) in out.iter_mut().rev().zip(exps.iter().rev()) {
            *slot *= p.pow(k);
        }
    }
    out
}

/// Elements of the subgroup generated by `gens`, by breadth-first closure.
pub fn closure<G: FiniteAbelianGroup>(group: &G, gens: &[G::Elem]) -> BTreeSet<G::Elem> {
    let mut seen: HashSet<G::Elem> = HashSet::from([group.identity()]);
    let mut frontier = vec![group.identity()];
    while let Some(h) = frontier.pop() {
        for &g in gens {
            let next = group.op(h, g);
            if seen.insert(next) {
                frontier.push(next);
            }
        }
    }
    seen.into_iter().collect()
}

/// `(R/βR)*` as an explicit list of invertible canonical representatives.
#[derive(Debug, Clone)]
pub struct UnitGroup {
    ring: ResidueRing,
    elements: Vec<Residue>,
    invariant_factors: Vec<u64>,
    generators: Vec<Residue>,
}

impl FiniteAbelianGroup for UnitGroup {
    type Elem = Residue;

    fn identity(&self) -> Residue {
        self.ring.one()
    }

    fn op(&self, a: Residue, b: Residue) -> Residue {
        self.ring.mul(a, b)
    }

    fn elements(&self) -> &[Residue] {
        &self.elements
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subgroup {
    pub elements: Vec<Residue>,
    pub order: u64,
}

impl Subgroup {
    pub fn contains(&self, r: &Residue) -> bool {
        self.elements.binary_search(r).is_ok()
    }
}

#[derive(Serialize)]
struct UnitGroupJson<'a> {
    modulus: &'a GaussInt,
    order: u64,
    invariant_factors: &'a [u64],
    generators: &'a [Residue],
}

impl UnitGroup {
    pub fn new(ring: ResidueRing) -> Result<UnitGroup> {
        if ring.size() > MAX_GROUP_NORM {
            return Err(Error::TooLarge(format!(
                "unit group of modulus norm {} exceeds enumeration bound {MAX_GROUP_NORM}",
                ring.size()
            )));
        }
        let elements: Vec<Residue> = ring.representatives().filter(|&r| ring.is_unit(r)).collect();
        let mut group = UnitGroup { ring, elements, invariant_factors: Vec::new(), generators: Vec::new() };
        group.invariant_factors = invariant_factors(&group);
        group.generators = group.greedy_generators();
        Ok(group)
    }

    /// Adds the first element of largest order outside the current span
    /// until everything is covered.
    fn greedy_generators(&self) -> Vec<Residue> {
        let mut by_order: Vec<(u64, Residue)> = self.elements.iter().map(|&g| (self.element_order(g), g)).collect();
        by_order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut gens = Vec::new();
        let mut span = closure(self, &gens);
        for (_, g) in by_order {
            if span.len() as u64 == self.order() {
                break;
            }
            if !span.contains(&g) {
                gens.push(g);
                span = closure(self, &gens);
            }
        }
        gens
    }

    pub fn ring(&self) -> &ResidueRing {
        &self.ring
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn generators(&self) -> &[Residue] {
        &self.generators
    }

    pub fn contains(&self, r: &Residue) -> bool {
        self.elements.binary_search(r).is_ok()
    }

    pub fn subgroup_generated(&self, gens: &[Residue]) -> Result<Subgroup> {
        if let Some(bad) = gens.iter().find(|g| !self.contains(g)) {
            return Err(Error::NotCoprime(bad.to_string(), self.ring.modulus.to_string()));
        }
        let elements: Vec<Residue> = closure(self, gens).into_iter().collect();
        Ok(Subgroup { order: elements.len() as u64, elements })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(UnitGroupJson {
            modulus: &self.ring.modulus,
            order: self.order(),
            invariant_factors: &self.invariant_factors,
            generators: &self.generators,
        })
        .expect("unit groups always serialize")
    }
}

/// `|(R/βR)*|` from the factorization; units give 1.
pub fn phi_norm(beta: &GaussInt) -> Result<u64> {
    if beta.is_zero() {
        return Err(Error::invalid("phi_norm(0) is undefined"));
    }
    if !beta.is_odd() {
        return Err(Error::NotOdd(beta.to_string()));
    }
    factor(beta)?.factors.iter().try_fold(1u64, |acc, (p, e)| {
        p.norm
            .checked_pow(e - 1)
            .and_then(|q| q.checked_mul(p.norm - 1))
            .and_then(|q| q.checked_mul(acc))
            .ok_or_else(|| Error::TooLarge(format!("phi_norm({beta}) overflows u64")))
    })
}
