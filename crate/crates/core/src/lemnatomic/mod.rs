//! Lemnatomic polynomials `Λ_β` by exact symbolic computation.
//!
//! `sl(βz)` is built as a rational function of `s = sl(z)` from the addition
//! law, its numerator gives the polynomial `T_β` vanishing at every β-torsion
//! value, and `Λ_β` is `T_β` with the factors `Λ_d` of the proper divisors
//! `d | β` divided out.

mod field;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use field::SlFieldElement;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gaussint::{factor, GaussInt};
use crate::lemniscate::{lemnatomic_numeric, sl_pair_scalar_mul, SlPair};
use crate::residue::phi_norm;
use crate::zipoly::PolyZi;

/// Primary divisors of `beta` up to units, including 1 and `beta` itself,
/// ordered by norm (ties by real part, then descending imaginary part).
pub fn divisors_up_to_units(beta: &GaussInt) -> Result<Vec<GaussInt>> {
    if beta.is_zero() {
        return Err(Error::invalid("zero has infinitely many divisors"));
    }
    if !beta.is_odd() {
        return Err(Error::NotOdd(beta.to_string()));
    }
    let mut divisors = vec![GaussInt::one()];
    for (p, e) in factor(beta)?.factors {
        let mut next = Vec::with_capacity(divisors.len() * (e as usize + 1));
        for d in &divisors {
            let mut power = d.clone();
            next.push(power.clone());
            for _ in 0..e {
                power = &power * &p.value;
                next.push(power.clone());
            }
        }
        divisors = next;
    }
    // products of primary elements are primary
    divisors.sort_by(|a, b| a.listing_cmp(b));
    Ok(divisors)
}

/// Odd, primary, non-unit form of `beta`, or an input error.
pub fn normalize_modulus(beta: &GaussInt) -> Result<GaussInt> {
    if beta.is_zero() || beta.is_unit() {
        return Err(Error::invalid(format!("{beta} must be a non-zero non-unit")));
    }
    beta.primary()
}

fn small_parts(beta: &GaussInt) -> Result<(i64, i64)> {
    match (beta.re.to_i64(), beta.im.to_i64()) {
        (Some(m), Some(n)) => Ok((m, n)),
        _ => Err(Error::TooLarge(format!("{beta} has parts beyond 64 bits"))),
    }
}

/// The pair `(sl(βz), sl'(βz))` as elements of `Q(i)(s, c)` where
/// `(s, c) = (sl(z), sl'(z))`.
pub fn mult_map_pair(beta: &GaussInt) -> Result<SlPair<SlFieldElement>> {
    if beta.is_zero() {
        return Err(Error::invalid("multiplication by zero has no rational form"));
    }
    let (m, n) = small_parts(beta)?;
    let base = SlPair { s: SlFieldElement::s(), c: SlFieldElement::c() };
    let neutral = || SlPair { s: SlFieldElement::from_gaussint(GaussInt::zero()), c: SlFieldElement::from_gaussint(GaussInt::one()) };
    let real = sl_pair_scalar_mul(&base, m, neutral())?;
    if n == 0 {
        return Ok(real);
    }
    // sl(n i z) is sl(n w) at w = iz, where sl(iz) = i s and sl'(iz) = c
    let imag = sl_pair_scalar_mul(&base, n, neutral())?;
    let i = GaussInt::i();
    let imag = SlPair { s: imag.s.scale_s(&i), c: imag.c.scale_s(&i) };
    if m == 0 {
        return Ok(imag);
    }
    crate::lemniscate::sl_pair_add(&real, &imag)
}

/// `sl(βz)` as a rational function of `s`. For odd `β` the `c` part vanishes
/// identically; a nonzero one is reported as a broken invariant.
pub fn mult_map(beta: &GaussInt) -> Result<SlFieldElement> {
    let pair = mult_map_pair(beta)?;
    if beta.is_odd() && !pair.s.is_c_free() {
        return Err(Error::Invariant(format!("sl({beta} z) has a nonzero c-component")));
    }
    Ok(pair.s)
}

/// Makes a primitive polynomial monic; its leading coefficient must be a unit.
fn monic_from_primitive(f: &PolyZi, what: &str) -> Result<PolyZi> {
    let f = f.primitive_part();
    let lc = f.leading().ok_or_else(|| Error::Invariant(format!("{what} vanished")))?.clone();
    let inv = lc
        .unit_inverse()
        .ok_or_else(|| Error::Invariant(format!("{what} has non-unit leading coefficient {lc} after content removal")))?;
    Ok(f.scale(&inv))
}

/// `T_β`: the monic polynomial whose roots are `sl` at all β-torsion points.
pub fn all_torsion_poly(beta: &GaussInt) -> Result<PolyZi> {
    let beta = normalize_modulus(beta)?;
    let r = mult_map(&beta)?;
    let t = monic_from_primitive(r.numerator_pure(), "numerator of sl(βz)")?;
    let expected = beta.norm_u64()? as usize;
    if t.degree() != Some(expected) {
        return Err(Error::Invariant(format!("T_{beta} has degree {:?}, expected {expected}", t.degree())));
    }
    if !t.coeff(0).is_zero() {
        return Err(Error::Invariant(format!("T_{beta} does not vanish at 0")));
    }
    Ok(t)
}

/// Memo of exact lemnatomic polynomials keyed by primary modulus.
#[derive(Debug, Default, Clone)]
pub struct ExactCache {
    polys: HashMap<GaussInt, PolyZi>,
}

impl ExactCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, beta: &GaussInt) -> Option<&PolyZi> {
        self.polys.get(beta)
    }

    /// `Λ_β = T_β / Π_{d | β, d ≠ β} Λ_d` with `Λ_1 = X`.
    pub fn lemnatomic(&mut self, beta: &GaussInt) -> Result<PolyZi> {
        if beta.is_unit() {
            return Ok(PolyZi::x());
        }
        let beta = normalize_modulus(beta)?;
        if let Some(p) = self.polys.get(&beta) {
            return Ok(p.clone());
        }
        let mut quotient = all_torsion_poly(&beta)?;
        for d in divisors_up_to_units(&beta)? {
            if d == beta {
                continue;
            }
            let lambda_d = self.lemnatomic(&d)?;
            quotient = quotient.exact_divide(&lambda_d).map_err(|e| match e {
                Error::NotDivisible { remainder } => {
                    Error::Invariant(format!("Λ_{d} does not divide T_{beta}; remainder {remainder}"))
                }
                other => other,
            })?;
        }
        let expected = phi_norm(&beta)? as usize;
        if quotient.degree() != Some(expected) || !quotient.is_monic() {
            return Err(Error::Invariant(format!("Λ_{beta} has degree {:?}, expected {expected}", quotient.degree())));
        }
        self.polys.insert(beta, quotient.clone());
        Ok(quotient)
    }
}

/// Which pipeline produced a polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Numeric,
    Both,
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Method::Exact),
            "numeric" => Ok(Method::Numeric),
            "both" => Ok(Method::Both),
            other => Err(Error::invalid(format!("unknown method '{other}'"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Exact => "exact",
            Method::Numeric => "numeric",
            Method::Both => "both",
        })
    }
}

/// A computed `Λ_β` with provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemnatomicRecord {
    pub beta: GaussInt,
    pub degree: usize,
    pub coefficients: PolyZi,
    pub method: Method,
    /// Precision of the accepted numeric run, if one was made.
    pub precision_bits: Option<u32>,
    /// Set when both pipelines ran.
    pub pipelines_agree: Option<bool>,
    /// SHA-256 over the modulus and coefficients, hex encoded.
    pub checksum: String,
}

impl LemnatomicRecord {
    pub fn new(beta: GaussInt, coefficients: PolyZi, method: Method, precision_bits: Option<u32>) -> Self {
        let checksum = content_checksum(&beta, &coefficients);
        LemnatomicRecord {
            degree: coefficients.degree().unwrap_or(0),
            beta,
            coefficients,
            method,
            precision_bits,
            pipelines_agree: None,
            checksum,
        }
    }

    /// Recomputes the checksum and the structural invariants.
    pub fn validate(&self) -> Result<()> {
        if self.checksum != content_checksum(&self.beta, &self.coefficients) {
            return Err(Error::Invariant("checksum mismatch".into()));
        }
        let expected = phi_norm(&self.beta)? as usize;
        if self.degree != expected || self.coefficients.degree() != Some(expected) {
            return Err(Error::Invariant(format!("degree {} differs from phi_norm {expected}", self.degree)));
        }
        if !self.coefficients.is_monic() {
            return Err(Error::Invariant("polynomial is not monic".into()));
        }
        Ok(())
    }
}

pub fn content_checksum(beta: &GaussInt, coefficients: &PolyZi) -> String {
    let mut h = Sha256::new();
    h.update(beta.to_string().as_bytes());
    h.update(b"\n");
    h.update(coefficients.to_json().as_bytes());
    hex::encode(h.finalize())
}

/// `Λ_β` by the chosen pipeline. With [`Method::Both`] the two results must
/// agree coefficientwise, otherwise an invariant error is returned.
pub fn compute_lemnatomic(beta: &GaussInt, method: Method, precision_bits: u32, exec: Exec) -> Result<LemnatomicRecord> {
    let beta = normalize_modulus(beta)?;
    match method {
        Method::Exact => {
            let p = ExactCache::new().lemnatomic(&beta)?;
            Ok(LemnatomicRecord::new(beta, p, method, None))
        }
        Method::Numeric => {
            let (p, report) = lemnatomic_numeric(&beta, precision_bits, exec)?;
            Ok(LemnatomicRecord::new(beta, p, method, Some(report.precision_bits)))
        }
        Method::Both => {
            let exact = ExactCache::new().lemnatomic(&beta)?;
            let (numeric, report) = lemnatomic_numeric(&beta, precision_bits, exec)?;
            if exact != numeric {
                return Err(Error::Invariant(format!("exact and numeric Λ_{beta} differ: {exact} vs {numeric}")));
            }
            let mut record = LemnatomicRecord::new(beta, exact, method, Some(report.precision_bits));
            record.pipelines_agree = Some(true);
            Ok(record)
        }
    }
}

#[cfg(test)]
mod tests;
