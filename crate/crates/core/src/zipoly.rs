//! Exact univariate polynomials over Z[i].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussint::{gcd, GaussInt};

/// Coefficients in ascending order with a nonzero leading entry; the zero
/// polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "PolyJson", into = "PolyJson")]
pub struct PolyZi {
    coeffs: Vec<GaussInt>,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    coeffs: Vec<GaussInt>,
}

impl TryFrom<PolyJson> for PolyZi {
    type Error = Error;
    fn try_from(p: PolyJson) -> Result<Self> {
        Ok(PolyZi::new(p.coeffs))
    }
}

impl From<PolyZi> for PolyJson {
    fn from(p: PolyZi) -> Self {
        PolyJson { coeffs: p.coeffs }
    }
}

impl PolyZi {
    pub fn new(mut coeffs: Vec<GaussInt>) -> Self {
        while coeffs.last().is_some_and(GaussInt::is_zero) {
            coeffs.pop();
        }
        PolyZi { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        PolyZi::new(coeffs.iter().map(|&c| GaussInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        PolyZi::default()
    }

    pub fn one() -> Self {
        PolyZi::constant(GaussInt::one())
    }

    pub fn constant(c: GaussInt) -> Self {
        PolyZi::new(vec![c])
    }

    /// The monomial `X`.
    pub fn x() -> Self {
        PolyZi::monomial(GaussInt::one(), 1)
    }

    pub fn monomial(c: GaussInt, k: usize) -> Self {
        let mut v = vec![GaussInt::zero(); k];
        v.push(c);
        PolyZi::new(v)
    }

    pub fn coeffs(&self) -> &[GaussInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> GaussInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&GaussInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(GaussInt::is_one)
    }

    pub fn scale(&self, c: &GaussInt) -> PolyZi {
        PolyZi::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> PolyZi {
        PolyZi::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a.scale(&BigInt::from(k)))
                .collect(),
        )
    }

    pub fn eval(&self, z: &GaussInt) -> GaussInt {
        self.coeffs.iter().rev().fold(GaussInt::zero(), |acc, c| acc * z + c)
    }

    /// `f(u*X)`; scales the k-th coefficient by `u^k`.
    pub fn scale_variable(&self, u: &GaussInt) -> PolyZi {
        let mut pow = GaussInt::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &pow);
            pow = &pow * u;
        }
        PolyZi::new(out)
    }

    /// `f(g(X))` by Horner's rule.
    pub fn compose(&self, g: &PolyZi) -> PolyZi {
        self.coeffs.iter().rev().fold(PolyZi::zero(), |acc, c| &(&acc * g) + &PolyZi::constant(c.clone()))
    }

    pub fn pow(&self, e: u32) -> PolyZi {
        (0..e).fold(PolyZi::one(), |acc, _| &acc * self)
    }

    /// Canonical (first-quadrant) gcd of all coefficients; zero for the zero
    /// polynomial.
    pub fn content(&self) -> GaussInt {
        let mut g = GaussInt::zero();
        for c in &self.coeffs {
            if g.is_one() {
                break;
            }
            g = if g.is_zero() { c.canonical_associate() } else { gcd(&g, c).expect("g is nonzero") };
        }
        g
    }

    /// Divides every coefficient by `c`, which must divide all of them.
    pub fn div_scalar_exact(&self, c: &GaussInt) -> Result<PolyZi> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| a.div_exact(c).ok_or_else(|| Error::NotDivisible { remainder: format!("{a} mod {c}") }))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyZi::new(coeffs))
    }

    pub fn primitive_part(&self) -> PolyZi {
        if self.is_zero() {
            return PolyZi::zero();
        }
        let c = self.content();
        self.div_scalar_exact(&c).expect("content divides every coefficient")
    }

    /// Multiplies by the unit that puts the leading coefficient in the first
    /// quadrant.
    pub fn normalize_unit(&self) -> PolyZi {
        match self.leading() {
            None => PolyZi::zero(),
            Some(lc) => {
                let target = lc.canonical_associate();
                let u = GaussInt::units()
                    .into_iter()
                    .find(|u| (u * lc) == target)
                    .expect("some unit maps the leading coefficient to the first quadrant");
                self.scale(&u)
            }
        }
    }

    /// Pseudo-division: returns `(q, r)` with `lc(d)^(deg f - deg d + 1) f = q d + r`.
    pub fn pseudo_divrem(&self, d: &PolyZi) -> Result<(PolyZi, PolyZi)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let Some(df) = self.degree() else {
            return Ok((PolyZi::zero(), PolyZi::zero()));
        };
        if df < dd {
            return Ok((PolyZi::zero(), self.clone()));
        }
        let lc = d.leading().expect("nonzero divisor");
        let mut r = self.coeffs.clone();
        let mut q = vec![GaussInt::zero(); df - dd + 1];
        for k in (0..=df - dd).rev() {
            // r <- lc*r - r[k+dd] * X^k * d; q <- lc*q + r[k+dd] X^k
            let t = r[k + dd].clone();
            for c in r.iter_mut() {
                *c = &*c * lc;
            }
            for c in q.iter_mut() {
                *c = &*c * lc;
            }
            q[k] = &q[k] + &t;
            if !t.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = &r[k + j] - &(&t * dc);
                }
            }
        }
        r.truncate(dd);
        Ok((PolyZi::new(q), PolyZi::new(r)))
    }

    /// Division by a monic divisor over Z[i].
    pub fn divrem_monic(&self, d: &PolyZi) -> Result<(PolyZi, PolyZi)> {
        if !d.is_monic() {
            return Err(Error::invalid("divisor must be monic"));
        }
        self.pseudo_divrem(d)
    }

    /// Quotient `self / d` for monic `d` dividing `self`; otherwise
    /// `NotDivisible` carrying the remainder.
    pub fn exact_divide(&self, d: &PolyZi) -> Result<PolyZi> {
        let (q, r) = self.divrem_monic(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotDivisible { remainder: r.to_string() })
        }
    }

    /// Quotient over Q(i) scaled into Z[i]: returns `q` with
    /// `lc(d)^(deg self - deg d + 1) * self = q * d`, failing if `d` does not
    /// divide `self` over Q(i).
    pub fn pseudo_exact_divide(&self, d: &PolyZi) -> Result<PolyZi> {
        let (q, r) = self.pseudo_divrem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotDivisible { remainder: r.to_string() })
        }
    }

    /// Greatest common divisor over Q(i), returned primitive with a
    /// first-quadrant leading coefficient. Uses the subresultant remainder
    /// sequence so intermediate coefficients stay polynomially bounded.
    pub fn gcd(&self, other: &PolyZi) -> PolyZi {
        if self.is_zero() {
            return other.primitive_part().normalize_unit();
        }
        if other.is_zero() {
            return self.primitive_part().normalize_unit();
        }
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        let mut g = GaussInt::one();
        let mut h = GaussInt::one();
        loop {
            let delta = (a.degree().unwrap() - b.degree().unwrap()) as u32;
            let (_, r) = a.pseudo_divrem(&b).expect("b is nonzero");
            if r.is_zero() {
                break;
            }
            if r.degree() == Some(0) {
                return PolyZi::one();
            }
            let divisor = &g * &h.pow(delta);
            a = b;
            b = r.div_scalar_exact(&divisor).expect("subresultant division is exact");
            g = a.leading().unwrap().clone();
            // h <- g^delta / h^(delta-1)
            h = if delta == 0 {
                h
            } else {
                g.pow(delta).div_exact(&h.pow(delta - 1)).expect("subresultant division is exact")
            };
        }
        b.primitive_part().normalize_unit()
    }

    /// Resultant via the fraction-free (Bareiss) determinant of the
    /// Sylvester matrix.
    pub fn resultant(&self, other: &PolyZi) -> GaussInt {
        let (Some(m), Some(n)) = (self.degree(), other.degree()) else {
            return GaussInt::zero();
        };
        if m == 0 && n == 0 {
            return GaussInt::one();
        }
        let size = m + n;
        let mut mat = vec![vec![GaussInt::zero(); size]; size];
        for row in 0..n {
            for (k, c) in self.coeffs.iter().rev().enumerate() {
                mat[row][row + k] = c.clone();
            }
        }
        for row in 0..m {
            for (k, c) in other.coeffs.iter().rev().enumerate() {
                mat[n + row][row + k] = c.clone();
            }
        }
        bareiss_determinant(mat)
    }

    /// `(-1)^(n(n-1)/2) Res(f, f')` for monic `f`; degree one gives 1.
    pub fn discriminant(&self) -> Result<GaussInt> {
        let n = self.degree().filter(|&d| d >= 1).ok_or_else(|| Error::invalid("discriminant needs degree >= 1"))?;
        if !self.is_monic() {
            return Err(Error::invalid("discriminant requires a monic polynomial"));
        }
        if n == 1 {
            return Ok(GaussInt::one());
        }
        let res = self.resultant(&self.derivative());
        Ok(if (n * (n - 1) / 2) % 2 == 1 { -res } else { res })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomials always serialize")
    }

    pub fn from_json(text: &str) -> Result<PolyZi> {
        serde_json::from_str(text).map_err(|e| Error::Parse { pos: e.column(), msg: e.to_string() })
    }
}

fn bareiss_determinant(mut m: Vec<Vec<GaussInt>>) -> GaussInt {
    let n = m.len();
    let mut sign = false;
    let mut prev = GaussInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
                None => return GaussInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = GaussInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

impl fmt::Display for PolyZi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (k, c.is_one()) {
                (0, _) => write!(f, "({c})")?,
                (1, true) => write!(f, "X")?,
                (_, true) => write!(f, "X^{k}")?,
                (1, false) => write!(f, "({c})*X")?,
                (_, false) => write!(f, "({c})*X^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyZi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyZi[{self}]")
    }
}

impl Add<&PolyZi> for &PolyZi {
    type Output = PolyZi;
    fn add(self, rhs: &PolyZi) -> PolyZi {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyZi::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub<&PolyZi> for &PolyZi {
    type Output = PolyZi;
    fn sub(self, rhs: &PolyZi) -> PolyZi {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyZi::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul<&PolyZi> for &PolyZi {
    type Output = PolyZi;
    fn mul(self, rhs: &PolyZi) -> PolyZi {
        if self.is_zero() || rhs.is_zero() {
            return PolyZi::zero();
        }
        let mut out = vec![GaussInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        PolyZi::new(out)
    }
}

impl Neg for &PolyZi {
    type Output = PolyZi;
    fn neg(self) -> PolyZi {
        PolyZi::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<PolyZi> for PolyZi {
            type Output = PolyZi;
            fn $m(self, rhs: PolyZi) -> PolyZi { (&self).$m(&rhs) }
        }
        impl $tr<&PolyZi> for PolyZi {
            type Output = PolyZi;
            fn $m(self, rhs: &PolyZi) -> PolyZi { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(s: &str) -> GaussInt {
        s.parse().unwrap()
    }

    fn poly(cs: &[&str]) -> PolyZi {
        PolyZi::new(cs.iter().map(|s| g(s)).collect())
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(poly(&["1", "1"]) * poly(&["-1", "1"]), poly(&["-1", "0", "1"]));
        assert_eq!(poly(&["0", "2+i", "0", "0", "1"]).derivative(), poly(&["2+i", "0", "0", "4"]));
        assert!(poly(&["1", "0", "1"]).eval(&g("i")).is_zero());
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(poly(&["1", "0", "1"]).discriminant().unwrap(), g("-4"));
        assert_eq!(poly(&["1+i", "-1", "1"]).discriminant().unwrap(), g("-3-4i"));
        assert_eq!(poly(&["5", "1"]).discriminant().unwrap(), g("1"));
        assert!(poly(&["1", "2"]).discriminant().is_err());
        assert!(poly(&["7"]).discriminant().is_err());
        // X^4 + c has discriminant 256 c^3
        let c = g("-1+2i");
        assert_eq!(poly(&["-1+2i", "0", "0", "0", "1"]).discriminant().unwrap(), c.pow(3).scale(&256.into()));
    }

    #[test]
    fn exact_divide_examples() {
        assert_eq!(poly(&["-1", "0", "1"]).exact_divide(&poly(&["-1", "1"])).unwrap(), poly(&["1", "1"]));
        let f = poly(&["3", "2+i", "1"]);
        assert_eq!(f.exact_divide(&f).unwrap(), PolyZi::one());
        assert_eq!(
            poly(&["0", "1", "0", "0", "0", "1"]).exact_divide(&PolyZi::x()).unwrap(),
            poly(&["1", "0", "0", "0", "1"])
        );
        let err = poly(&["1", "0", "1"]).exact_divide(&poly(&["-1", "1"])).unwrap_err();
        assert!(matches!(err, Error::NotDivisible { remainder } if remainder == "(2)"));
        assert!(poly(&["1", "1"]).exact_divide(&poly(&["1", "2"])).is_err());
    }

    #[test]
    fn json_forms() {
        assert_eq!(poly(&["1", "0", "1"]).to_json(), r#"{"coeffs":["1","0","1"]}"#);
        assert_eq!(PolyZi::zero().to_json(), r#"{"coeffs":[]}"#);
        assert_eq!(PolyZi::from_json(r#"{"coeffs": ["-1+2i"]}"#).unwrap(), poly(&["-1+2i"]));
        assert!(PolyZi::from_json(r#"{"coeffs": ["1+"]}"#).is_err());
        assert!(PolyZi::from_json("not json").is_err());
        // trailing zeros are dropped on input
        assert_eq!(PolyZi::from_json(r#"{"coeffs": ["1", "0"]}"#).unwrap().degree(), Some(0));
    }

    #[test]
    fn gcd_finds_common_factor() {
        let common = poly(&["2+i", "1-i", "3"]);
        let a = &common * &poly(&["1", "1"]);
        let b = &common * &poly(&["-2i", "0", "1"]);
        assert_eq!(a.gcd(&b), common.primitive_part().normalize_unit());
        assert_eq!(poly(&["1", "1"]).gcd(&poly(&["-1", "1"])), PolyZi::one());
    }

    fn arb_poly(max_deg: usize, bound: i64) -> impl Strategy<Value = PolyZi> {
        prop::collection::vec((-bound..=bound, -bound..=bound), 0..=max_deg + 1)
            .prop_map(|v| PolyZi::new(v.into_iter().map(GaussInt::from).collect()))
    }

    fn arb_gauss(bound: i64) -> impl Strategy<Value = GaussInt> {
        (-bound..=bound, -bound..=bound).prop_map(GaussInt::from)
    }

    proptest! {
        #[test]
        fn ring_axioms(f in arb_poly(5, 20), g in arb_poly(5, 20), h in arb_poly(5, 20)) {
            prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
            prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
            prop_assert_eq!(&f * &g, &g * &f);
            prop_assert_eq!(&(&f + &g) - &g, f.clone());
        }

        #[test]
        fn leibniz_rule(f in arb_poly(6, 20), g in arb_poly(6, 20)) {
            let lhs = (&f * &g).derivative();
            let rhs = &(&f.derivative() * &g) + &(&f * &g.derivative());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn cubic_discriminant_formula(p in arb_gauss(50), q in arb_gauss(50)) {
            let f = PolyZi::new(vec![q.clone(), p.clone(), GaussInt::zero(), GaussInt::one()]);
            let expected = -(p.pow(3).scale(&4.into())) - q.pow(2).scale(&27.into());
            prop_assert_eq!(f.discriminant().unwrap(), expected);
        }

        #[test]
        fn pseudo_division_identity(f in arb_poly(7, 30), d in arb_poly(3, 30)) {
            prop_assume!(!d.is_zero());
            let (q, r) = f.pseudo_divrem(&d).unwrap();
            let df = f.degree().unwrap_or(0);
            let dd = d.degree().unwrap();
            let e = if f.is_zero() || df < dd { 0 } else { (df - dd + 1) as u32 };
            let lhs = f.scale(&d.leading().unwrap().pow(e));
            prop_assert_eq!(lhs, &(&q * &d) + &r);
            prop_assert!(r.degree().is_none_or(|k| k < dd));
        }

        #[test]
        fn gcd_divides_both(a in arb_poly(4, 10), b in arb_poly(4, 10), c in arb_poly(3, 10)) {
            prop_assume!(!c.is_zero() && !(a.is_zero() && b.is_zero()));
            let x = &a * &c;
            let y = &b * &c;
            prop_assume!(!x.is_zero() || !y.is_zero());
            let d = x.gcd(&y);
            prop_assert!(x.pseudo_exact_divide(&d).is_ok());
            prop_assert!(y.pseudo_exact_divide(&d).is_ok());
            if c.degree().unwrap() > 0 {
                prop_assert!(d.pseudo_exact_divide(&c.primitive_part()).is_ok());
            }
        }

        #[test]
        fn json_round_trip(f in arb_poly(8, 1_000_000)) {
            prop_assert_eq!(PolyZi::from_json(&f.to_json()).unwrap(), f);
        }
    }
}
