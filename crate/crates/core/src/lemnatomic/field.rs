//! The function field `Q(i)(s, c)` with `c^2 = 1 - s^4`.

use std::fmt;

use crate::error::{Error, Result};
use crate::gaussint::GaussInt;
use crate::lemniscate::PairScalar;
use crate::zipoly::PolyZi;

/// `(P(s) + Q(s) c) / D(s)` with `P, Q, D` over Z[i], kept reduced: no common
/// polynomial factor, no common content, and `lc(D)` in the first quadrant.
#[derive(Clone, PartialEq, Eq)]
pub struct SlFieldElement {
    p: PolyZi,
    q: PolyZi,
    d: PolyZi,
}

/// `1 - s^4`.
fn quartic() -> PolyZi {
    PolyZi::from_ints(&[1, 0, 0, 0, -1])
}

impl SlFieldElement {
    /// Builds and reduces `(p + q c) / d`.
    pub fn new(p: PolyZi, q: PolyZi, d: PolyZi) -> Result<SlFieldElement> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(SlFieldElement { p, q, d }.reduced())
    }

    /// The coordinate function `s`.
    pub fn s() -> SlFieldElement {
        SlFieldElement { p: PolyZi::x(), q: PolyZi::zero(), d: PolyZi::one() }
    }

    /// The coordinate function `c`.
    pub fn c() -> SlFieldElement {
        SlFieldElement { p: PolyZi::zero(), q: PolyZi::one(), d: PolyZi::one() }
    }

    pub fn from_gaussint(z: GaussInt) -> SlFieldElement {
        SlFieldElement { p: PolyZi::constant(z), q: PolyZi::zero(), d: PolyZi::one() }.reduced()
    }

    pub fn numerator_pure(&self) -> &PolyZi {
        &self.p
    }

    pub fn numerator_c(&self) -> &PolyZi {
        &self.q
    }

    pub fn denominator(&self) -> &PolyZi {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// True when the element lies in `Q(i)(s)`.
    pub fn is_c_free(&self) -> bool {
        self.q.is_zero()
    }

    fn reduced(self) -> SlFieldElement {
        let SlFieldElement { p, q, d } = self;
        if p.is_zero() && q.is_zero() {
            return SlFieldElement { p, q, d: PolyZi::one() };
        }
        let g = p.gcd(&q).gcd(&d);
        let (p, q, d) = if g.degree().unwrap_or(0) > 0 {
            // pseudo-quotients carry powers of lc(g); equalize them so they cancel
            let lc = g.leading().expect("nonzero gcd").clone();
            let parts: Vec<(PolyZi, u32)> = [&p, &q, &d]
                .iter()
                .map(|f| {
                    let e = f.degree().map_or(0, |k| (k + 1 - g.degree().unwrap()) as u32);
                    let quotient = if f.is_zero() {
                        PolyZi::zero()
                    } else {
                        f.pseudo_exact_divide(&g).expect("gcd divides each part")
                    };
                    (quotient, e)
                })
                .collect();
            let top = parts.iter().map(|(_, e)| *e).max().unwrap_or(0);
            let mut it = parts.into_iter().map(|(f, e)| f.scale(&lc.pow(top - e)));
            (it.next().unwrap(), it.next().unwrap(), it.next().unwrap())
        } else {
            (p, q, d)
        };
        // common content
        let mut content = d.content();
        for f in [&p, &q] {
            if !f.is_zero() {
                content = crate::gaussint::gcd(&content, &f.content()).expect("content of nonzero d");
            }
        }
        let (p, q, d) = if content.is_one() {
            (p, q, d)
        } else {
            let div = |f: &PolyZi| f.div_scalar_exact(&content).expect("content divides");
            (div(&p), div(&q), div(&d))
        };
        // first-quadrant leading coefficient of d
        let lc = d.leading().expect("nonzero").clone();
        let target = lc.canonical_associate();
        let u = GaussInt::units().into_iter().find(|u| u * &lc == target).expect("unit exists");
        if u.is_one() {
            SlFieldElement { p, q, d }
        } else {
            SlFieldElement { p: p.scale(&u), q: q.scale(&u), d: d.scale(&u) }
        }
    }

    pub fn add(&self, o: &SlFieldElement) -> SlFieldElement {
        if self.d == o.d {
            return SlFieldElement { p: &self.p + &o.p, q: &self.q + &o.q, d: self.d.clone() }.reduced();
        }
        SlFieldElement {
            p: &(&self.p * &o.d) + &(&o.p * &self.d),
            q: &(&self.q * &o.d) + &(&o.q * &self.d),
            d: &self.d * &o.d,
        }
        .reduced()
    }

    pub fn neg(&self) -> SlFieldElement {
        SlFieldElement { p: -&self.p, q: -&self.q, d: self.d.clone() }
    }

    pub fn sub(&self, o: &SlFieldElement) -> SlFieldElement {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &SlFieldElement) -> SlFieldElement {
        let qq = &self.q * &o.q;
        SlFieldElement {
            p: &(&self.p * &o.p) + &(&qq * &quartic()),
            q: &(&self.p * &o.q) + &(&self.q * &o.p),
            d: &self.d * &o.d,
        }
        .reduced()
    }

    /// Multiplies by the conjugate `P - Q c` to clear `c` from the denominator.
    pub fn div(&self, o: &SlFieldElement) -> Result<SlFieldElement> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // (P + Qc)(P - Qc) = P^2 - Q^2 (1 - s^4)
        let norm = &(&o.p * &o.p) - &(&(&o.q * &o.q) * &quartic());
        let conj = SlFieldElement { p: o.p.clone(), q: -&o.q, d: PolyZi::one() };
        let num = self.mul(&conj);
        Ok(SlFieldElement { p: &num.p * &o.d, q: &num.q * &o.d, d: &num.d * &norm }.reduced())
    }

    /// Substitutes `s -> u s` with `c` fixed.
    pub fn scale_s(&self, u: &GaussInt) -> SlFieldElement {
        SlFieldElement { p: self.p.scale_variable(u), q: self.q.scale_variable(u), d: self.d.scale_variable(u) }
            .reduced()
    }

    /// `self(other(s))` for elements of `Q(i)(s)`.
    pub fn compose(&self, inner: &SlFieldElement) -> Result<SlFieldElement> {
        if !self.is_c_free() || !inner.is_c_free() {
            return Err(Error::invalid("composition is only defined for c-free elements"));
        }
        // homogenize: f(P/D) = F(P, D) / D^n with n = max degree
        let n = self.p.degree().unwrap_or(0).max(self.d.degree().unwrap_or(0));
        let homog = |f: &PolyZi| -> PolyZi {
            let mut acc = PolyZi::zero();
            let mut ppow = PolyZi::one();
            let dpows: Vec<PolyZi> = (0..=n).map(|k| inner.d.pow(k as u32)).collect();
            for (k, coeff) in f.coeffs().iter().enumerate() {
                if !coeff.is_zero() {
                    acc = &acc + &(&ppow * &dpows[n - k]).scale(coeff);
                }
                ppow = &ppow * &inner.p;
            }
            acc
        };
        SlFieldElement::new(homog(&self.p), PolyZi::zero(), homog(&self.d))
    }
}

impl PairScalar for SlFieldElement {
    fn add(&self, o: &Self) -> Self {
        SlFieldElement::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        SlFieldElement::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        SlFieldElement::mul(self, o)
    }
    fn div(&self, o: &Self) -> Result<Self> {
        SlFieldElement::div(self, o)
    }
    fn constant(&self, n: i64) -> Self {
        SlFieldElement::from_gaussint(GaussInt::from(n))
    }
}

impl fmt::Debug for SlFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({}) + ({})*c) / ({})", self.p, self.q, self.d)
    }
}
