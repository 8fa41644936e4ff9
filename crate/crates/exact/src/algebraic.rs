//! Real algebraic numbers as a squarefree defining polynomial plus an
//! isolating interval, and the extended real line built on them.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

use crate::interval::Interval;
use crate::rational::{self, Rational};
use crate::upoly::UPoly;

/// A real algebraic number.
///
/// Irrational numbers keep an open interval `(lo, hi)` containing exactly one
/// root of `defining`, with neither endpoint a root. Rational numbers are
/// stored with `defining = den*x - num`, the degenerate interval `[r, r]` and
/// the cached value.
#[derive(Clone)]
pub struct AlgebraicNumber {
    defining: UPoly,
    lo: Rational,
    hi: Rational,
    rational: Option<Rational>,
}

impl AlgebraicNumber {
    pub fn from_rational(r: Rational) -> Self {
        AlgebraicNumber {
            defining: UPoly::linear_root(&r).primitive(),
            lo: r.clone(),
            hi: r.clone(),
            rational: Some(r),
        }
    }

    pub fn from_i64(n: i64) -> Self {
        AlgebraicNumber::from_rational(rational::rat(n))
    }

    /// Builds the unique root of `p` in `(lo, hi)`. The caller guarantees
    /// that `p` is squarefree with exactly one root there and that the
    /// endpoints are not roots. Linear polynomials yield rational numbers.
    pub fn from_isolating(p: UPoly, lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo < hi);
        debug_assert!(p.sign_at(&lo) * p.sign_at(&hi) < 0);
        let p = p.primitive();
        if p.degree() == 1 {
            let r = -&p.coeffs()[0] / &p.coeffs()[1];
            return AlgebraicNumber::from_rational(r);
        }
        AlgebraicNumber {
            defining: p,
            lo,
            hi,
            rational: None,
        }
    }

    pub fn defining(&self) -> &UPoly {
        &self.defining
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.rational.as_ref()
    }

    pub fn is_rational(&self) -> bool {
        self.rational.is_some()
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone())
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// One bisection step. May discover that the number is rational.
    pub fn refine(&self) -> AlgebraicNumber {
        if self.rational.is_some() {
            return self.clone();
        }
        let mid = (&self.lo + &self.hi) / rational::rat(2);
        let sm = self.defining.sign_at(&mid);
        if sm == 0 {
            return AlgebraicNumber::from_rational(mid);
        }
        let slo = self.defining.sign_at(&self.lo);
        let (lo, hi) = if slo * sm < 0 {
            (self.lo.clone(), mid)
        } else {
            (mid, self.hi.clone())
        };
        AlgebraicNumber {
            defining: self.defining.clone(),
            lo,
            hi,
            rational: None,
        }
    }

    /// Refines until the interval width is at most `w`.
    pub fn refine_to(&self, w: &Rational) -> AlgebraicNumber {
        let mut a = self.clone();
        while a.rational.is_none() && &a.width() > w {
            a = a.refine();
        }
        a
    }

    /// Sign of `q` at this number, exactly.
    pub fn sign_of(&self, q: &UPoly) -> i8 {
        if let Some(r) = &self.rational {
            return q.sign_at(r);
        }
        if q.is_zero() {
            return 0;
        }
        let g = q.gcd(&self.defining);
        if g.degree() > 0 && g.sign_at(&self.lo) * g.sign_at(&self.hi) < 0 {
            return 0;
        }
        let mut a = self.clone();
        loop {
            if let Some(r) = &a.rational {
                return q.sign_at(r);
            }
            if let Some(s) = q.eval_interval(&a.interval()).strict_sign() {
                return s;
            }
            a = a.refine();
        }
    }

    /// Exact comparison.
    pub fn cmp_exact(&self, other: &AlgebraicNumber) -> Ordering {
        match (&self.rational, &other.rational) {
            (Some(a), Some(b)) => return a.cmp(b),
            (Some(a), None) => return other.cmp_rational(a).reverse(),
            (None, Some(b)) => return self.cmp_rational(b),
            _ => {}
        }
        let mut a = self.clone();
        let mut b = other.clone();
        let mut checked_gcd = false;
        loop {
            if a.rational.is_some() || b.rational.is_some() {
                return a.cmp_exact(&b);
            }
            if a.hi <= b.lo {
                return Ordering::Less;
            }
            if b.hi <= a.lo {
                return Ordering::Greater;
            }
            if !checked_gcd {
                let lo = (&a.lo).max(&b.lo).clone();
                let hi = (&a.hi).min(&b.hi).clone();
                let g = a.defining.gcd(&b.defining);
                if g.degree() > 0 {
                    let sl = g.sign_at(&lo);
                    let sh = g.sign_at(&hi);
                    if sl * sh < 0 {
                        return Ordering::Equal;
                    }
                    if sl == 0 || sh == 0 {
                        // an endpoint of one interval is a root of the other's
                        // polynomial; refine and retry later
                    } else {
                        checked_gcd = true;
                    }
                } else {
                    checked_gcd = true;
                }
            }
            a = a.refine();
            b = b.refine();
        }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        if let Some(a) = &self.rational {
            return a.cmp(r);
        }
        if r <= &self.lo {
            return Ordering::Greater;
        }
        if r >= &self.hi {
            return Ordering::Less;
        }
        // r is inside the isolating interval, and not a root
        let sr = self.defining.sign_at(r);
        if sr == 0 {
            return Ordering::Equal;
        }
        if self.defining.sign_at(&self.lo) * sr < 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(r) = &self.rational {
            return rational::to_f64(r);
        }
        let scale = Rational::one() + self.lo.abs().max(self.hi.abs());
        let tiny = scale / Rational::from_integer(num_bigint::BigInt::one() << 60u32);
        let a = self.refine_to(&tiny);
        if let Some(r) = &a.rational {
            return rational::to_f64(r);
        }
        rational::to_f64(&((&a.lo + &a.hi) / rational::rat(2)))
    }

    /// A rational strictly between `self` and `other` (which must differ).
    pub fn rational_between(&self, other: &AlgebraicNumber) -> Rational {
        let (lo, hi) = match self.cmp_exact(other) {
            Ordering::Less => (self.clone(), other.clone()),
            Ordering::Greater => (other.clone(), self.clone()),
            Ordering::Equal => panic!("rational_between of equal numbers"),
        };
        let mut lo = lo;
        let mut hi = hi;
        loop {
            let a = lo.hi.clone();
            let b = hi.lo.clone();
            if a < b {
                return simplest_between(&a, &b);
            }
            if a == b && lo.rational.is_none() && hi.rational.is_none() {
                return a;
            }
            if a == b && (lo.rational.is_none() || hi.rational.is_none()) {
                // one side is rational and equals the other's open endpoint
                if lo.rational.is_none() {
                    lo = lo.refine();
                } else {
                    hi = hi.refine();
                }
                continue;
            }
            lo = lo.refine();
            hi = hi.refine();
        }
    }
}

/// A short rational in the open interval `(a, b)`: an integer if possible,
/// otherwise a dyadic refinement of the midpoint.
pub fn simplest_between(a: &Rational, b: &Rational) -> Rational {
    debug_assert!(a < b);
    let candidate = a.floor() + Rational::one();
    if &candidate < b {
        // prefer 0 when it lies inside
        if a < &Rational::zero() && b > &Rational::zero() {
            return Rational::zero();
        }
        return candidate;
    }
    let mut den = num_bigint::BigInt::from(2);
    loop {
        let d = Rational::from_integer(den.clone());
        let c = (a * &d).floor() + Rational::one();
        let r = c / &d;
        if &r < b {
            return r;
        }
        den *= 2;
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_exact(other) == Ordering::Equal
    }
}

impl Eq for AlgebraicNumber {}

impl PartialOrd for AlgebraicNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlgebraicNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rational {
            Some(r) => write!(f, "{r}"),
            None => write!(
                f,
                "root of {} in ({}, {}) ~ {:.6}",
                self.defining,
                self.lo,
                self.hi,
                self.to_f64()
            ),
        }
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rational {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "{:.6}", self.to_f64()),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct AlgRepr {
    defining: Vec<String>,
    interval: (String, String),
}

impl Serialize for AlgebraicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        AlgRepr {
            defining: self.defining.coeffs().iter().map(rational::to_string).collect(),
            interval: (rational::to_string(&self.lo), rational::to_string(&self.hi)),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraicNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = AlgRepr::deserialize(d)?;
        let coeffs = r
            .defining
            .iter()
            .map(|c| rational::parse(c))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        let p = UPoly::new(coeffs);
        let lo = rational::parse(&r.interval.0).map_err(D::Error::custom)?;
        let hi = rational::parse(&r.interval.1).map_err(D::Error::custom)?;
        if p.degree() == 0 {
            return Err(D::Error::custom("constant defining polynomial"));
        }
        if p.degree() == 1 {
            let v = -&p.coeffs()[0] / &p.coeffs()[1];
            return Ok(AlgebraicNumber::from_rational(v));
        }
        if lo >= hi || p.sign_at(&lo) * p.sign_at(&hi) >= 0 {
            return Err(D::Error::custom("interval does not isolate a root"));
        }
        Ok(AlgebraicNumber {
            defining: p,
            lo,
            hi,
            rational: None,
        })
    }
}

/// The extended real line `[-inf, +inf]` over algebraic numbers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "tag", content = "value")]
#[allow(clippy::large_enum_variant)]
pub enum ExtendedReal {
    #[serde(rename = "NEG_INF")]
    NegInf,
    #[serde(rename = "FINITE")]
    Finite(AlgebraicNumber),
    #[serde(rename = "POS_INF")]
    PosInf,
}

impl ExtendedReal {
    pub fn finite(&self) -> Option<&AlgebraicNumber> {
        match self {
            ExtendedReal::Finite(a) => Some(a),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtendedReal::NegInf => f64::NEG_INFINITY,
            ExtendedReal::PosInf => f64::INFINITY,
            ExtendedReal::Finite(a) => a.to_f64(),
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::NegInf => write!(f, "-inf"),
            ExtendedReal::PosInf => write!(f, "+inf"),
            ExtendedReal::Finite(a) => write!(f, "{a}"),
        }
    }
}
