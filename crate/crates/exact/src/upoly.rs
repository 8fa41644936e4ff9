//! Dense univariate polynomials over Q.
//!
//! Coefficients are stored in ascending degree order; the zero polynomial is
//! the empty vector and the last coefficient is never zero otherwise.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::interval::Interval;
use crate::rational::{self, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

/// Pseudo-remainder of `a` by `b` (nonzero, no leading zeros), trimmed.
fn int_prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db {
        let top = r.pop().expect("nonempty");
        let shift = r.len() - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, bc) in b[..db].iter().enumerate() {
            r[shift + j] -= &top * bc;
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

/// Divides out the content; the sign is kept.
fn int_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v
        .iter()
        .fold(BigInt::zero(), |g, c| num_integer::Integer::gcd(&g, c));
    if !g.is_zero() && !g.is_one() {
        for c in v.iter_mut() {
            *c /= &g;
        }
    }
    v
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        UPoly::new(c.iter().map(|&v| rational::rat(v)).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: vec![] }
    }

    pub fn constant(c: Rational) -> Self {
        UPoly::new(vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: &Rational) -> Self {
        UPoly::new(vec![-r.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Sign of the value at `x`. Integer coefficients are evaluated in
    /// homogenized integer form `sum c_i n^i d^(deg - i)` for `x = n/d`,
    /// which avoids normalizing a fraction at every step.
    pub fn sign_at(&self, x: &Rational) -> i8 {
        if !self.coeffs.iter().all(|c| c.is_integer()) {
            return rational::sign(&self.eval(x));
        }
        let Some(top) = self.coeffs.last() else {
            return 0;
        };
        let (n, d) = (x.numer(), x.denom());
        let mut acc: BigInt = top.to_integer();
        let mut dpow = BigInt::one();
        for c in self.coeffs.iter().rev().skip(1) {
            dpow *= d;
            acc = acc * n + c.numer() * &dpow;
        }
        match acc.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    pub fn eval_interval(&self, x: &Interval) -> Interval {
        let mut acc = Interval::point(Rational::zero());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &Interval::point(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in o.coeffs.iter().enumerate() {
            v[i] += c;
        }
        UPoly::new(v)
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UPoly::new(v)
    }

    /// Euclidean division. Panics on division by zero.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.degree() < d.degree() || self.is_zero() {
            return (UPoly::zero(), self.clone());
        }
        let mut r = self.coeffs.clone();
        let dl = d.lc();
        let dd = d.degree();
        let mut q = vec![Rational::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &dl;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(Rational::one() / self.lc()))
    }

    /// Monic gcd, by a primitive remainder sequence over the integers.
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        if self.is_zero() {
            return o.monic();
        }
        if o.is_zero() {
            return self.monic();
        }
        let ints = |p: &UPoly| -> Vec<BigInt> {
            p.primitive().coeffs.iter().map(|c| c.to_integer()).collect()
        };
        let (mut a, mut b) = (ints(self), ints(o));
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = int_primitive(int_prem(&a, &b));
            a = b;
            b = r;
        }
        UPoly::new(a.into_iter().map(Rational::from_integer).collect()).monic()
    }

    /// Integer coefficients with unit content and positive leading coefficient.
    pub fn primitive(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = rational::denom_lcm(&self.coeffs);
        let scaled: Vec<Rational> = self
            .coeffs
            .iter()
            .map(|c| c * Rational::from_integer(l.clone()))
            .collect();
        let g = rational::numer_gcd(&scaled);
        let mut g = Rational::from_integer(g);
        if scaled.last().unwrap().is_negative() {
            g = -g;
        }
        UPoly::new(scaled.into_iter().map(|c| c / &g).collect())
    }

    pub fn squarefree_part(&self) -> UPoly {
        if self.degree() == 0 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.primitive()
    }

    /// `p(x + a)`
    pub fn taylor_shift(&self, a: &Rational) -> UPoly {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &c[j + 1] * a;
                c[j] += t;
            }
        }
        UPoly::new(c)
    }

    /// `p(s * x)`
    pub fn scale_var(&self, s: &Rational) -> UPoly {
        let mut f = Rational::one();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            v.push(c * &f);
            f *= s;
        }
        UPoly::new(v)
    }

    /// `x^n p(1/x)` with `n = deg p`.
    pub fn reverse(&self) -> UPoly {
        let mut v = self.coeffs.clone();
        v.reverse();
        UPoly::new(v)
    }

    pub fn sign_variations(&self) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for c in &self.coeffs {
            let s = rational::sign(c);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Bound `B` with every real root in `(-B, B)`.
    pub fn cauchy_bound(&self) -> Rational {
        let lc = self.lc().abs();
        let m = self
            .coeffs
            .iter()
            .take(self.degree())
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero);
        Rational::one() + m / lc
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational::to_f64).collect()
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}
