//! Real root isolation: Descartes' rule of signs with bisection for rational
//! polynomials, and a norm-based reduction for polynomials whose coefficients
//! are evaluated at algebraic points.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebraic::AlgebraicNumber;
use crate::gcd;
use crate::interval::Interval;
use crate::poly::Polynomial;
use crate::rational::{self, Rational};
use crate::resultant;
use crate::sign;
use crate::upoly::UPoly;
use crate::Error;

/// Number of sign variations of the polynomial whose positive roots
/// correspond to the roots of `p` in `(a, b)`. `p` has integer coefficients.
///
/// With `a = A/D`, `b = B/D` this is `x^d s(1/x)` shifted by one, where
/// `s(t) = D^d p(a + (b - a) t)`; all arithmetic is on integers.
fn descartes_count(p: &[BigInt], a: &Rational, b: &Rational) -> usize {
    let d = p.len() - 1;
    let den = num_integer::Integer::lcm(a.denom(), b.denom());
    let big_a = a.numer() * (&den / a.denom());
    let big_w = b.numer() * (&den / b.denom()) - &big_a;
    // Horner in the homogenized form: s = s * (A + W t) + c_i D^(d - i)
    let mut s: Vec<BigInt> = vec![p[d].clone()];
    let mut dpow = BigInt::one();
    for c in p[..d].iter().rev() {
        dpow *= &den;
        let mut next = vec![BigInt::zero(); s.len() + 1];
        for (j, v) in s.iter().enumerate() {
            next[j] += v * &big_a;
            next[j + 1] += v * &big_w;
        }
        next[0] += c * &dpow;
        s = next;
    }
    s.reverse();
    // Taylor shift by 1
    let n = s.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = s[j + 1].clone();
            s[j] += t;
        }
    }
    let mut last = num_bigint::Sign::NoSign;
    let mut count = 0;
    for c in &s {
        let sg = c.sign();
        if sg != num_bigint::Sign::NoSign {
            if last != num_bigint::Sign::NoSign && sg != last {
                count += 1;
            }
            last = sg;
        }
    }
    count
}

/// A split point of `(a, b)` that is not a root of `p`.
fn split_point(p: &UPoly, a: &Rational, b: &Rational) -> Rational {
    let w = b - a;
    let mut k = 2i64;
    loop {
        for j in 1..k {
            let m = a + &w * rational::ratio(j, k);
            if p.sign_at(&m) != 0 {
                return m;
            }
        }
        k += 1;
    }
}

/// Isolating intervals for the real roots of a squarefree `p`, ordered
/// from left to right; endpoints are never roots.
pub fn isolate_intervals(p: &UPoly) -> Vec<(Rational, Rational)> {
    if p.degree() == 0 {
        return vec![];
    }
    let b = p.cauchy_bound();
    let ints: Vec<BigInt> = p.primitive().coeffs().iter().map(|c| c.to_integer()).collect();
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        match descartes_count(&ints, &lo, &hi) {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let m = split_point(p, &lo, &hi);
                // push the right half first so the left half is handled first
                stack.push((m.clone(), hi));
                stack.push((lo, m));
            }
        }
    }
    out
}

/// The rational root of `p` in `(lo, hi)`, if any; `p` has integer
/// coefficients and at most one root there.
fn rational_root_in(p: &UPoly, lo: &Rational, hi: &Rational) -> Option<Rational> {
    let lc = p.lc().abs();
    let lcr = lc.clone();
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    // narrow until at most one candidate k/lc fits
    while &hi - &lo >= Rational::one() / &lcr {
        let m = (&lo + &hi) / rational::rat(2);
        if p.sign_at(&m) == 0 {
            return Some(m);
        }
        if p.sign_at(&lo) * p.sign_at(&m) < 0 {
            hi = m;
        } else {
            lo = m;
        }
    }
    let k = (&lo * &lcr).floor() + Rational::one();
    let cand = k / &lcr;
    if cand > lo && cand < hi && p.sign_at(&cand) == 0 {
        Some(cand)
    } else {
        None
    }
}

/// All real roots of a univariate rational polynomial, strictly increasing.
pub fn isolate_real_roots(p: &UPoly) -> Result<Vec<AlgebraicNumber>, Error> {
    if p.is_zero() {
        return Err(Error::CurtainFibre);
    }
    let sq = p.squarefree_part();
    let ivs = isolate_intervals(&sq);
    let mut rats: Vec<Option<Rational>> = Vec::with_capacity(ivs.len());
    let mut reduced = sq.clone();
    for (lo, hi) in &ivs {
        let r = rational_root_in(&sq, lo, hi);
        if let Some(r) = &r {
            reduced = reduced.div_rem(&UPoly::linear_root(r)).0;
        }
        rats.push(r);
    }
    let reduced = reduced.primitive();
    Ok(ivs
        .into_iter()
        .zip(rats)
        .map(|((lo, hi), r)| match r {
            Some(r) => AlgebraicNumber::from_rational(r),
            None => AlgebraicNumber::from_isolating(reduced.clone(), lo, hi),
        })
        .collect())
}

/// Real roots in the last variable of `p` with the first `n - 1` variables
/// fixed at `point`.
///
/// Fails with `CurtainFibre` when `p` vanishes identically on that fibre.
pub fn isolate_roots_at(
    p: &Polynomial,
    point: &[AlgebraicNumber],
) -> Result<Vec<AlgebraicNumber>, Error> {
    let n = p.nvars();
    if point.len() + 1 != n {
        return Err(Error::InvalidPoint(format!(
            "expected {} coordinates, got {}",
            n - 1,
            point.len()
        )));
    }
    let z = n - 1;
    let mut q = p.clone();
    let mut irr = Vec::new();
    for (i, a) in point.iter().enumerate() {
        match a.as_rational() {
            Some(r) => q = q.substitute(i, r),
            None => {
                if q.uses_var(i) {
                    irr.push(i);
                }
            }
        }
    }
    if irr.is_empty() {
        let u = q.to_upoly(z).expect("only the last variable remains");
        return isolate_real_roots(&u);
    }
    // Drop coefficients that vanish at the point so the degree in z is exact.
    let coeffs = q.coeffs_in(z);
    let mut kept = coeffs.clone();
    let mut any = false;
    for c in kept.iter_mut() {
        if c.is_zero() {
            continue;
        }
        if sign::sign_at_partial(c, point) == 0 {
            *c = Polynomial::zero(n);
        } else {
            any = true;
        }
    }
    if !any {
        return Err(Error::CurtainFibre);
    }
    let q = Polynomial::from_coeffs_in(n, z, &kept);
    if !q.uses_var(z) {
        return Ok(vec![]);
    }
    let mut norm = q.clone();
    for &i in &irr {
        if !norm.uses_var(i) {
            continue;
        }
        let a = &point[i];
        let m = Polynomial::from_upoly(n, i, a.defining());
        let g = gcd::poly_gcd(&norm, &m);
        let m = if g.is_constant() {
            m
        } else {
            let gu = g.to_upoly(i).expect("gcd with a univariate polynomial");
            if a.sign_of(&gu) == 0 {
                return Err(Error::NormDegenerate);
            }
            m.div_exact(&g).expect("gcd divides")
        };
        norm = resultant::resultant(&norm, &m, i).expect("nonzero inputs");
        if norm.is_zero() {
            return Err(Error::NormDegenerate);
        }
    }
    let nu = norm.to_upoly(z).expect("all other variables eliminated");
    let candidates = isolate_real_roots(&nu)?;
    let want = distinct_real_roots_at(&q, point);
    Ok(exclude_spurious(&q, point, candidates, want))
}

/// Keeps the `want` candidates at which `q(point, .)` vanishes. Every true
/// root survives interval evaluation, so refining until only `want`
/// candidates have an enclosure containing zero never needs a zero test.
fn exclude_spurious(
    q: &Polynomial,
    point: &[AlgebraicNumber],
    candidates: Vec<AlgebraicNumber>,
    want: usize,
) -> Vec<AlgebraicNumber> {
    let mut pts: Vec<AlgebraicNumber> = point.to_vec();
    let mut alive: Vec<AlgebraicNumber> = candidates;
    while alive.len() > want {
        let boxes: Vec<Interval> = pts.iter().map(|a| a.interval()).collect();
        alive.retain(|c| {
            let mut b = boxes.clone();
            b.push(c.interval());
            q.eval_interval(&b).strict_sign().is_none()
        });
        if alive.len() <= want {
            break;
        }
        pts = pts.iter().map(|a| a.refine()).collect();
        alive = alive.iter().map(|c| c.refine()).collect();
    }
    debug_assert_eq!(alive.len(), want);
    alive
}

/// Number of distinct real roots of `q(point, z)` in its last variable,
/// from the signs of the principal Sturm-Habicht coefficients. The leading
/// coefficient must not vanish at `point`.
pub fn distinct_real_roots_at(q: &Polynomial, point: &[AlgebraicNumber]) -> usize {
    let z = q.nvars() - 1;
    let p = q.degree(z) as usize;
    if p == 0 {
        return 0;
    }
    let dq = q.derivative(z);
    let lc = q.leading_coeff_in(z);
    let s_lc = sign::sign_at_partial(&lc, point);
    debug_assert!(s_lc != 0);
    // signs[i] is the sign of the coefficient of index p - i
    let mut signs = vec![s_lc, s_lc];
    for j in (0..p.saturating_sub(1)).rev() {
        let k = p - j;
        let delta: i8 = if (k * (k - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
        let c = resultant::psc(q, &dq, z, j);
        signs.push(delta * sign::sign_at_partial(&c, point));
    }
    let count = permanences_minus_variations(&signs);
    debug_assert!(count >= 0);
    count.max(0) as usize
}

/// Sign counting of a sequence with the zero-block rule: between
/// consecutive nonzero entries separated by `g` zeros, an odd `g` counts 0
/// and an even `g` counts `(-1)^(g/2)` times the sign of their product.
fn permanences_minus_variations(signs: &[i8]) -> i64 {
    let nz: Vec<(usize, i8)> = signs
        .iter()
        .enumerate()
        .filter(|(_, s)| **s != 0)
        .map(|(i, s)| (i, *s))
        .collect();
    let mut total = 0i64;
    for w in nz.windows(2) {
        let g = w[1].0 - w[0].0 - 1;
        if g % 2 == 1 {
            continue;
        }
        let eps: i64 = if (g / 2) % 2 == 0 { 1 } else { -1 };
        total += eps * i64::from(w[0].1 * w[1].1);
    }
    total
}

/// Bound on the absolute value of nonzero roots from below:
/// every nonzero root `r` of `p` with `p(0) != 0` satisfies `|r| > L`.
pub fn root_lower_bound(p: &UPoly) -> Rational {
    let c = p.coeffs();
    let c0 = c[0].abs();
    debug_assert!(!c0.is_zero());
    let m = c
        .iter()
        .skip(1)
        .map(|x| x.abs())
        .max()
        .unwrap_or_else(Rational::zero);
    &c0 / (&c0 + m)
}

/// Integer power of two as a rational.
pub fn pow2(k: u32) -> Rational {
    Rational::from_integer(BigInt::one() << k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    #[test]
    fn simple_isolation() {
        let r = isolate_real_roots(&UPoly::from_i64(&[-1, 0, 1])).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].as_rational(), Some(&rat(-1)));
        assert_eq!(r[1].as_rational(), Some(&rat(1)));
        assert!(isolate_real_roots(&UPoly::from_i64(&[1, 0, 1]))
            .unwrap()
            .is_empty());
        assert_eq!(
            isolate_real_roots(&UPoly::zero()),
            Err(Error::CurtainFibre)
        );
    }

    #[test]
    fn cube_root_of_two() {
        let r = isolate_real_roots(&UPoly::from_i64(&[-2, 0, 0, 1])).unwrap();
        assert_eq!(r.len(), 1);
        let a = &r[0];
        assert!(!a.is_rational());
        assert_eq!(a.cmp_rational(&ratio(5, 4)), std::cmp::Ordering::Greater);
        assert_eq!(a.cmp_rational(&ratio(3, 2)), std::cmp::Ordering::Less);
        let a = a.refine_to(&ratio(1, 1024));
        assert!(a.lo() > &ratio(5, 4) && a.hi() < &ratio(3, 2));
    }

    #[test]
    fn rational_detection_with_denominator() {
        // (3x - 1)(x^2 - 2)
        let p = UPoly::from_i64(&[-1, 3]).mul(&UPoly::from_i64(&[-2, 0, 1]));
        let r = isolate_real_roots(&p).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r[1].as_rational(), Some(&ratio(1, 3)));
        assert!(!r[0].is_rational() && !r[2].is_rational());
        assert_eq!(r[2].defining(), &UPoly::from_i64(&[-2, 0, 1]));
    }

    #[test]
    fn roots_over_algebraic_point() {
        // y^2 + x^2 - 1 over x = 1/sqrt(2): y = +-1/sqrt(2)
        let p = Polynomial::from_i64(2, &[(&[0, 2], 1), (&[2, 0], 1), (&[0, 0], -1)]);
        let x = isolate_real_roots(&UPoly::from_i64(&[-1, 0, 2])).unwrap()[1].clone();
        let ys = isolate_roots_at(&p, std::slice::from_ref(&x)).unwrap();
        assert_eq!(ys.len(), 2);
        assert_eq!(ys[1], x);
        // curtain: x*y - x over x = 0
        let c = Polynomial::from_i64(2, &[(&[1, 1], 1), (&[1, 0], -1)]);
        assert_eq!(
            isolate_roots_at(&c, &[AlgebraicNumber::from_i64(0)]),
            Err(Error::CurtainFibre)
        );
    }
}
