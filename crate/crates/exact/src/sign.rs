//! Exact sign of a multivariate polynomial at a point with real algebraic
//! coordinates.
//!
//! Rational coordinates are substituted, a single algebraic coordinate is
//! handled through the defining polynomial, and several algebraic
//! coordinates use interval refinement once the value is known to be
//! nonzero. Zero is decided by isolating the roots of the polynomial in its
//! last algebraic coordinate over the remaining ones.

use num_traits::Zero;

use crate::algebraic::AlgebraicNumber;
use crate::interval::Interval;
use crate::poly::Polynomial;
use crate::rational::{self, Rational};
use crate::resultant;
use crate::roots::{self, root_lower_bound};

/// Sign of `p` at `point`; `point.len()` must equal the variable count.
pub fn sign_at(p: &Polynomial, point: &[AlgebraicNumber]) -> i8 {
    assert_eq!(
        point.len(),
        p.nvars(),
        "point dimension must match the variable count"
    );
    sign_impl(p, point)
}

/// Sign of `p` at a point that only fixes the first `point.len()` variables;
/// `p` must not use the remaining ones.
pub fn sign_at_partial(p: &Polynomial, point: &[AlgebraicNumber]) -> i8 {
    assert!(point.len() <= p.nvars());
    assert!(
        (point.len()..p.nvars()).all(|v| !p.uses_var(v)),
        "polynomial uses unfixed variables"
    );
    let mut full = point.to_vec();
    full.resize(p.nvars(), AlgebraicNumber::from_i64(0));
    sign_impl(p, &full)
}

fn sign_impl(p: &Polynomial, point: &[AlgebraicNumber]) -> i8 {
    let n = p.nvars();
    let mut q = p.clone();
    for (i, a) in point.iter().enumerate() {
        if let Some(r) = a.as_rational() {
            if q.uses_var(i) {
                q = q.substitute(i, r);
            }
        }
    }
    if let Some(c) = q.constant_value() {
        return rational::sign(&c);
    }
    let irr: Vec<usize> = (0..n).filter(|&i| q.uses_var(i)).collect();
    if irr.len() == 1 {
        let i = irr[0];
        return point[i].sign_of(&q.to_upoly(i).expect("single variable"));
    }
    let mut pts: Vec<AlgebraicNumber> = point.to_vec();
    let enclose = |pts: &[AlgebraicNumber]| -> Interval {
        let boxes: Vec<Interval> = pts.iter().map(|a| a.interval()).collect();
        q.eval_interval(&boxes)
    };
    for _ in 0..6 {
        if let Some(s) = enclose(&pts).strict_sign() {
            return s;
        }
        for &i in &irr {
            pts[i] = pts[i].refine();
        }
    }
    if is_zero_by_roots(&q, point, &irr) {
        return 0;
    }
    // nonzero, so refinement terminates
    loop {
        if let Some(s) = enclose(&pts).strict_sign() {
            return s;
        }
        for &i in &irr {
            pts[i] = pts[i].refine();
        }
    }
}

/// Zero test through the last algebraic coordinate `c`: the value vanishes
/// iff `c` is a root of `q` with the earlier coordinates fixed (or `q`
/// vanishes on that whole fibre). Falls back to a resultant certificate
/// when root isolation over the prefix is degenerate.
fn is_zero_by_roots(q: &Polynomial, point: &[AlgebraicNumber], irr: &[usize]) -> bool {
    let i = *irr.last().expect("at least two coordinates");
    let f = q.with_nvars(i + 1).expect("later variables are unused");
    match roots::isolate_roots_at(&f, &point[..i]) {
        Err(crate::Error::CurtainFibre) => true,
        Ok(rs) => rs.iter().any(|r| r == &point[i]),
        Err(_) => zero_by_certificate(q, point, irr),
    }
}

/// `v = q(point)` is a root of `R(t) = res(... res(t - q, m_1) ..., m_k)`,
/// so either `v = 0` or `|v|` exceeds a root bound of `R`.
fn zero_by_certificate(q: &Polynomial, point: &[AlgebraicNumber], irr: &[usize]) -> bool {
    let n = q.nvars();
    let t = n;
    let q1 = q.with_nvars(n + 1).expect("extension");
    let mut r = &Polynomial::var(n + 1, t) - &q1;
    for &i in irr {
        if !r.uses_var(i) {
            continue;
        }
        let m = Polynomial::from_upoly(n + 1, i, point[i].defining());
        r = resultant::resultant(&r, &m, i).expect("nonzero inputs");
    }
    let ru = r.to_upoly(t).expect("only t remains");
    let k = ru.coeffs().iter().take_while(|c| c.is_zero()).count();
    if k == 0 {
        return false;
    }
    let stripped = crate::upoly::UPoly::new(ru.coeffs()[k..].to_vec());
    let bound: Rational = root_lower_bound(&stripped);
    let mut pts: Vec<AlgebraicNumber> = point.to_vec();
    loop {
        let boxes: Vec<Interval> = pts.iter().map(|a| a.interval()).collect();
        let e = q.eval_interval(&boxes);
        if e.strict_sign().is_some() {
            return false;
        }
        if e.lo > -bound.clone() && e.hi < bound {
            return true;
        }
        for &i in irr {
            pts[i] = pts[i].refine();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::roots::isolate_real_roots;
    use crate::upoly::UPoly;

    #[test]
    fn spec_examples() {
        let c = Polynomial::from_i64(2, &[(&[2, 0], 1), (&[0, 2], 1), (&[0, 0], -1)]);
        let o = AlgebraicNumber::from_i64(0);
        assert_eq!(sign_at(&c, &[o.clone(), o]), -1);

        let s2 = isolate_real_roots(&UPoly::from_i64(&[-2, 0, 1])).unwrap()[1].clone();
        let p = Polynomial::from_i64(1, &[(&[2], 1), (&[0], -2)]);
        assert_eq!(sign_at(&p, &[s2]), 0);

        let sph = Polynomial::from_i64(
            3,
            &[(&[2, 0, 0], 1), (&[0, 2, 0], 1), (&[0, 0, 2], 1), (&[0, 0, 0], -1)],
        );
        let h = AlgebraicNumber::from_rational(ratio(1, 2));
        assert_eq!(sign_at(&sph, &[h.clone(), h.clone(), h]), -1);
    }

    #[test]
    fn two_algebraic_coordinates() {
        // x = sqrt(2), y = sqrt(3)
        let s2 = isolate_real_roots(&UPoly::from_i64(&[-2, 0, 1])).unwrap()[1].clone();
        let s3 = isolate_real_roots(&UPoly::from_i64(&[-3, 0, 1])).unwrap()[1].clone();
        let pt = [s2, s3];
        let p = Polynomial::from_i64(2, &[(&[2, 2], 1), (&[0, 0], -6)]);
        assert_eq!(sign_at(&p, &pt), 0);
        let p = Polynomial::from_i64(2, &[(&[1, 1], 1), (&[0, 0], -2)]);
        assert_eq!(sign_at(&p, &pt), 1);
        let p = Polynomial::from_i64(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[0, 0], -3)]);
        assert_eq!(sign_at(&p, &pt), 1);
        // x^2 + y^2 - 5 = 0
        let p = Polynomial::from_i64(2, &[(&[2, 0], 1), (&[0, 2], 1), (&[0, 0], -5)]);
        assert_eq!(sign_at(&p, &pt), 0);
    }
}
