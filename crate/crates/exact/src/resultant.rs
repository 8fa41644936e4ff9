//! Resultants and principal subresultant coefficients via Sylvester matrices,
//! evaluated with fraction-free (Bareiss) elimination.

use num_traits::{One, Zero};

use crate::poly::Polynomial;
use crate::Error;

/// Determinant of a square matrix of polynomials by Bareiss elimination.
/// Every division is exact.
pub fn bareiss_det(mut m: Vec<Vec<Polynomial>>, nvars: usize) -> Polynomial {
    let n = m.len();
    if n == 0 {
        return Polynomial::one(nvars);
    }
    let mut sign_flip = false;
    let mut prev = Polynomial::one(nvars);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return Polynomial::zero(nvars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = Polynomial::zero(nvars);
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign_flip {
        -&d
    } else {
        d
    }
}

/// `j`-th principal subresultant coefficient of `a` and `b` in `var`.
///
/// Requires `j < min(deg a, deg b)` or `j == min(...)` (which gives the
/// appropriate power of a leading coefficient).
pub fn psc(a: &Polynomial, b: &Polynomial, var: usize, j: usize) -> Polynomial {
    let nv = a.nvars();
    let ca = a.coeffs_in(var);
    let cb = b.coeffs_in(var);
    let m = ca.len().saturating_sub(1);
    let n = cb.len().saturating_sub(1);
    assert!(j <= m.min(n));
    let size = m + n - 2 * j;
    if size == 0 {
        return Polynomial::one(nv);
    }
    // column c corresponds to the power x^{m+n-j-1-c}
    let top = m + n - j - 1;
    let zero = Polynomial::zero(nv);
    let mut rows = Vec::with_capacity(size);
    for (coeffs, shifts) in [(&ca, n - j), (&cb, m - j)] {
        for s in (0..shifts).rev() {
            let mut row = vec![zero.clone(); size];
            for (c, slot) in row.iter_mut().enumerate() {
                let e = top - c;
                if e >= s && e - s < coeffs.len() {
                    *slot = coeffs[e - s].clone();
                }
            }
            rows.push(row);
        }
    }
    bareiss_det(rows, nv)
}

/// Resultant with respect to `var`.
pub fn resultant(a: &Polynomial, b: &Polynomial, var: usize) -> Result<Polynomial, Error> {
    if a.nvars() != b.nvars() {
        return Err(Error::VariableCountMismatch(a.nvars(), b.nvars()));
    }
    let nv = a.nvars();
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroResultant);
    }
    if a.is_zero() || b.is_zero() {
        return Ok(Polynomial::zero(nv));
    }
    let m = a.degree(var);
    let n = b.degree(var);
    if m == 0 {
        return Ok(a.pow(n));
    }
    if n == 0 {
        return Ok(b.pow(m));
    }
    Ok(psc(a, b, var, 0))
}

/// Resultant with respect to the last variable.
pub fn resultant_last(a: &Polynomial, b: &Polynomial) -> Result<Polynomial, Error> {
    resultant(a, b, a.nvars().saturating_sub(1))
}

/// `res(p, p') / lc(p)` with respect to `var`.
pub fn discriminant(p: &Polynomial, var: usize) -> Polynomial {
    let d = p.derivative(var);
    if d.is_zero() {
        return Polynomial::one(p.nvars());
    }
    let r = resultant(p, &d, var).expect("p is nonzero");
    r.div_exact(&p.leading_coeff_in(var))
        .expect("leading coefficient divides the resultant with the derivative")
}

/// Is `p` identically one?
pub fn is_one(p: &Polynomial) -> bool {
    p.constant_value().is_some_and(|c| c.is_one())
}

/// Is `p` a nonzero constant?
pub fn is_unit(p: &Polynomial) -> bool {
    p.constant_value().is_some_and(|c| !c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn small_resultants() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let one = Polynomial::one(2);
        // res_y(y^2 - x, y) = ±x
        let r = resultant_last(&(&(&y * &y) - &x), &y).unwrap();
        assert!(r == x || r == -&x);
        // res_y(y - 1, y + 1) = 2 with the Sylvester convention
        let r = resultant_last(&(&y - &one), &(&y + &one)).unwrap();
        assert_eq!(r, Polynomial::constant(2, rat(2)));
        // res_y(y^2 + x^2 - 1, 2y) = 4(x^2 - 1)
        let c = &(&(&y * &y) + &(&x * &x)) - &one;
        let r = resultant_last(&c, &y.scale(&rat(2))).unwrap();
        let expect = (&(&x * &x) - &one).scale(&rat(4));
        assert!(r == expect || r == -&expect);
    }

    #[test]
    fn discriminant_of_circle() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let c = &(&(&y * &y) + &(&x * &x)) - &Polynomial::one(2);
        let d = discriminant(&c, 1);
        assert_eq!(d.primitive_integer(), (&Polynomial::one(2) - &(&x * &x)).primitive_integer());
    }

    #[test]
    fn both_zero_is_error() {
        let z = Polynomial::zero(1);
        assert_eq!(resultant_last(&z, &z), Err(Error::ZeroResultant));
    }
}
