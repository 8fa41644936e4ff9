//! Multivariate gcd over Q, squarefree parts and coprime squarefree bases.
//!
//! The gcd is computed recursively: content with respect to the highest
//! occurring variable, then a primitive pseudo-remainder sequence on the
//! primitive parts.

use crate::poly::Polynomial;
use crate::Error;

/// Gcd normalized with `primitive_integer`; gcd of two zeros is zero.
pub fn poly_gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    assert_eq!(a.nvars(), b.nvars(), "variable count mismatch");
    gcd_rec(a, b)
}

fn gcd_rec(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let n = a.nvars();
    if a.is_zero() {
        return b.primitive_integer();
    }
    if b.is_zero() {
        return a.primitive_integer();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(n);
    }
    let v = a.main_var().unwrap().max(b.main_var().unwrap());
    let ca = content(a, v);
    let cb = content(b, v);
    let c = gcd_rec(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let g = if pa.uses_var(v) && pb.uses_var(v) {
        prs_gcd(pa, pb, v)
    } else {
        Polynomial::one(n)
    };
    (&c * &g).primitive_integer()
}

fn prs_gcd(pa: Polynomial, pb: Polynomial, v: usize) -> Polynomial {
    let (mut r0, mut r1) = if pa.degree(v) >= pb.degree(v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    loop {
        let r = r0.prem(&r1, v);
        if r.is_zero() {
            return primitive_part(&r1, v);
        }
        if !r.uses_var(v) {
            return Polynomial::one(r.nvars());
        }
        r0 = r1;
        r1 = primitive_part(&r, v);
    }
}

/// Gcd of the coefficients with respect to `v`. A polynomial free of `v` is
/// its own content.
pub fn content(p: &Polynomial, v: usize) -> Polynomial {
    if p.is_zero() {
        return p.clone();
    }
    if !p.uses_var(v) {
        return p.primitive_integer();
    }
    let mut g = Polynomial::zero(p.nvars());
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd_rec(&g, &c);
        if g.is_constant() {
            break;
        }
    }
    g
}

pub fn primitive_part(p: &Polynomial, v: usize) -> Polynomial {
    if p.is_zero() {
        return p.clone();
    }
    let c = content(p, v);
    p.div_exact(&c).expect("content divides").primitive_integer()
}

/// Product of the distinct irreducible factors, up to a rational unit.
pub fn squarefree_part(p: &Polynomial) -> Polynomial {
    if p.is_zero() || p.is_constant() {
        return p.primitive_integer();
    }
    let v = p.main_var().unwrap();
    let c = content(p, v);
    let pp = p.div_exact(&c).expect("content divides");
    let g = gcd_rec(&pp, &pp.derivative(v));
    let s = pp.div_exact(&g).expect("gcd divides");
    (&squarefree_part(&c) * &s).primitive_integer()
}

/// Pairwise coprime squarefree polynomials with the same zero set as the
/// product of the inputs. Constants are dropped; the result is sorted.
pub fn squarefree_basis(polys: &[Polynomial]) -> Result<Vec<Polynomial>, Error> {
    if polys.is_empty() || polys.iter().all(|p| p.is_zero()) {
        return Err(Error::DegenerateFamily);
    }
    let n = polys[0].nvars();
    if let Some(p) = polys.iter().find(|p| p.nvars() != n) {
        return Err(Error::VariableCountMismatch(n, p.nvars()));
    }
    let mut basis: Vec<Polynomial> = Vec::new();
    for p in polys {
        if p.is_zero() || p.is_constant() {
            continue;
        }
        insert_coprime(&mut basis, squarefree_part(p));
    }
    basis.sort();
    basis.dedup();
    Ok(basis)
}

fn insert_coprime(basis: &mut Vec<Polynomial>, q: Polynomial) {
    if q.is_constant() {
        return;
    }
    for i in 0..basis.len() {
        let g = gcd_rec(&q, &basis[i]);
        if g.is_constant() {
            continue;
        }
        let b = basis.swap_remove(i);
        let b_rest = b.div_exact(&g).expect("gcd divides").primitive_integer();
        let q_rest = q.div_exact(&g).expect("gcd divides").primitive_integer();
        insert_coprime(basis, g);
        insert_coprime(basis, b_rest);
        insert_coprime(basis, q_rest);
        return;
    }
    basis.push(q);
}
