//! Collins projection and per-level squarefree coprime bases.

use mincad_exact::gcd::{content, primitive_part, squarefree_basis};
use mincad_exact::resultant::psc;
use mincad_exact::Polynomial;
use serde::{Deserialize, Serialize};

use crate::model::Family;
use crate::Error;

/// `levels[k - 1]` is the basis of level `k`: polynomials in `k` variables,
/// each of positive degree in variable `k`, pairwise coprime and squarefree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionBasis {
    pub levels: Vec<Vec<Polynomial>>,
}

impl ProjectionBasis {
    pub fn dimension(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, k: usize) -> &[Polynomial] {
        &self.levels[k - 1]
    }
}

/// Reducta of `p` in `var`: `p`, `p` without its leading term, and so on,
/// while the degree in `var` stays positive.
fn reducta(p: &Polynomial, var: usize) -> Vec<Polynomial> {
    let mut out = Vec::new();
    let mut r = p.clone();
    while !r.is_zero() && r.uses_var(var) {
        out.push(r.clone());
        r = r.reductum(var);
    }
    out
}

/// Collins' projection of a set of polynomials in `n` variables, as
/// polynomials in `n` variables that do not involve the last one.
pub fn collins_projection(polys: &[Polynomial]) -> Vec<Polynomial> {
    let Some(first) = polys.first() else {
        return vec![];
    };
    let n = first.nvars();
    let v = n - 1;
    let mut out = Vec::new();
    let chains: Vec<Vec<Polynomial>> = polys.iter().map(|p| reducta(p, v)).collect();
    for (p, chain) in polys.iter().zip(&chains) {
        for c in p.coeffs_in(v) {
            if !c.is_zero() {
                out.push(c);
            }
        }
        for g in chain {
            let d = g.degree(v) as usize;
            let dg = g.derivative(v);
            for j in 0..d.saturating_sub(1) {
                out.push(psc(g, &dg, v, j));
            }
        }
    }
    for a in 0..polys.len() {
        for b in a + 1..polys.len() {
            for g1 in &chains[a] {
                for g2 in &chains[b] {
                    let m = g1.degree(v).min(g2.degree(v)) as usize;
                    for j in 0..m {
                        out.push(psc(g1, g2, v, j));
                    }
                }
            }
        }
    }
    out.retain(|p| !p.is_zero() && !p.is_constant());
    out
}

/// Projection basis for the polynomials of a family plus extra polynomials
/// that contribute sections without belonging to any set.
pub fn build_projection_basis(
    family: &Family,
    extra: &[Polynomial],
) -> Result<ProjectionBasis, Error> {
    let n = family
        .dimension()
        .ok_or_else(|| Error::InvalidProblem("family has no polynomials".into()))?;
    if !(1..=3).contains(&n) {
        return Err(Error::InvalidProblem(format!("unsupported dimension {n}")));
    }
    let mut input = family.all_polynomials();
    input.extend(extra.iter().cloned());
    if let Some(p) = input.iter().find(|p| p.nvars() != n) {
        return Err(Error::InvalidProblem(format!(
            "polynomial {p} has {} variables, expected {n}",
            p.nvars()
        )));
    }
    if input.iter().all(|p| p.is_zero()) {
        return Err(mincad_exact::Error::DegenerateFamily.into());
    }
    if input.iter().any(|p| p.is_zero()) {
        return Err(Error::InvalidProblem("zero polynomial in input".into()));
    }
    build_from_polynomials(n, input)
}

pub(crate) fn build_from_polynomials(n: usize, input: Vec<Polynomial>) -> Result<ProjectionBasis, Error> {
    let mut levels: Vec<Vec<Polynomial>> = vec![Vec::new(); n];
    let mut pending = input;
    for k in (1..=n).rev() {
        let v = k - 1;
        let mut here = Vec::new();
        let mut down = Vec::new();
        for p in pending.drain(..) {
            if p.is_zero() || p.is_constant() {
                continue;
            }
            if !p.uses_var(v) {
                down.push(p);
                continue;
            }
            let c = content(&p, v);
            if !c.is_constant() {
                down.push(c);
            }
            here.push(primitive_part(&p, v));
        }
        let basis = if here.is_empty() {
            vec![]
        } else {
            squarefree_basis(&here)?
        };
        down.extend(collins_projection(&basis));
        levels[k - 1] = basis;
        if k > 1 {
            pending = down
                .into_iter()
                .map(|p| p.with_nvars(k - 1).expect("projection drops the last variable"))
                .collect();
        }
    }
    Ok(ProjectionBasis { levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Family;

    fn circle() -> Polynomial {
        Polynomial::from_i64(2, &[(&[2, 0], 1), (&[0, 2], 1), (&[0, 0], -1)])
    }

    #[test]
    fn circle_basis() {
        let b = build_projection_basis(&Family::single("c", vec![circle()]), &[]).unwrap();
        assert_eq!(b.level(2), &[circle()]);
        // 4 - 4x^2 normalized
        let x2m1 = Polynomial::from_i64(1, &[(&[2], 1), (&[0], -1)]);
        assert_eq!(b.level(1), &[x2m1]);
    }

    #[test]
    fn spurious_line_goes_to_base() {
        let x = Polynomial::var(2, 0);
        let b = build_projection_basis(&Family::single("c", vec![circle()]), &[x]).unwrap();
        assert_eq!(b.level(2).len(), 1);
        assert_eq!(b.level(1).len(), 2);
        assert!(b.level(1).contains(&Polynomial::var(1, 0)));
    }

    #[test]
    fn sphere_level_two() {
        let s = Polynomial::from_i64(
            3,
            &[(&[2, 0, 0], 1), (&[0, 2, 0], 1), (&[0, 0, 2], 1), (&[0, 0, 0], -1)],
        );
        let b = build_projection_basis(&Family::single("s", vec![s]), &[]).unwrap();
        let c2 = Polynomial::from_i64(2, &[(&[2, 0], 1), (&[0, 2], 1), (&[0, 0], -1)]);
        assert!(b.level(2).contains(&c2));
    }

    #[test]
    fn univariate() {
        let p = Polynomial::from_i64(1, &[(&[1], 1), (&[0], -1)]);
        let b = build_projection_basis(&Family::single("p", vec![p.clone()]), &[]).unwrap();
        assert_eq!(b.levels, vec![vec![p]]);
    }

    #[test]
    fn zero_family_is_rejected() {
        let r = build_projection_basis(&Family::single("z", vec![Polynomial::zero(2)]), &[]);
        assert!(r.is_err());
    }
}
