//! Lifting: stacks over every base atom by real root isolation of the basis
//! polynomials at the base sample point.

use mincad_exact::{isolate_roots_at, AlgebraicNumber, Rational};
use num_traits::One;
use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::index::Index;
use crate::model::{Atom, AtomDecomposition, Cad, CellKind, IndexedRoot};
use crate::projection::ProjectionBasis;
use crate::Error;

pub(crate) struct Root {
    pub value: AlgebraicNumber,
    pub poly: usize,
    pub number: u32,
}

/// Sorted distinct real roots of the basis polynomials over `sample`.
/// Polynomials vanishing identically on the fibre contribute nothing.
pub(crate) fn fibre_roots(
    basis: &[mincad_exact::Polynomial],
    sample: &[AlgebraicNumber],
) -> Result<Vec<Root>, Error> {
    let mut roots = Vec::new();
    for (pi, q) in basis.iter().enumerate() {
        match isolate_roots_at(q, sample) {
            Ok(rs) => {
                for (j, r) in rs.into_iter().enumerate() {
                    roots.push(Root {
                        value: r,
                        poly: pi,
                        number: j as u32 + 1,
                    });
                }
            }
            Err(mincad_exact::Error::CurtainFibre) => {}
            Err(e) => return Err(e.into()),
        }
    }
    roots.sort_by(|a, b| a.value.cmp(&b.value).then(a.poly.cmp(&b.poly)));
    roots.dedup_by(|b, a| a.value.cmp(&b.value) == Ordering::Equal);
    Ok(roots)
}

fn sector_samples(roots: &[Root]) -> Vec<Rational> {
    if roots.is_empty() {
        return vec![Rational::from_integer(0.into())];
    }
    let mut out = Vec::with_capacity(roots.len() + 1);
    let first = &roots[0].value;
    out.push(first.lo().floor() - Rational::one());
    for w in roots.windows(2) {
        out.push(w[0].value.rational_between(&w[1].value));
    }
    let last = &roots[roots.len() - 1].value;
    out.push(last.hi().ceil() + Rational::one());
    out
}

/// Stack of atoms over `base`.
pub fn lift_stack(
    basis: &[mincad_exact::Polynomial],
    base: &Index,
    base_sample: &[AlgebraicNumber],
) -> Result<Vec<Atom>, Error> {
    let roots = fibre_roots(basis, base_sample)?;
    let sectors = sector_samples(&roots);
    let mut atoms = Vec::with_capacity(2 * roots.len() + 1);
    for (j, s) in sectors.into_iter().enumerate() {
        let mut sample = base_sample.to_vec();
        sample.push(AlgebraicNumber::from_rational(s));
        atoms.push(Atom {
            index: base.child(2 * j as u32 + 1),
            kind: CellKind::Sector,
            sample,
            root: None,
        });
        if let Some(r) = roots.get(j) {
            let mut sample = base_sample.to_vec();
            sample.push(r.value.clone());
            atoms.push(Atom {
                index: base.child(2 * j as u32 + 2),
                kind: CellKind::Section,
                sample,
                root: Some(IndexedRoot {
                    poly: basis[r.poly].clone(),
                    root_number: r.number,
                }),
            });
        }
    }
    Ok(atoms)
}

/// Lifts the atom decomposition of a projection basis.
pub fn lift_atoms(basis: &ProjectionBasis) -> Result<AtomDecomposition, Error> {
    let n = basis.dimension();
    let mut levels: Vec<BTreeMap<Index, Atom>> = Vec::with_capacity(n);
    let root_stack = lift_stack(basis.level(1), &Index::root(), &[])?;
    levels.push(root_stack.into_iter().map(|a| (a.index.clone(), a)).collect());
    for k in 2..=n {
        let bases: Vec<&Atom> = levels[k - 2].values().collect();
        let stacks: Result<Vec<Vec<Atom>>, Error> = bases
            .par_iter()
            .map(|b| lift_stack(basis.level(k), &b.index, &b.sample))
            .collect();
        let lvl = stacks?
            .into_iter()
            .flatten()
            .map(|a| (a.index.clone(), a))
            .collect();
        levels.push(lvl);
    }
    Ok(AtomDecomposition::new(n, basis.clone(), levels))
}

/// The CAD whose cells are the atoms of the basis.
pub fn lift_cad(basis: &ProjectionBasis) -> Result<Cad, Error> {
    Ok(Cad::from_atoms(Arc::new(lift_atoms(basis)?)))
}
