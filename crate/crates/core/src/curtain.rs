//! Curtains: points of `R^(n-1)` over which every polynomial of a set
//! vanishes on the whole vertical line.

use mincad_exact::{sign_at, AlgebraicNumber, Polynomial};
use std::collections::BTreeSet;

use crate::index::Index;
use crate::model::{Cad, SetDefinition};
use crate::Error;

/// The base points over which a set contains whole vertical lines, as the
/// common zero set of `generators` (polynomials in the first `n - 1`
/// variables). An empty generator list describes all of `R^(n-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurtainLocus {
    pub generators: Vec<Polynomial>,
    /// Cells of level `n - 1` of a CAD contained in the locus, when computed
    /// relative to one.
    pub cells: BTreeSet<Index>,
}

impl CurtainLocus {
    /// Whether the locus is empty for certain: some generator is a nonzero
    /// constant.
    pub fn is_trivially_empty(&self) -> bool {
        self.generators
            .iter()
            .any(|g| g.is_constant() && !g.is_zero())
    }
}

/// Generators of the curtain locus of `set` in dimension `n`: every
/// coefficient, in the last variable, of every polynomial of the set.
pub fn curtain_locus(set: &SetDefinition, n: usize) -> Result<CurtainLocus, Error> {
    if n == 0 {
        return Err(Error::InvalidProblem("dimension must be positive".into()));
    }
    let mut gens: Vec<Polynomial> = Vec::new();
    for p in &set.polynomials {
        if p.nvars() != n {
            return Err(Error::InvalidProblem(format!(
                "polynomial has {} variables, expected {n}",
                p.nvars()
            )));
        }
        for c in p.coeffs_in(n - 1) {
            if !c.is_zero() {
                let g = c.with_nvars(n - 1)?;
                if !gens.contains(&g) {
                    gens.push(g);
                }
            }
        }
    }
    gens.sort();
    Ok(CurtainLocus {
        generators: gens,
        cells: BTreeSet::new(),
    })
}

/// The locus together with the level `n - 1` cells of `cad` lying in it.
/// Generators are sign-invariant on the cells of a CAD built from the set,
/// so testing the sample point decides each cell.
pub fn curtain_locus_in(cad: &Cad, set: &SetDefinition) -> Result<CurtainLocus, Error> {
    let n = cad.dimension;
    let mut locus = curtain_locus(set, n)?;
    if n >= 2 {
        locus.cells = cad
            .level(n - 1)
            .iter()
            .filter(|(_, c)| vanish_all(&locus.generators, &c.sample))
            .map(|(i, _)| i.clone())
            .collect();
    }
    Ok(locus)
}

fn vanish_all(gens: &[Polynomial], point: &[AlgebraicNumber]) -> bool {
    gens.iter().all(|g| {
        if g.nvars() == 0 {
            g.is_zero()
        } else {
            sign_at(g, point) == 0
        }
    })
}

/// Whether the set contains the whole vertical line over `point`.
pub fn has_curtain_at(locus: &CurtainLocus, point: &[AlgebraicNumber]) -> bool {
    vanish_all(&locus.generators, point)
}
