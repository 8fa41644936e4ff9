//! Point location and the refinement order.

use mincad_exact::AlgebraicNumber;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::index::Index;
use crate::lift::{fibre_roots, lift_atoms};
use crate::model::{AtomDecomposition, Cad};
use crate::projection::{build_from_polynomials, ProjectionBasis};
use crate::Error;

/// Index of the atom containing `point` (of any length up to the dimension).
pub fn locate_atom(atoms: &AtomDecomposition, point: &[AlgebraicNumber]) -> Result<Index, Error> {
    if point.is_empty() || point.len() > atoms.dimension {
        return Err(Error::ComparisonFailure(format!(
            "point of length {} in dimension {}",
            point.len(),
            atoms.dimension
        )));
    }
    let mut idx = Index::root();
    for k in 1..=point.len() {
        let roots = fibre_roots(atoms.basis.level(k), &point[..k - 1])?;
        let x = &point[k - 1];
        let mut below = 0u32;
        let mut on = None;
        for (j, r) in roots.iter().enumerate() {
            match r.value.cmp(x) {
                Ordering::Less => below += 1,
                Ordering::Equal => {
                    on = Some(j as u32);
                    break;
                }
                Ordering::Greater => break,
            }
        }
        idx = match on {
            Some(j) => idx.child(2 * j + 2),
            None => idx.child(2 * below + 1),
        };
    }
    Ok(idx)
}

/// Index of the cell of `c` containing `point`.
pub fn cell_membership(c: &Cad, point: &[AlgebraicNumber]) -> Result<Index, Error> {
    let atom = locate_atom(&c.atoms, point)?;
    let level = c.level(point.len());
    level
        .iter()
        .find(|(_, cell)| cell.atoms.binary_search(&atom).is_ok())
        .map(|(i, _)| i.clone())
        .ok_or_else(|| Error::ComparisonFailure(format!("atom {atom} belongs to no cell")))
}

/// Whether every cell of `coarse` is a union of cells of `fine`.
pub fn refines(coarse: &Cad, fine: &Cad) -> Result<bool, Error> {
    if coarse.dimension != fine.dimension {
        return Err(Error::ComparisonFailure(format!(
            "dimensions {} and {} differ",
            coarse.dimension, fine.dimension
        )));
    }
    if coarse.atoms.id == fine.atoms.id {
        return Ok(refines_shared(coarse, fine));
    }
    refines_foreign(coarse, fine)
}

fn refines_shared(coarse: &Cad, fine: &Cad) -> bool {
    let owner = coarse.atom_owner();
    fine.levels.iter().all(|lvl| {
        lvl.values().all(|cell| {
            let mut owners = cell.atoms.iter().map(|a| owner.get(a));
            let first = owners.next().flatten();
            first.is_some() && owners.all(|o| o == first)
        })
    })
}

/// Basis whose atoms refine the atoms of both inputs.
fn common_basis(a: &ProjectionBasis, b: &ProjectionBasis) -> Result<ProjectionBasis, Error> {
    let n = a.dimension();
    let mut polys = Vec::new();
    for basis in [a, b] {
        for lvl in &basis.levels {
            for p in lvl {
                polys.push(p.with_nvars(n)?);
            }
        }
    }
    if polys.is_empty() {
        return Ok(ProjectionBasis {
            levels: vec![vec![]; n],
        });
    }
    build_from_polynomials(n, polys)
}

/// Compares CADs built from different bases through the atoms of a common
/// refinement: each atom is located in both inputs by its sample point.
fn refines_foreign(coarse: &Cad, fine: &Cad) -> Result<bool, Error> {
    let joint = Arc::new(lift_atoms(&common_basis(
        &coarse.atoms.basis,
        &fine.atoms.basis,
    )?)?);
    let coarse_owner = coarse.atom_owner();
    let fine_owner = fine.atom_owner();
    for lvl in &joint.levels {
        let mut relation: BTreeMap<Index, BTreeSet<Index>> = BTreeMap::new();
        for atom in lvl.values() {
            let ca = locate_atom(&coarse.atoms, &atom.sample)?;
            let fa = locate_atom(&fine.atoms, &atom.sample)?;
            let cc = coarse_owner
                .get(&ca)
                .ok_or_else(|| Error::ComparisonFailure(format!("unowned atom {ca}")))?;
            let fc = fine_owner
                .get(&fa)
                .ok_or_else(|| Error::ComparisonFailure(format!("unowned atom {fa}")))?;
            relation.entry(fc.clone()).or_default().insert(cc.clone());
        }
        if relation.values().any(|s| s.len() != 1) {
            return Ok(false);
        }
    }
    Ok(true)
}
