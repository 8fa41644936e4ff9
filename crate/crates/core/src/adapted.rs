//! Whether a CAD is adapted to a family: each set is a union of top-level
//! cells.

use mincad_exact::{squarefree_part, Polynomial};
use std::collections::BTreeMap;

use crate::index::Index;
use crate::labels::{atom_bits, LabelTree};
use crate::lift::lift_atoms;
use crate::membership::locate_atom;
use crate::model::{Cad, Family};
use crate::projection::build_from_polynomials;
use crate::Error;

/// Checks that the labels of `tree` match every atom of each top-level cell
/// and that the atoms themselves do not cut any set.
pub fn adaptedness_check(cad: &Cad, tree: &LabelTree, family: &Family) -> Result<bool, Error> {
    let bits = atom_bits(&cad.atoms, family);
    for (idx, cell) in cad.level(cad.dimension) {
        let Some(label) = tree.leaf_bits(idx) else {
            return Ok(false);
        };
        if cell.atoms.iter().any(|a| bits.get(a).map(|b| &b[..]) != Some(label)) {
            return Ok(false);
        }
    }
    if family_in_basis(cad, family)? {
        return Ok(true);
    }
    atoms_respect_family(cad, family, &bits)
}

/// Every polynomial of the family is, up to a constant, a product of basis
/// polynomials; then every zero set is a union of atoms.
fn family_in_basis(cad: &Cad, family: &Family) -> Result<bool, Error> {
    let n = cad.dimension;
    let basis: Vec<Polynomial> = cad
        .atoms
        .basis
        .levels
        .iter()
        .flatten()
        .map(|p| p.with_nvars(n))
        .collect::<Result<_, _>>()?;
    for f in family.all_polynomials() {
        if f.is_zero() {
            continue;
        }
        let mut rest = squarefree_part(&f);
        for b in &basis {
            if let Some(q) = rest.div_exact(b) {
                rest = q;
            }
        }
        if !rest.is_constant() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Slow path: decompose with the family polynomials added to the basis and
/// check that no atom of the CAD meets both a set and its complement.
fn atoms_respect_family(
    cad: &Cad,
    family: &Family,
    bits: &BTreeMap<Index, Vec<bool>>,
) -> Result<bool, Error> {
    let n = cad.dimension;
    let mut polys: Vec<Polynomial> = family.all_polynomials();
    for lvl in &cad.atoms.basis.levels {
        for p in lvl {
            polys.push(p.with_nvars(n)?);
        }
    }
    polys.retain(|p| !p.is_zero());
    let joint = lift_atoms(&build_from_polynomials(n, polys)?)?;
    for atom in joint.levels[n - 1].values() {
        let here: Vec<bool> = family
            .sets
            .iter()
            .map(|s| {
                s.polynomials
                    .iter()
                    .all(|p| mincad_exact::sign_at(p, &atom.sample) == 0)
            })
            .collect();
        let owner = locate_atom(&cad.atoms, &atom.sample)?;
        if bits.get(&owner) != Some(&here) {
            return Ok(false);
        }
    }
    Ok(true)
}
