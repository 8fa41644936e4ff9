//! Applying a reduction to a CAD: relabel every cell through the site's
//! relabelling map and merge the cells with equal images.

use std::collections::BTreeMap;

use crate::continuity::ContinuityCertificate;
use crate::index::{relabel, Index};
use crate::model::{BoundFunction, Cad, Cell, CellKind};
use crate::Error;

/// The CAD obtained by removing the even node `site`. Certificates are
/// attached to the merged bounds they concern and must all hold. The caller
/// is responsible for having checked that the labels agree and that every
/// merged bound is covered by a certificate.
pub fn apply_reduction(
    cad: &Cad,
    site: &Index,
    certificates: &[ContinuityCertificate],
) -> Result<Cad, Error> {
    let k = site.len();
    if !site.is_even() || k == 0 || k > cad.dimension || cad.cell(site).is_none() {
        return Err(Error::InvalidSite(format!("{site} is not an even cell")));
    }
    if let Some(c) = certificates.iter().find(|c| &c.site != site) {
        return Err(Error::InvalidSite(format!("certificate for site {} given at {site}", c.site)));
    }
    if certificates.iter().any(|c| !c.holds()) {
        return Err(Error::LiftFailure(site.clone()));
    }
    let mut levels = Vec::with_capacity(cad.dimension);
    for (i, lvl) in cad.levels.iter().enumerate() {
        if i + 1 < k {
            levels.push(lvl.clone());
            continue;
        }
        let mut groups: BTreeMap<Index, Vec<&Cell>> = BTreeMap::new();
        for (idx, cell) in lvl {
            groups.entry(relabel(site, idx)).or_default().push(cell);
        }
        let merged = groups
            .into_iter()
            .map(|(image, pre)| {
                let cell = merge_cells(&image, &pre, certificates);
                (image, cell)
            })
            .collect();
        levels.push(merged);
    }
    let mut out = Cad {
        dimension: cad.dimension,
        atoms: cad.atoms.clone(),
        levels,
        stack_sizes: BTreeMap::new(),
    };
    out.refresh_derived();
    Ok(out)
}

fn merge_cells(image: &Index, pre: &[&Cell], certificates: &[ContinuityCertificate]) -> Cell {
    let representative = pre
        .iter()
        .find(|c| &c.index == image)
        .copied()
        .unwrap_or(pre[0]);
    let mut atoms: Vec<Index> = pre.iter().flat_map(|c| c.atoms.iter().cloned()).collect();
    atoms.sort();
    let kind = CellKind::of(image);
    let bound = (kind == CellKind::Section).then(|| {
        let mut pieces: Vec<_> = pre
            .iter()
            .filter_map(|c| c.bound.as_ref())
            .flat_map(|b| b.pieces.iter().cloned())
            .collect();
        pieces.sort_by(|a, b| a.base_atom.cmp(&b.base_atom));
        let mut certs: Vec<ContinuityCertificate> = pre
            .iter()
            .filter_map(|c| c.bound.as_ref())
            .flat_map(|b| b.certificates.iter().cloned())
            .collect();
        if pre.len() > 1 {
            certs.extend(
                certificates
                    .iter()
                    .filter(|c| pre.iter().any(|p| p.index == c.section))
                    .cloned(),
            );
        }
        BoundFunction {
            pieces,
            certificates: certs,
        }
    });
    Cell {
        index: image.clone(),
        kind,
        base: image.parent(),
        atoms,
        sample_atom: representative.sample_atom.clone(),
        sample: representative.sample.clone(),
        bound,
        lower: None,
        upper: None,
    }
}
