//! Versioned JSON form of a CAD and canonical digests.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::index::Index;
use crate::model::{Atom, AtomDecomposition, Cad, Cell};
use crate::projection::ProjectionBasis;
use crate::Error;

pub const FORMAT: &str = "mincad-cad";
pub const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct CadDocument {
    format: String,
    version: u32,
    dimension: usize,
    basis: ProjectionBasis,
    atoms: Vec<Vec<Atom>>,
    levels: Vec<Vec<Cell>>,
    stack_sizes: Vec<(Index, usize)>,
}

#[derive(Serialize)]
struct AtomDigestInput<'a> {
    basis: &'a ProjectionBasis,
    atoms: Vec<Vec<&'a Atom>>,
}

pub fn digest_atoms(basis: &ProjectionBasis, levels: &[BTreeMap<Index, Atom>]) -> String {
    let input = AtomDigestInput {
        basis,
        atoms: levels.iter().map(|l| l.values().collect()).collect(),
    };
    let bytes = serde_json::to_vec(&input).expect("atoms serialize");
    hex::encode(Sha256::digest(bytes))
}

pub fn to_json(c: &Cad) -> String {
    let doc = CadDocument {
        format: FORMAT.to_string(),
        version: VERSION,
        dimension: c.dimension,
        basis: c.atoms.basis.clone(),
        atoms: c
            .atoms
            .levels
            .iter()
            .map(|l| l.values().cloned().collect())
            .collect(),
        levels: c
            .levels
            .iter()
            .map(|l| l.values().cloned().collect())
            .collect(),
        stack_sizes: c
            .stack_sizes
            .iter()
            .map(|(i, u)| (i.clone(), *u))
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("cad serializes")
}

pub fn from_json(s: &str) -> Result<Cad, Error> {
    let doc: CadDocument = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    if doc.format != FORMAT {
        return Err(Error::Parse(format!("unknown format `{}`", doc.format)));
    }
    if doc.version != VERSION {
        return Err(Error::Parse(format!("unsupported version {}", doc.version)));
    }
    if doc.atoms.len() != doc.dimension || doc.levels.len() != doc.dimension {
        return Err(Error::Parse("level count does not match dimension".into()));
    }
    let atoms: Vec<BTreeMap<Index, Atom>> = doc
        .atoms
        .into_iter()
        .map(|l| l.into_iter().map(|a| (a.index.clone(), a)).collect())
        .collect();
    let decomposition = AtomDecomposition::new(doc.dimension, doc.basis, atoms);
    Ok(Cad {
        dimension: doc.dimension,
        atoms: Arc::new(decomposition),
        levels: doc
            .levels
            .into_iter()
            .map(|l| l.into_iter().map(|c| (c.index.clone(), c)).collect())
            .collect(),
        stack_sizes: doc.stack_sizes.into_iter().collect(),
    })
}

/// Canonical key of a CAD relative to its atom decomposition: the atom sets
/// of all cells, level by level.
pub fn canonical_key(c: &Cad) -> String {
    let mut h = Sha256::new();
    h.update(c.atoms.id.as_bytes());
    for (k, lvl) in c.levels.iter().enumerate() {
        h.update(format!("|L{}", k + 1).as_bytes());
        for (idx, cell) in lvl {
            h.update(format!("{idx}:").as_bytes());
            for a in &cell.atoms {
                h.update(format!("{a}").as_bytes());
            }
            h.update(b";");
        }
    }
    hex::encode(h.finalize())
}
