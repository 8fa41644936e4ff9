//! The CAD data model.
//!
//! A [`Cad`] is stored relative to an [`AtomDecomposition`]: the CAD lifted
//! directly from a projection basis. Every cell of every CAD reachable by
//! reductions is a union of atoms of the same level, which makes refinement
//! and canonical hashing exact.

use mincad_exact::{AlgebraicNumber, Polynomial};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::continuity::ContinuityCertificate;
use crate::index::Index;
use crate::projection::ProjectionBasis;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellKind {
    #[serde(rename = "SECTION")]
    Section,
    #[serde(rename = "SECTOR")]
    Sector,
}

impl CellKind {
    pub fn of(index: &Index) -> CellKind {
        if index.is_even() {
            CellKind::Section
        } else {
            CellKind::Sector
        }
    }
}

/// The `root_number`-th real root (1-based, increasing) of `poly` in its last
/// variable, over each point of some base cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IndexedRoot {
    pub poly: Polynomial,
    pub root_number: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Atom {
    pub index: Index,
    pub kind: CellKind,
    pub sample: Vec<AlgebraicNumber>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<IndexedRoot>,
}

/// The CAD lifted from a projection basis, shared by all CADs derived from
/// it by reductions.
#[derive(Debug)]
pub struct AtomDecomposition {
    pub dimension: usize,
    pub basis: ProjectionBasis,
    /// `levels[k - 1]` holds the atoms of level `k`.
    pub levels: Vec<BTreeMap<Index, Atom>>,
    /// Hex digest of the canonical serialization; equal ids mean shared
    /// provenance.
    pub id: String,
}

impl AtomDecomposition {
    pub fn new(dimension: usize, basis: ProjectionBasis, levels: Vec<BTreeMap<Index, Atom>>) -> Self {
        let id = crate::serialize::digest_atoms(&basis, &levels);
        AtomDecomposition {
            dimension,
            basis,
            levels,
            id,
        }
    }

    pub fn atom(&self, index: &Index) -> Option<&Atom> {
        if index.is_empty() || index.len() > self.dimension {
            return None;
        }
        self.levels[index.len() - 1].get(index)
    }

    /// Atoms of the next level lying over `base`, in stack order.
    pub fn stack(&self, base: &Index) -> Vec<&Atom> {
        let k = base.len();
        if k >= self.dimension {
            return vec![];
        }
        let lo = base.child(0);
        self.levels[k]
            .range(lo..)
            .take_while(|(i, _)| i.starts_with(base))
            .map(|(_, a)| a)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundPiece {
    pub base_atom: Index,
    pub section_atom: Index,
    pub root: IndexedRoot,
}

/// A section bound stored piecewise over base atoms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundFunction {
    pub pieces: Vec<BoundPiece>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<ContinuityCertificate>,
}

impl BoundFunction {
    pub fn piece_over(&self, base_atom: &Index) -> Option<&BoundPiece> {
        self.pieces.iter().find(|p| &p.base_atom == base_atom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Cell {
    pub index: Index,
    pub kind: CellKind,
    pub base: Index,
    pub atoms: Vec<Index>,
    pub sample_atom: Index,
    pub sample: Vec<AlgebraicNumber>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundFunction>,
    /// `None` for a sector means an infinite bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<BoundFunction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<BoundFunction>,
}

#[derive(Clone, Debug)]
pub struct Cad {
    pub dimension: usize,
    pub atoms: Arc<AtomDecomposition>,
    /// `levels[k - 1]` holds the cells of level `k`.
    pub levels: Vec<BTreeMap<Index, Cell>>,
    /// Number of sections over each base cell (`u_I`), including the root.
    pub stack_sizes: BTreeMap<Index, usize>,
}

impl Cad {
    /// The CAD whose cells are exactly the atoms.
    pub fn from_atoms(atoms: Arc<AtomDecomposition>) -> Cad {
        let n = atoms.dimension;
        let mut levels = Vec::with_capacity(n);
        for lvl in &atoms.levels {
            let mut cells = BTreeMap::new();
            for (idx, a) in lvl {
                let bound = a.root.as_ref().map(|r| BoundFunction {
                    pieces: vec![BoundPiece {
                        base_atom: idx.parent(),
                        section_atom: idx.clone(),
                        root: r.clone(),
                    }],
                    certificates: vec![],
                });
                cells.insert(
                    idx.clone(),
                    Cell {
                        index: idx.clone(),
                        kind: a.kind,
                        base: idx.parent(),
                        atoms: vec![idx.clone()],
                        sample_atom: idx.clone(),
                        sample: a.sample.clone(),
                        bound,
                        lower: None,
                        upper: None,
                    },
                );
            }
            levels.push(cells);
        }
        let mut c = Cad {
            dimension: n,
            atoms,
            levels,
            stack_sizes: BTreeMap::new(),
        };
        c.refresh_derived();
        c
    }

    pub fn level(&self, k: usize) -> &BTreeMap<Index, Cell> {
        &self.levels[k - 1]
    }

    pub fn cell(&self, index: &Index) -> Option<&Cell> {
        if index.is_empty() || index.len() > self.dimension {
            return None;
        }
        self.levels[index.len() - 1].get(index)
    }

    pub fn cell_count(&self, k: usize) -> usize {
        self.levels[k - 1].len()
    }

    /// Number of cells of the top level, i.e. of the partition of `R^n`.
    pub fn top_count(&self) -> usize {
        self.cell_count(self.dimension)
    }

    pub fn total_cells(&self) -> usize {
        self.levels.iter().map(|l| l.len()).sum()
    }

    pub fn level_counts(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len()).collect()
    }

    /// Cells of level `|base| + 1` over `base`, in stack order.
    pub fn stack(&self, base: &Index) -> Vec<&Cell> {
        let k = base.len();
        if k >= self.dimension {
            return vec![];
        }
        let lo = base.child(0);
        self.levels[k]
            .range(lo..)
            .take_while(|(i, _)| i.starts_with(base))
            .map(|(_, c)| c)
            .collect()
    }

    /// Map from atom index to the index of the cell containing it.
    pub fn atom_owner(&self) -> BTreeMap<Index, Index> {
        let mut m = BTreeMap::new();
        for lvl in &self.levels {
            for (idx, c) in lvl {
                for a in &c.atoms {
                    m.insert(a.clone(), idx.clone());
                }
            }
        }
        m
    }

    /// Recomputes stack sizes and sector bounds from the section cells.
    pub fn refresh_derived(&mut self) {
        let mut sizes: BTreeMap<Index, usize> = BTreeMap::new();
        sizes.insert(Index::root(), 0);
        for lvl in &self.levels[..self.dimension.saturating_sub(1)] {
            for idx in lvl.keys() {
                sizes.insert(idx.clone(), 0);
            }
        }
        for lvl in &self.levels {
            for (idx, c) in lvl {
                if c.kind == CellKind::Section {
                    *sizes.entry(idx.parent()).or_insert(0) += 1;
                }
            }
        }
        for k in 0..self.dimension {
            let bounds: BTreeMap<Index, BoundFunction> = self.levels[k]
                .iter()
                .filter_map(|(i, c)| c.bound.clone().map(|b| (i.clone(), b)))
                .collect();
            for (idx, c) in self.levels[k].iter_mut() {
                if c.kind == CellKind::Sector {
                    let j = idx.last().unwrap();
                    c.lower = if j > 1 {
                        bounds.get(&idx.shift(idx.len(), -1).unwrap()).cloned()
                    } else {
                        None
                    };
                    c.upper = bounds.get(&idx.shift(idx.len(), 1).unwrap()).cloned();
                }
            }
        }
        self.stack_sizes = sizes;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum SetMode {
    #[default]
    #[serde(rename = "ALGEBRAIC")]
    Algebraic,
}

/// A named algebraic set: the common zero locus of its polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetDefinition {
    pub name: String,
    pub polynomials: Vec<Polynomial>,
    #[serde(default)]
    pub mode: SetMode,
}

impl SetDefinition {
    pub fn new(name: &str, polynomials: Vec<Polynomial>) -> Self {
        SetDefinition {
            name: name.to_string(),
            polynomials,
            mode: SetMode::Algebraic,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    pub sets: Vec<SetDefinition>,
}

impl Family {
    pub fn new(sets: Vec<SetDefinition>) -> Self {
        Family { sets }
    }

    pub fn single(name: &str, polynomials: Vec<Polynomial>) -> Self {
        Family::new(vec![SetDefinition::new(name, polynomials)])
    }

    pub fn dimension(&self) -> Option<usize> {
        self.sets
            .iter()
            .flat_map(|s| s.polynomials.iter())
            .map(|p| p.nvars())
            .next()
    }

    pub fn all_polynomials(&self) -> Vec<Polynomial> {
        self.sets
            .iter()
            .flat_map(|s| s.polynomials.iter().cloned())
            .collect()
    }
}
