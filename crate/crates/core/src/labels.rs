//! CAD trees: the prefix tree of cell indices with recursive membership
//! labels, and the tree-level reduction rules.

use mincad_exact::sign_at;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use crate::index::{relabel, Index};
use crate::model::{AtomDecomposition, Cad, Family};
use crate::Error;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Label {
    /// Bit `i` is set iff the cell lies in set `i`.
    Leaf(Vec<bool>),
    /// Labels of the cells of the stack, bottom to top.
    Node(Vec<Label>),
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Leaf(b) => {
                for x in b {
                    write!(f, "{}", u8::from(*x))?;
                }
                Ok(())
            }
            Label::Node(children) => {
                write!(f, "(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c:?}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// An even node whose removal is considered; ordered by level, then index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ReductionSite {
    pub level: usize,
    pub node: Index,
}

impl ReductionSite {
    pub fn new(node: &Index) -> Self {
        ReductionSite {
            level: node.len(),
            node: node.clone(),
        }
    }
}

impl fmt::Display for ReductionSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.node)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelTree {
    pub dimension: usize,
    /// Labels of every node, including the root `()`.
    pub labels: BTreeMap<Index, Label>,
}

impl LabelTree {
    /// Builds the tree from the leaf labels of the top level.
    pub fn from_leaves(dimension: usize, leaves: BTreeMap<Index, Vec<bool>>) -> Self {
        let mut labels: BTreeMap<Index, Label> = BTreeMap::new();
        let mut current: BTreeMap<Index, Label> = leaves
            .into_iter()
            .map(|(i, b)| (i, Label::Leaf(b)))
            .collect();
        for _ in 0..dimension {
            let mut parents: BTreeMap<Index, Vec<Label>> = BTreeMap::new();
            for (i, l) in &current {
                parents.entry(i.parent()).or_default().push(l.clone());
            }
            labels.append(&mut current);
            current = parents
                .into_iter()
                .map(|(i, ch)| (i, Label::Node(ch)))
                .collect();
        }
        labels.append(&mut current);
        LabelTree { dimension, labels }
    }

    pub fn label(&self, i: &Index) -> Option<&Label> {
        self.labels.get(i)
    }

    pub fn contains(&self, i: &Index) -> bool {
        self.labels.contains_key(i)
    }

    pub fn leaves(&self) -> impl Iterator<Item = (&Index, &Label)> {
        self.labels.iter().filter(|(i, _)| i.len() == self.dimension)
    }

    pub fn nodes_at(&self, level: usize) -> impl Iterator<Item = &Index> {
        self.labels.keys().filter(move |i| i.len() == level)
    }

    /// Whether the three labels around the even node `a` agree.
    pub fn reduction_applicable(&self, a: &Index) -> Result<bool, Error> {
        if !a.is_even() || !self.contains(a) {
            return Err(Error::InvalidSite(format!("{a} is not an even node of the tree")));
        }
        let k = a.len();
        let below = a.shift(k, -1).expect("even entry >= 2");
        let above = a.shift(k, 1).expect("shift up");
        match (self.label(&below), self.label(a), self.label(&above)) {
            (Some(l0), Some(l1), Some(l2)) => Ok(l0 == l1 && l1 == l2),
            _ => Err(Error::InvalidSite(format!("{a} lacks a neighbour"))),
        }
    }

    /// Tree after removing the node `a`.
    pub fn apply_reduction(&self, a: &Index) -> Result<LabelTree, Error> {
        if !self.reduction_applicable(a)? {
            return Err(Error::InvalidSite(format!("labels around {a} differ")));
        }
        let leaves: BTreeMap<Index, Vec<bool>> = self
            .leaves()
            .map(|(i, l)| match l {
                Label::Leaf(b) => (relabel(a, i), b.clone()),
                Label::Node(_) => unreachable!("top-level nodes are leaves"),
            })
            .collect();
        Ok(LabelTree::from_leaves(self.dimension, leaves))
    }

    /// All applicable sites, ordered by level and then index.
    pub fn enumerate_sites(&self) -> Vec<ReductionSite> {
        let mut out: Vec<ReductionSite> = self
            .labels
            .keys()
            .filter(|i| i.is_even())
            .filter(|i| self.reduction_applicable(i).unwrap_or(false))
            .map(ReductionSite::new)
            .collect();
        out.sort();
        out
    }

    pub fn leaf_bits(&self, i: &Index) -> Option<&[bool]> {
        match self.labels.get(i)? {
            Label::Leaf(b) => Some(b),
            Label::Node(_) => None,
        }
    }
}

/// Membership bits of every top-level atom: bit `i` is set iff all
/// polynomials of set `i` vanish at the atom's sample point.
pub fn atom_bits(atoms: &AtomDecomposition, family: &Family) -> BTreeMap<Index, Vec<bool>> {
    let top: Vec<_> = atoms.levels[atoms.dimension - 1].values().collect();
    top.par_iter()
        .map(|a| {
            let bits = family
                .sets
                .iter()
                .map(|s| s.polynomials.iter().all(|p| sign_at(p, &a.sample) == 0))
                .collect();
            (a.index.clone(), bits)
        })
        .collect()
}

/// The CAD tree from precomputed atom bits.
pub fn label_tree(c: &Cad, bits: &BTreeMap<Index, Vec<bool>>) -> LabelTree {
    let leaves = c
        .level(c.dimension)
        .iter()
        .map(|(i, cell)| (i.clone(), bits[&cell.sample_atom].clone()))
        .collect();
    LabelTree::from_leaves(c.dimension, leaves)
}

pub fn label_cells(c: &Cad, family: &Family) -> LabelTree {
    label_tree(c, &atom_bits(&c.atoms, family))
}
