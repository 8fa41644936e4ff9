//! Structural invariants of a CAD.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::index::Index;
use crate::model::{Cad, CellKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub cell: Index,
    pub rule: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.rule, self.cell, self.detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, cell: &Index, rule: &'static str, detail: impl Into<String>) {
        self.violations.push(Violation {
            cell: cell.clone(),
            rule,
            detail: detail.into(),
        });
    }
}

pub fn validate_cad(c: &Cad) -> ValidationReport {
    let mut r = ValidationReport::default();
    if c.levels.len() != c.dimension || c.atoms.levels.len() != c.dimension {
        r.push(&Index::root(), "shape", "level count differs from dimension");
        return r;
    }
    for k in 1..=c.dimension {
        check_level(c, k, &mut r);
    }
    r
}

fn check_level(c: &Cad, k: usize, r: &mut ValidationReport) {
    let cells = c.level(k);
    let atoms = &c.atoms.levels[k - 1];
    let base_cells: BTreeMap<Index, BTreeSet<Index>> = if k == 1 {
        [(Index::root(), [Index::root()].into())].into()
    } else {
        c.level(k - 1)
            .iter()
            .map(|(i, cell)| (i.clone(), cell.atoms.iter().cloned().collect()))
            .collect()
    };

    // Stack arity: the children of each base are 1..=2u+1.
    let mut children: BTreeMap<Index, Vec<u32>> = BTreeMap::new();
    for idx in cells.keys() {
        children.entry(idx.parent()).or_default().push(idx.last().unwrap_or(0));
    }
    for base in base_cells.keys() {
        let got = children.remove(base).unwrap_or_default();
        let Some(&u) = c.stack_sizes.get(base) else {
            r.push(base, "stack arity", "no stack size recorded");
            continue;
        };
        let want: Vec<u32> = (1..=(2 * u + 1) as u32).collect();
        if got != want {
            r.push(base, "stack arity", format!("children {got:?} with {u} sections"));
        }
    }
    for base in children.keys() {
        r.push(base, "missing base", "cells over a base that does not exist");
    }

    let mut owner: BTreeMap<&Index, &Index> = BTreeMap::new();
    for (idx, cell) in cells {
        if &cell.index != idx {
            r.push(idx, "index", format!("stored index {}", cell.index));
        }
        if cell.kind != CellKind::of(idx) {
            r.push(idx, "kind", "kind does not match index parity");
        }
        if cell.base != idx.parent() {
            r.push(idx, "base", format!("base {} is not the parent", cell.base));
        }
        if cell.atoms.is_empty() {
            r.push(idx, "atom partition", "cell has no atoms");
            continue;
        }
        if cell.kind == CellKind::Sector
            && !cell.atoms.iter().any(|a| atoms.get(a).is_some_and(|t| t.kind == CellKind::Sector))
        {
            r.push(idx, "atom kind", "sector without sector atoms");
        }
        for a in &cell.atoms {
            if let Some(prev) = owner.insert(a, idx) {
                r.push(idx, "atom partition", format!("atom {a} also in {prev}"));
            }
            match atoms.get(a) {
                None => r.push(idx, "atom partition", format!("unknown atom {a}")),
                // sectors merged at their own level absorb a section atom
                Some(atom) => {
                    if cell.kind == CellKind::Section && atom.kind != CellKind::Section {
                        r.push(idx, "atom kind", format!("sector atom {a} in a section"));
                    }
                }
            }
            let parent_ok = base_cells
                .get(&cell.base)
                .is_some_and(|s| s.contains(&a.parent()));
            if !parent_ok {
                r.push(idx, "atom parent", format!("atom {a} is not over the base cell"));
            }
        }
        if !cell.atoms.contains(&cell.sample_atom) {
            r.push(idx, "sample", "sample atom is not in the cell");
        } else if let Some(atom) = atoms.get(&cell.sample_atom) {
            if atom.sample != cell.sample {
                r.push(idx, "sample", "sample differs from the sample atom's point");
            }
        }
        if k > 1 {
            if let Some(base) = c.cell(&cell.base) {
                if cell.sample.len() != k || cell.sample[..k - 1] != base.sample[..] {
                    r.push(idx, "sample", "sample does not extend the base sample");
                }
            }
        }
        check_bound(c, idx, r);
    }
    for a in atoms.keys() {
        if !owner.contains_key(a) {
            r.push(a, "atom partition", "atom belongs to no cell");
        }
    }
    check_stack_order(c, k, &owner, r);
}

/// Over each base atom the atoms of a cell are contiguous and cells appear in
/// index order.
fn check_stack_order(c: &Cad, k: usize, owner: &BTreeMap<&Index, &Index>, r: &mut ValidationReport) {
    let mut by_base: BTreeMap<Index, Vec<&Index>> = BTreeMap::new();
    for a in c.atoms.levels[k - 1].keys() {
        if let Some(o) = owner.get(a) {
            by_base.entry(a.parent()).or_default().push(o);
        }
    }
    for (base_atom, seq) in by_base {
        let mut runs: Vec<&Index> = Vec::new();
        for o in seq {
            if runs.last() != Some(&o) {
                runs.push(o);
            }
        }
        let ordered = runs.windows(2).all(|w| w[0] < w[1]);
        if !ordered {
            r.push(&base_atom, "stack order", format!("cells over atom in order {runs:?}"));
        }
    }
}

fn check_bound(c: &Cad, idx: &Index, r: &mut ValidationReport) {
    let cell = &c.level(idx.len())[idx];
    match (&cell.kind, &cell.bound) {
        (CellKind::Section, None) => r.push(idx, "bound", "section without a bound"),
        (CellKind::Sector, Some(_)) => r.push(idx, "bound", "sector with a section bound"),
        (CellKind::Sector, None) => {}
        (CellKind::Section, Some(b)) => {
            let mut covered: Vec<&Index> = b.pieces.iter().map(|p| &p.section_atom).collect();
            covered.sort();
            let own: Vec<&Index> = cell.atoms.iter().collect();
            if covered != own {
                r.push(idx, "bound", "pieces do not match the cell atoms one to one");
            }
            if b.pieces.iter().any(|p| p.base_atom != p.section_atom.parent()) {
                r.push(idx, "bound", "piece base is not the atom parent");
            }
            if b.pieces.len() > 1 {
                if b.certificates.is_empty() {
                    r.push(idx, "continuity certificate", "merged bound without certificate");
                } else if b.certificates.iter().any(|cert| !cert.holds()) {
                    r.push(idx, "continuity certificate", "certificate records a failure");
                }
            }
        }
    }
}
