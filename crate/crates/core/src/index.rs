//! Cell index tuples and the relabelling calculus used by reductions.
//!
//! An index `(i_1, ..., i_l)` addresses a cell of level `l`; its parity is the
//! parity of the last entry (even entries are sections).

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Index(pub Vec<u32>);

impl Index {
    pub fn root() -> Self {
        Index(Vec::new())
    }

    pub fn new(entries: &[u32]) -> Self {
        debug_assert!(entries.iter().all(|&e| e >= 1));
        Index(entries.to_vec())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// Sections have an even last entry. The empty index is neither.
    pub fn is_even(&self) -> bool {
        self.last().is_some_and(|e| e % 2 == 0)
    }

    pub fn is_odd(&self) -> bool {
        self.last().is_some_and(|e| e % 2 == 1)
    }

    pub fn child(&self, j: u32) -> Index {
        let mut v = self.0.clone();
        v.push(j);
        Index(v)
    }

    pub fn parent(&self) -> Index {
        let mut v = self.0.clone();
        v.pop();
        Index(v)
    }

    /// Adds `m` to entry `k` (1-based). Returns `None` if an entry would
    /// drop below 1 or the index is too short.
    pub fn shift(&self, k: usize, m: i64) -> Option<Index> {
        if k == 0 || k > self.len() {
            return None;
        }
        let e = self.0[k - 1] as i64 + m;
        if e < 1 {
            return None;
        }
        let mut v = self.0.clone();
        v[k - 1] = e as u32;
        Some(Index(v))
    }

    pub fn starts_with(&self, prefix: &Index) -> bool {
        self.0.starts_with(&prefix.0)
    }
}

impl fmt::Debug for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// `p_k`: the first `k` entries, or the whole index if it is shorter.
pub fn prefix(k: usize, i: &Index) -> Index {
    Index(i.0[..k.min(i.len())].to_vec())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IndexClass {
    /// Prefix equals the site.
    Site,
    /// Prefix lies strictly above the site in the same stack.
    Above,
    /// Everything else.
    Fixed,
}

/// Classification of `i` with respect to the site `a` (`|a| >= 1`).
pub fn classify(a: &Index, i: &Index) -> IndexClass {
    let k = a.len();
    assert!(k >= 1, "site must be nonempty");
    let p = prefix(k, i);
    if p.len() < k {
        return IndexClass::Fixed;
    }
    if p == *a {
        return IndexClass::Site;
    }
    if p.0[..k - 1] == a.0[..k - 1] && p.0[k - 1] > a.0[k - 1] {
        return IndexClass::Above;
    }
    IndexClass::Fixed
}

/// The relabelling map of the even site `a`.
pub fn relabel(a: &Index, i: &Index) -> Index {
    assert!(a.is_even(), "relabelling requires an even site");
    let k = a.len();
    match classify(a, i) {
        IndexClass::Site => i.shift(k, -1).expect("entry >= 2"),
        IndexClass::Above => i.shift(k, -2).expect("entry >= 3"),
        IndexClass::Fixed => i.clone(),
    }
}

/// Preimage of `i` under `relabel(a, .)`.
pub fn fibre(a: &Index, i: &Index) -> Vec<Index> {
    let k = a.len();
    let below = a.shift(k, -1).expect("even site entry >= 2");
    match classify(&below, i) {
        IndexClass::Site => vec![
            i.clone(),
            i.shift(k, 1).unwrap(),
            i.shift(k, 2).unwrap(),
        ],
        _ => match classify(a, i) {
            IndexClass::Site | IndexClass::Above => vec![i.shift(k, 2).unwrap()],
            IndexClass::Fixed => vec![i.clone()],
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ix(v: &[u32]) -> Index {
        Index::new(v)
    }

    #[test]
    fn prefix_examples() {
        assert_eq!(prefix(1, &ix(&[4, 7, 1])), ix(&[4]));
        assert_eq!(prefix(3, &ix(&[4, 7])), ix(&[4, 7]));
        assert_eq!(prefix(2, &ix(&[2, 2, 2])), ix(&[2, 2]));
    }

    #[test]
    fn classify_examples() {
        let a = ix(&[2]);
        assert_eq!(classify(&a, &ix(&[2, 5])), IndexClass::Site);
        assert_eq!(classify(&a, &ix(&[4, 7, 1])), IndexClass::Above);
        assert_eq!(classify(&a, &ix(&[1, 9])), IndexClass::Fixed);
        assert_eq!(classify(&a, &Index::root()), IndexClass::Fixed);
    }

    #[test]
    fn relabel_examples() {
        let a = ix(&[2]);
        assert_eq!(relabel(&a, &ix(&[2, 5])), ix(&[1, 5]));
        assert_eq!(relabel(&a, &ix(&[4, 7, 1])), ix(&[2, 7, 1]));
        let mut f = fibre(&a, &ix(&[1]));
        f.sort();
        assert_eq!(f, vec![ix(&[1]), ix(&[2]), ix(&[3])]);
    }

    #[test]
    fn deeper_site() {
        let a = ix(&[3, 4]);
        assert_eq!(relabel(&a, &ix(&[3, 4, 2])), ix(&[3, 3, 2]));
        assert_eq!(relabel(&a, &ix(&[3, 5])), ix(&[3, 3]));
        assert_eq!(relabel(&a, &ix(&[3, 2, 7])), ix(&[3, 2, 7]));
        assert_eq!(relabel(&a, &ix(&[4, 6])), ix(&[4, 6]));
        assert_eq!(relabel(&a, &ix(&[3])), ix(&[3]));
    }
}
