//! Cylindrical algebraic decompositions adapted to families of algebraic
//! sets in dimension 1 to 3, and their minimization by cell-merging
//! reductions.
//!
//! The pipeline is: [`projection`] builds a basis, [`lift`] constructs the
//! initial decomposition, [`labels`] computes the CAD tree, [`reduce`] applies
//! reductions whose merged bounds are shown continuous by [`continuity`], and
//! [`minimize`] drives greedy or exhaustive search.

pub mod adapted;
pub mod continuity;
pub mod curtain;
pub mod index;
pub mod labels;
pub mod lift;
pub mod limit;
pub mod membership;
pub mod minimize;
pub mod model;
pub mod problem;
pub mod projection;
pub mod reduce;
pub mod report;
pub mod serialize;
pub mod validate;

pub use index::{classify, fibre, prefix, relabel, Index, IndexClass};
pub use labels::{Label, LabelTree, ReductionSite};
pub use model::{Cad, Cell, CellKind, Family, SetDefinition};
pub use problem::Problem;

use index::Index as Idx;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Exact(#[from] mincad_exact::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("invalid site: {0}")]
    InvalidSite(String),
    #[error("continuity undecided at site {site}: {detail}")]
    ContinuityUndecided { site: Idx, detail: String },
    #[error("curtain at boundary point {0}")]
    CurtainAtBoundary(String),
    #[error("comparison failure: {0}")]
    ComparisonFailure(String),
    #[error("lift failure at site {0}")]
    LiftFailure(Idx),
}
