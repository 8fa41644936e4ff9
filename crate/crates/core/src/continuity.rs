//! Lift checks: whether the section bounds merged by a reduction are
//! continuous.
//!
//! A reduction at a site of level `k` below the top merges, for every
//! section of a higher level lying over the cell just below the site, three
//! section functions into one: the two outer ones over the neighbouring base
//! cells and the middle one over the site. The merged function is continuous
//! iff at every boundary point in the middle part, the limits of the outer
//! functions from both sides equal the middle function's value there.

use mincad_exact::{AlgebraicNumber, ExtendedReal, Polynomial};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::index::{prefix, Index};
use crate::labels::LabelTree;
use crate::limit::{
    approach_point, boundary_limit, candidates, root_value, LimitError, LimitTracker, Side,
    STEP_BUDGET,
};
use crate::model::{Cad, Cell, CellKind, Family};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ApproachSide {
    #[serde(rename = "BELOW")]
    Below,
    #[serde(rename = "ABOVE")]
    Above,
}

/// One boundary comparison: the limit of an outer section function at a
/// boundary atom against the middle function's value there.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundaryCheck {
    pub boundary_cell: Index,
    pub adjacent_cell: Index,
    pub side: ApproachSide,
    pub limit: ExtendedReal,
    pub matched_value: ExtendedReal,
    /// The limit was proved by the band argument rather than only observed
    /// to converge.
    pub certified: bool,
    pub verdict: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "CONTINUOUS")]
    Continuous,
    #[serde(rename = "DISCONTINUOUS")]
    Discontinuous,
    /// Every candidate polynomial vanishes identically over a boundary
    /// point, so no limit could be identified.
    #[serde(rename = "CURTAIN_OBSTRUCTION")]
    CurtainObstruction,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ContinuityCertificate {
    pub site: Index,
    /// The merged section, indexed before the reduction.
    pub section: Index,
    pub checks: Vec<BoundaryCheck>,
    pub verdict: Verdict,
}

impl ContinuityCertificate {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Continuous
    }
}

#[derive(Clone, Debug)]
pub enum LiftOutcome {
    /// Every merged bound is continuous; certificates for each.
    Lifts(Vec<ContinuityCertificate>),
    /// Some merged bound has a jump.
    Fails(ContinuityCertificate),
    /// A boundary point lies in a curtain with no usable witness.
    Obstructed(ContinuityCertificate),
}

impl LiftOutcome {
    pub fn lifts(&self) -> bool {
        matches!(self, LiftOutcome::Lifts(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LiftCheckMode {
    /// Examine only the merged bounds.
    #[default]
    Restricted,
    /// Examine every section of the reduced CAD; bounds that are not merged
    /// are accepted when they are single pieces or carry valid certificates.
    Full,
}

/// Context shared by the checks of one site.
struct SiteContext<'a> {
    cad: &'a Cad,
    tree: &'a LabelTree,
    family: &'a Family,
    site: &'a Index,
}

/// Whether the reduction at `site` lifts, i.e. yields a CAD.
pub fn lift_check(
    cad: &Cad,
    tree: &LabelTree,
    family: &Family,
    site: &Index,
    mode: LiftCheckMode,
) -> Result<LiftOutcome, Error> {
    if !tree.reduction_applicable(site)? {
        return Err(Error::InvalidSite(format!("labels around {site} differ")));
    }
    let k = site.len();
    let n = cad.dimension;
    if mode == LiftCheckMode::Full && !other_bounds_certified(cad, site) {
        return Err(Error::InvalidSite(
            "existing merged bounds lack valid certificates".into(),
        ));
    }
    let below = site.shift(k, -1).expect("even site");
    let ctx = SiteContext {
        cad,
        tree,
        family,
        site,
    };
    let mut certs = Vec::new();
    for l in k + 1..=n {
        let merged: Vec<&Index> = cad
            .level(l)
            .keys()
            .filter(|i| i.is_even() && prefix(k, i) == below)
            .collect();
        let results: Vec<Result<ContinuityCertificate, Error>> =
            merged.par_iter().map(|i| check_section(&ctx, i)).collect();
        for r in results {
            let cert = r?;
            match cert.verdict {
                Verdict::Continuous => certs.push(cert),
                Verdict::Discontinuous => return Ok(LiftOutcome::Fails(cert)),
                Verdict::CurtainObstruction => return Ok(LiftOutcome::Obstructed(cert)),
            }
        }
    }
    Ok(LiftOutcome::Lifts(certs))
}

/// Sections not touched by the reduction keep their bound; it is continuous
/// when it is a single piece or was certified when it was merged.
fn other_bounds_certified(cad: &Cad, site: &Index) -> bool {
    let k = site.len();
    let below = site.shift(k, -1).expect("even site");
    cad.levels.iter().flat_map(|l| l.values()).all(|cell| {
        if cell.index.len() > k && prefix(k, &cell.index) == below {
            return true;
        }
        match &cell.bound {
            Some(b) if b.pieces.len() > 1 => {
                !b.certificates.is_empty() && b.certificates.iter().all(|c| c.holds())
            }
            _ => true,
        }
    })
}

fn limit_error(site: &Index, e: LimitError) -> Error {
    match e {
        LimitError::Exact(x) => Error::Exact(x),
        other => Error::ContinuityUndecided {
            site: site.clone(),
            detail: other.to_string(),
        },
    }
}

/// Checks the merged bound for the section `section` (pre-reduction index,
/// over the cell just below the site).
fn check_section(ctx: &SiteContext<'_>, section: &Index) -> Result<ContinuityCertificate, Error> {
    let k = ctx.site.len();
    let l = section.len();
    let cad = ctx.cad;
    let lower = &cad.level(l)[section];
    let middle = &cad.level(l)[&section.shift(k, 1).expect("shift")];
    let upper = &cad.level(l)[&section.shift(k, 2).expect("shift")];
    let base_mid = cad
        .cell(&middle.base)
        .ok_or_else(|| Error::InvalidSite(format!("missing base {}", middle.base)))?;
    let fallback = fallback_polynomials(ctx, middle);
    let mut checks = Vec::new();
    for d in &base_mid.atoms {
        let piece = middle
            .bound
            .as_ref()
            .and_then(|b| b.piece_over(d))
            .ok_or_else(|| Error::InvalidSite(format!("no middle piece over {d}")))?;
        let matched = cad.atoms.atom(&piece.section_atom).expect("atom").sample[l - 1].clone();
        for (side_cell, side) in [(lower, Side::Below), (upper, Side::Above)] {
            let res = if l - 1 == k {
                vertical_limit(cad, side_cell, d, side, &fallback)
            } else {
                horizontal_limit(cad, side_cell, d, side, &fallback)
            };
            match res {
                Ok((adjacent, limit, certified)) => {
                    let verdict = limit == ExtendedReal::Finite(matched.clone());
                    checks.push(BoundaryCheck {
                        boundary_cell: d.clone(),
                        adjacent_cell: adjacent,
                        side: match side {
                            Side::Below => ApproachSide::Below,
                            Side::Above => ApproachSide::Above,
                        },
                        limit,
                        matched_value: ExtendedReal::Finite(matched.clone()),
                        certified,
                        verdict,
                    });
                    if !verdict {
                        return Ok(certificate(ctx, section, checks, Verdict::Discontinuous));
                    }
                }
                Err(LimitError::Curtain) => {
                    return Ok(certificate(ctx, section, checks, Verdict::CurtainObstruction));
                }
                Err(e) => return Err(limit_error(ctx.site, e)),
            }
        }
    }
    Ok(certificate(ctx, section, checks, Verdict::Continuous))
}

fn certificate(
    ctx: &SiteContext<'_>,
    section: &Index,
    checks: Vec<BoundaryCheck>,
    verdict: Verdict,
) -> ContinuityCertificate {
    ContinuityCertificate {
        site: ctx.site.clone(),
        section: section.clone(),
        checks,
        verdict,
    }
}

/// Polynomials defining the merged section when its own defining
/// polynomial vanishes over a boundary point. At the top level these come
/// from a set containing the section; below the top, from the other basis
/// polynomials of that level.
fn fallback_polynomials(ctx: &SiteContext<'_>, middle: &Cell) -> Vec<Polynomial> {
    let n = ctx.cad.dimension;
    let l = middle.index.len();
    if l == n {
        let Some(bits) = ctx.tree.leaf_bits(&middle.index) else {
            return vec![];
        };
        return ctx
            .family
            .sets
            .iter()
            .zip(bits)
            .filter(|(_, b)| **b)
            .flat_map(|(s, _)| s.polynomials.iter().cloned())
            .collect();
    }
    ctx.cad.atoms.basis.level(l).to_vec()
}

/// Limit along the last base coordinate: the boundary atom `d` lies at the
/// site level, and the adjacent atom is its neighbour in the same stack.
fn vertical_limit(
    cad: &Cad,
    side_cell: &Cell,
    d: &Index,
    side: Side,
    fallback: &[Polynomial],
) -> Result<(Index, ExtendedReal, bool), LimitError> {
    let j = d.len();
    let step = match side {
        Side::Below => -1,
        Side::Above => 1,
    };
    let adjacent = d.shift(j, step).ok_or(LimitError::Undecided(0))?;
    let piece = side_cell
        .bound
        .as_ref()
        .and_then(|b| b.piece_over(&adjacent))
        .ok_or(LimitError::Undecided(0))?;
    let d_atom = cad.atoms.atom(d).expect("boundary atom");
    let target = &d_atom.sample[j - 1];
    let fixed = &d_atom.sample[..j - 1];
    let obstacle = d
        .shift(j, 2 * step)
        .and_then(|i| cad.atoms.atom(&i))
        .map(|a| a.sample[j - 1].clone());
    let out = boundary_limit(&piece.root, fixed, target, side, obstacle.as_ref(), fallback)?;
    Ok((adjacent, out.limit, out.certified))
}

/// Limit along the first coordinate towards a boundary atom of level 2 over
/// a level-1 section point, following the neighbouring level-2 cell.
fn horizontal_limit(
    cad: &Cad,
    side_cell: &Cell,
    d: &Index,
    side: Side,
    fallback: &[Polynomial],
) -> Result<(Index, ExtendedReal, bool), LimitError> {
    let step = match side {
        Side::Below => -1,
        Side::Above => 1,
    };
    let a = d.parent();
    let b = a.shift(1, step).ok_or(LimitError::Undecided(0))?;
    let side_base = cad.cell(&side_cell.base).expect("side base");
    let run: Vec<&Index> = side_base.atoms.iter().filter(|x| x.parent() == b).collect();
    if run.is_empty() {
        return Err(LimitError::Undecided(0));
    }
    let bound = side_cell.bound.as_ref().expect("section bound");
    let pieces: BTreeMap<&Index, _> = run
        .iter()
        .filter_map(|x| bound.piece_over(x).map(|p| (*x, p)))
        .collect();
    let polys: Vec<Polynomial> = pieces.values().map(|p| p.root.poly.clone()).collect();
    let d_atom = cad.atoms.atom(d).expect("boundary atom");
    let cands = candidates(&polys, &d_atom.sample, fallback)?;
    let mut tracker = LimitTracker::new(&cands);
    let x_target = &d_atom.sample[0];
    let x_obstacle = b
        .shift(1, step)
        .and_then(|i| cad.atoms.atom(&i))
        .map(|x| x.sample[0].clone());
    let frontier = |idx: Option<Index>| {
        idx.and_then(|i| cad.atoms.atom(&i))
            .and_then(|at| at.root.clone())
    };
    let lo_root = frontier(run[0].shift(2, -1));
    let hi_root = frontier(run[run.len() - 1].shift(2, 1));
    for m in 0..STEP_BUDGET {
        let x = AlgebraicNumber::from_rational(approach_point(
            x_target,
            x_obstacle.as_ref(),
            side,
            m,
        ));
        let xs = [x.clone()];
        let y = if d_atom.kind == CellKind::Section {
            let s = cad.atoms.atom(run[0]).expect("section atom");
            root_value(s.root.as_ref().expect("section root"), &xs)?
        } else {
            let lo = lo_root.as_ref().map(|r| root_value(r, &xs)).transpose()?;
            let hi = hi_root.as_ref().map(|r| root_value(r, &xs)).transpose()?;
            clamp_into(&d_atom.sample[1], lo.as_ref(), hi.as_ref())
        };
        let atom = locate_in_run(cad, &run, &x, &y)?;
        let piece = pieces.get(atom).ok_or(LimitError::Undecided(m))?;
        let v = root_value(&piece.root, &[x, y])?;
        if let Some(limit) = tracker.push(&v) {
            return Ok((atom.clone(), limit, false));
        }
    }
    Err(LimitError::Undecided(STEP_BUDGET))
}

/// `y0` if it lies strictly between the frontiers, otherwise a point just
/// inside the nearer violated frontier.
fn clamp_into(
    y0: &AlgebraicNumber,
    lo: Option<&AlgebraicNumber>,
    hi: Option<&AlgebraicNumber>,
) -> AlgebraicNumber {
    let above_lo = lo.is_none_or(|l| y0 > l);
    let below_hi = hi.is_none_or(|h| y0 < h);
    if above_lo && below_hi {
        return y0.clone();
    }
    let one = mincad_exact::Rational::from_integer(1.into());
    let r = match (lo, hi) {
        (Some(l), Some(h)) => l.rational_between(h),
        (Some(l), None) => l.hi().floor() + one,
        (None, Some(h)) => h.lo().ceil() - one,
        (None, None) => unreachable!("unbounded band contains every point"),
    };
    AlgebraicNumber::from_rational(r)
}

/// The atom of `run` (a contiguous run of atoms over one level-1 atom)
/// containing the point `(x, y)`.
fn locate_in_run<'r>(
    cad: &Cad,
    run: &[&'r Index],
    x: &AlgebraicNumber,
    y: &AlgebraicNumber,
) -> Result<&'r Index, LimitError> {
    let xs = [x.clone()];
    for (i, idx) in run.iter().enumerate() {
        let atom = cad.atoms.atom(idx).expect("run atom");
        if let Some(root) = &atom.root {
            let v = root_value(root, &xs)?;
            if y == &v {
                return Ok(idx);
            }
            if y < &v {
                return run
                    .get(i.wrapping_sub(1))
                    .copied()
                    .ok_or(LimitError::Undecided(0));
            }
        }
    }
    run.last().copied().ok_or(LimitError::Undecided(0))
}
