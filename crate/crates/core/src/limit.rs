//! One-sided limits of section functions at boundary points.
//!
//! The function is evaluated exactly along a sequence of rational points
//! converging to the boundary point. Candidate limits are the real roots of
//! the defining polynomial over the boundary point, computed exactly; the
//! sequence is matched against them by a convergence rule. When the base is
//! one-dimensional the answer is then certified by a band argument: two
//! horizontal lines that the curve cannot cross on the remaining interval.

use mincad_exact::{
    isolate_real_roots, isolate_roots_at, sign_at, AlgebraicNumber, ExtendedReal, Polynomial,
    Rational,
};
use mincad_exact::roots::pow2;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

use crate::model::IndexedRoot;

/// Number of consecutive agreeing steps required before deciding.
pub const STABLE_STEPS: usize = 4;
/// Maximum number of path points evaluated.
pub const STEP_BUDGET: usize = 64;

#[derive(Debug, thiserror::Error)]
pub enum LimitError {
    #[error("limit undecided after {0} steps")]
    Undecided(usize),
    #[error("the defining polynomials vanish identically over the boundary point")]
    Curtain,
    #[error("section root {0} does not exist at a path point")]
    MissingRoot(u32),
    #[error(transparent)]
    Exact(#[from] mincad_exact::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// The path approaches from smaller values of the moving coordinate.
    Below,
    Above,
}

#[derive(Clone, Debug)]
pub struct LimitOutcome {
    pub limit: ExtendedReal,
    /// Whether the band argument proved the limit.
    pub certified: bool,
    pub steps: usize,
    /// Float value of the function at the last path point.
    pub last_value: f64,
    /// The last path point.
    pub last_point: Vec<AlgebraicNumber>,
}

fn two() -> Rational {
    Rational::from_integer(2.into())
}

fn half_pow(m: usize) -> Rational {
    pow2(m as u32).recip()
}

/// The `m`-th rational point of a path approaching `target` from `side`,
/// staying strictly between `bound` (the nearest obstacle on that side) and
/// `target`. Distances shrink geometrically.
pub fn approach_point(
    target: &AlgebraicNumber,
    bound: Option<&AlgebraicNumber>,
    side: Side,
    m: usize,
) -> Rational {
    let mut delta0 = Rational::one();
    if let Some(b) = bound {
        let r = b.rational_between(target);
        let mut t = target.clone();
        let gap = loop {
            let g = match side {
                Side::Below => t.lo() - &r,
                Side::Above => &r - t.hi(),
            };
            if g.is_positive() {
                break g;
            }
            t = t.refine();
        };
        delta0 = delta0.min(gap);
    }
    let delta = delta0 * half_pow(m);
    let t = target.refine_to(&(&delta / Rational::from_integer(4.into())));
    match side {
        Side::Below => t.lo() - &delta / two(),
        Side::Above => t.hi() + &delta / two(),
    }
}

/// The indexed root evaluated at `point` (of length `nvars - 1`).
pub fn root_value(root: &IndexedRoot, point: &[AlgebraicNumber]) -> Result<AlgebraicNumber, LimitError> {
    let roots = isolate_roots_at(&root.poly, point)?;
    roots
        .into_iter()
        .nth(root.root_number as usize - 1)
        .ok_or(LimitError::MissingRoot(root.root_number))
}

/// `a - b` as a float, accurate even when the difference is tiny.
pub fn approx_sub(a: &AlgebraicNumber, b: &AlgebraicNumber) -> f64 {
    approx_sub_refining(&mut a.clone(), &mut b.clone())
}

/// As [`approx_sub`], keeping the refined isolating intervals in `a` and `b`.
fn approx_sub_refining(a: &mut AlgebraicNumber, b: &mut AlgebraicNumber) -> f64 {
    if a.cmp_exact(b) == Ordering::Equal {
        return 0.0;
    }
    let mut w = Rational::one();
    loop {
        *a = a.refine_to(&w);
        *b = b.refine_to(&w);
        let lo = a.lo() - b.hi();
        let hi = a.hi() - b.lo();
        let mid = (&lo + &hi) / two();
        let spread = &hi - &lo;
        // relative accuracy of about 2^-24
        if mid.is_zero() || spread.abs() * pow2(24) <= mid.abs() {
            return mincad_exact::rational::to_f64(&mid);
        }
        w /= pow2(8);
        if w < half_pow(4000) {
            return mincad_exact::rational::to_f64(&mid);
        }
    }
}

/// Candidate limit values over the boundary point `p`: the real roots of the
/// defining polynomial there, or of the first fallback polynomial that does
/// not vanish identically over `p`.
pub struct Candidates {
    pub values: Vec<AlgebraicNumber>,
    /// Whether the function may be unbounded near `p`.
    pub unbounded_possible: bool,
    /// The polynomial the candidates are roots of.
    pub source: Polynomial,
}

pub fn candidates(
    qs: &[Polynomial],
    p: &[AlgebraicNumber],
    fallback: &[Polynomial],
) -> Result<Candidates, LimitError> {
    let mut values: Vec<AlgebraicNumber> = Vec::new();
    let mut unbounded_possible = false;
    let mut source = None;
    for q in qs {
        let z = q.nvars() - 1;
        match isolate_roots_at(q, p) {
            Ok(rs) => {
                values.extend(rs);
                let lc = q.leading_coeff_in(z).with_nvars(z)?;
                unbounded_possible |= sign_at(&lc, p) == 0;
                source.get_or_insert_with(|| q.clone());
            }
            Err(mincad_exact::Error::CurtainFibre) => {}
            Err(e) => return Err(e.into()),
        }
    }
    if source.is_none() {
        for f in fallback {
            if let Ok(rs) = isolate_roots_at(f, p) {
                values = rs;
                unbounded_possible = true;
                source = Some(f.clone());
                break;
            }
        }
    }
    let source = source.ok_or(LimitError::Curtain)?;
    values.sort();
    values.dedup();
    Ok(Candidates {
        values,
        unbounded_possible,
        source,
    })
}

/// The convergence rule: a value sequence is matched to the nearest
/// candidate once it stayed nearest for [`STABLE_STEPS`] steps with strictly
/// decreasing distance below a quarter of the candidate's separation.
/// Divergence to infinity is accepted only when the leading coefficient
/// vanishes at the boundary point.
pub struct LimitTracker {
    cands: Vec<AlgebraicNumber>,
    /// The candidates with isolating intervals refined so far.
    refined: Vec<AlgebraicNumber>,
    floats: Vec<f64>,
    seps: Vec<f64>,
    max_abs: f64,
    unbounded_possible: bool,
    history: Vec<(Option<usize>, f64, f64)>,
}

impl LimitTracker {
    pub fn new(c: &Candidates) -> Self {
        let f: Vec<f64> = c.values.iter().map(|v| v.to_f64()).collect();
        let seps = (0..f.len())
            .map(|i| {
                let l = if i > 0 { f[i] - f[i - 1] } else { f64::INFINITY };
                let r = if i + 1 < f.len() { f[i + 1] - f[i] } else { f64::INFINITY };
                l.min(r)
            })
            .collect();
        LimitTracker {
            cands: c.values.clone(),
            refined: c.values.clone(),
            floats: f.clone(),
            seps,
            max_abs: f.iter().fold(0.0f64, |m, x| m.max(x.abs())),
            unbounded_possible: c.unbounded_possible,
            history: Vec::new(),
        }
    }

    pub fn steps(&self) -> usize {
        self.history.len()
    }

    /// Records the next value and returns a decision if one is reached.
    pub fn push(&mut self, v: &AlgebraicNumber) -> Option<ExtendedReal> {
        let vf = v.to_f64();
        let mut exact_v = v.clone();
        let mut nearest: Option<(usize, f64)> = None;
        for i in 0..self.cands.len() {
            let cf = self.floats[i];
            let df = (vf - cf).abs();
            // floats are accurate to about 2^-60 relative; only near
            // coincidences need exact refinement
            let d = if df > 1e-9 * (1.0 + vf.abs().max(cf.abs())) {
                df
            } else {
                approx_sub_refining(&mut exact_v, &mut self.refined[i]).abs()
            };
            if nearest.is_none_or(|(_, best)| d < best) {
                nearest = Some((i, d));
            }
        }
        match nearest {
            Some((i, d)) => self.history.push((Some(i), d, vf)),
            None => self.history.push((None, f64::INFINITY, vf)),
        }
        if self.history.len() < STABLE_STEPS {
            return None;
        }
        let tail = &self.history[self.history.len() - STABLE_STEPS..];
        if let Some(i) = tail[0].0 {
            let same = tail.iter().all(|h| h.0 == Some(i));
            let shrinking = tail.windows(2).all(|w| w[1].1 < w[0].1 || w[1].1 == 0.0);
            let close = tail[STABLE_STEPS - 1].1 < self.seps[i] / 4.0;
            if same && shrinking && close {
                return Some(ExtendedReal::Finite(self.cands[i].clone()));
            }
        }
        if self.unbounded_possible {
            let s = tail[0].2.signum();
            let growing = tail
                .windows(2)
                .all(|w| w[1].2.abs() > w[0].2.abs() && w[1].2.signum() == s);
            let far = tail[STABLE_STEPS - 1].2.abs() > 2.0 * self.max_abs + 1.0;
            if growing && far {
                return Some(if s > 0.0 {
                    ExtendedReal::PosInf
                } else {
                    ExtendedReal::NegInf
                });
            }
        }
        None
    }

    /// Open band `(lo, hi)` around the decided value that excludes every
    /// other candidate and contains `v`. `None` ends are infinite.
    fn band(&self, limit: &ExtendedReal, v: &AlgebraicNumber) -> (Option<Rational>, Option<Rational>) {
        let below = |x: &AlgebraicNumber| -> Rational { x.lo().floor() - Rational::one() };
        let above = |x: &AlgebraicNumber| -> Rational { x.hi().ceil() + Rational::one() };
        match limit {
            ExtendedReal::Finite(c) => {
                let i = self.cands.iter().position(|x| x == c).expect("decided candidate");
                let lo_ref = if v < c { v } else { c };
                let hi_ref = if v > c { v } else { c };
                let lo = match i.checked_sub(1).map(|j| &self.cands[j]) {
                    Some(prev) => prev.rational_between(lo_ref),
                    None => below(lo_ref),
                };
                let hi = match self.cands.get(i + 1) {
                    Some(next) => hi_ref.rational_between(next),
                    None => above(hi_ref),
                };
                (Some(lo), Some(hi))
            }
            ExtendedReal::PosInf => {
                let lo = match self.cands.last() {
                    Some(c) => c.rational_between(v),
                    None => below(v),
                };
                (Some(lo), None)
            }
            ExtendedReal::NegInf => {
                let hi = match self.cands.first() {
                    Some(c) => v.rational_between(c),
                    None => above(v),
                };
                (None, Some(hi))
            }
        }
    }
}

/// Whether the curve `q(x, y) = 0` avoids the horizontal line `y = beta`
/// for `x` in the closed interval between `a` and `b`.
fn line_avoided(q: &Polynomial, beta: &Rational, a: &AlgebraicNumber, b: &AlgebraicNumber) -> bool {
    let Some(u) = q.substitute(1, beta).to_upoly(0) else {
        return false;
    };
    if u.is_zero() {
        return false;
    }
    let Ok(roots) = isolate_real_roots(&u) else {
        return false;
    };
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    !roots.iter().any(|r| r >= lo && r <= hi)
}

/// Band certificate for a bivariate defining polynomial approached along
/// the first coordinate: the curve is trapped between two lines on the
/// interval from the last path point to the target.
fn certify_band(
    tracker: &LimitTracker,
    q: &Polynomial,
    limit: &ExtendedReal,
    v: &AlgebraicNumber,
    x_last: &AlgebraicNumber,
    target: &AlgebraicNumber,
) -> bool {
    if q.nvars() != 2 {
        return false;
    }
    let (lo, hi) = tracker.band(limit, v);
    lo.iter().chain(hi.iter()).all(|b| line_avoided(q, b, x_last, target))
}

/// One-sided limit of the indexed root `root` as the last base coordinate
/// tends to `target` from `side`, the other base coordinates being fixed.
/// `bound` is the nearest boundary value of the base cell on that side.
/// `fallback` supplies defining polynomials when `root.poly` vanishes
/// identically over the boundary point.
pub fn boundary_limit(
    root: &IndexedRoot,
    fixed: &[AlgebraicNumber],
    target: &AlgebraicNumber,
    side: Side,
    bound: Option<&AlgebraicNumber>,
    fallback: &[Polynomial],
) -> Result<LimitOutcome, LimitError> {
    let mut p = fixed.to_vec();
    p.push(target.clone());
    let cands = candidates(std::slice::from_ref(&root.poly), &p, fallback)?;
    let mut tracker = LimitTracker::new(&cands);
    for m in 0..STEP_BUDGET {
        let x = AlgebraicNumber::from_rational(approach_point(target, bound, side, m));
        let mut point = fixed.to_vec();
        point.push(x.clone());
        let v = root_value(root, &point)?;
        if let Some(limit) = tracker.push(&v) {
            let certified = fixed.is_empty()
                && certify_band(&tracker, &cands.source, &limit, &v, &x, target);
            return Ok(LimitOutcome {
                limit,
                certified,
                steps: tracker.steps(),
                last_value: v.to_f64(),
                last_point: point,
            });
        }
    }
    Err(LimitError::Undecided(STEP_BUDGET))
}
