//! Shared test fixtures and independent oracles.
#![allow(dead_code)]

use mincad::continuity::{lift_check, LiftCheckMode, LiftOutcome};
use mincad::minimize::{build, Workspace};
use mincad::model::{Cad, Family, SetDefinition};
use mincad::problem::Problem;
use mincad::reduce::apply_reduction;
use mincad::serialize::canonical_key;
use mincad::Index;
use mincad_exact::{rational, Polynomial};
use std::collections::{BTreeMap, VecDeque};

pub fn poly(n: usize, terms: &[(&[u32], i64)]) -> Polynomial {
    Polynomial::from_i64(n, terms)
}

pub fn ix(v: &[u32]) -> Index {
    Index::new(v)
}

fn problem(vars: &[&str], sets: Vec<(&str, Vec<Polynomial>)>, extra: Vec<Polynomial>) -> Problem {
    let family = Family::new(
        sets.into_iter()
            .map(|(name, ps)| SetDefinition::new(name, ps))
            .collect(),
    );
    let mut p = Problem::new(family, vars.iter().map(|s| s.to_string()).collect()).unwrap();
    p.options.extra_polynomials = extra;
    p
}

/// `{x = ±1}` in R with an extra section at `x = 0`.
pub fn two_points_with_origin() -> Problem {
    problem(
        &["x"],
        vec![("pts", vec![poly(1, &[(&[2], 1), (&[0], -1)])])],
        vec![poly(1, &[(&[1], 1)])],
    )
}

pub fn unit_circle() -> Polynomial {
    poly(2, &[(&[2, 0], 1), (&[0, 2], 1), (&[0, 0], -1)])
}

pub fn unit_sphere() -> Polynomial {
    poly(3, &[(&[2, 0, 0], 1), (&[0, 2, 0], 1), (&[0, 0, 2], 1), (&[0, 0, 0], -1)])
}

/// The unit circle with an extra vertical line `x = 0`.
pub fn circle_with_line() -> Problem {
    problem(
        &["x", "y"],
        vec![("circle", vec![unit_circle()])],
        vec![poly(2, &[(&[1, 0], 1)])],
    )
}

/// The unit sphere with an extra plane `x = 0`.
pub fn sphere_with_plane() -> Problem {
    problem(
        &["x", "y", "z"],
        vec![("sphere", vec![unit_sphere()])],
        vec![poly(3, &[(&[1, 0, 0], 1)])],
    )
}

pub fn circle() -> Problem {
    problem(&["x", "y"], vec![("circle", vec![unit_circle()])], vec![])
}

pub fn sphere() -> Problem {
    problem(&["x", "y", "z"], vec![("sphere", vec![unit_sphere()])], vec![])
}

/// `(y - x)(y + x) = 0`.
pub fn crossing_lines() -> Problem {
    problem(
        &["x", "y"],
        vec![("lines", vec![poly(2, &[(&[0, 2], 1), (&[2, 0], -1)])])],
        vec![],
    )
}

/// The parabola `y = x^2` and the line `y = x + 2` as two sets.
pub fn parabola_and_line() -> Problem {
    problem(
        &["x", "y"],
        vec![
            ("parabola", vec![poly(2, &[(&[0, 1], 1), (&[2, 0], -1)])]),
            ("line", vec![poly(2, &[(&[0, 1], 1), (&[1, 0], -1), (&[0, 0], -2)])]),
        ],
        vec![],
    )
}

/// `x^2 + xy + y^2 = 1`.
pub fn ellipse() -> Problem {
    problem(
        &["x", "y"],
        vec![(
            "ellipse",
            vec![poly(2, &[(&[2, 0], 1), (&[1, 1], 1), (&[0, 2], 1), (&[0, 0], -1)])],
        )],
        vec![],
    )
}

/// `y^2 = x^3 - x`.
pub fn cubic() -> Problem {
    problem(
        &["x", "y"],
        vec![(
            "cubic",
            vec![poly(2, &[(&[0, 2], 1), (&[3, 0], -1), (&[1, 0], 1)])],
        )],
        vec![],
    )
}

/// Two crossing lines together with the isolated point `(0, 1)`:
/// `(y^2 - x^2)(x^2 + (y - 1)^2) = 0`.
pub fn lines_and_point() -> Problem {
    let lines = poly(2, &[(&[0, 2], 1), (&[2, 0], -1)]);
    let point = poly(2, &[(&[2, 0], 1), (&[0, 2], 1), (&[0, 1], -2), (&[0, 0], 1)]);
    problem(&["x", "y"], vec![("set", vec![&lines * &point])], vec![])
}

/// `z (x^2 + y^2) = 0`: the plane `z = 0` and the `z` axis.
pub fn plane_and_axis() -> Problem {
    problem(
        &["x", "y", "z"],
        vec![(
            "set",
            vec![poly(3, &[(&[2, 0, 1], 1), (&[0, 2, 1], 1)])],
        )],
        vec![],
    )
}

// ---------------------------------------------------------------------------
// Floating-point oracle for cell counts.

#[derive(Clone, Copy, Debug)]
struct C(f64, f64);

impl C {
    fn add(self, o: C) -> C {
        C(self.0 + o.0, self.1 + o.1)
    }
    fn sub(self, o: C) -> C {
        C(self.0 - o.0, self.1 - o.1)
    }
    fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn div(self, o: C) -> C {
        let d = o.0 * o.0 + o.1 * o.1;
        C((self.0 * o.0 + self.1 * o.1) / d, (self.1 * o.0 - self.0 * o.1) / d)
    }
    fn abs(self) -> f64 {
        self.0.hypot(self.1)
    }
}

/// Real roots of `sum c[i] t^i` by Durand–Kerner iteration, merged within
/// `tol`. Leading coefficients below `1e-12` are dropped.
pub fn float_real_roots(c: &[f64], tol: f64) -> Vec<f64> {
    let mut c: Vec<f64> = c.to_vec();
    while c.last().is_some_and(|x| x.abs() < 1e-12) {
        c.pop();
    }
    if c.len() <= 1 {
        return vec![];
    }
    let d = c.len() - 1;
    let lc = c[d];
    let monic: Vec<f64> = c.iter().map(|x| x / lc).collect();
    let eval = |z: C| {
        let mut acc = C(0.0, 0.0);
        for &k in monic.iter().rev() {
            acc = acc.mul(z).add(C(k, 0.0));
        }
        acc
    };
    let radius = 1.0 + monic[..d].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut z: Vec<C> = (0..d)
        .map(|k| {
            let a = 0.4 + 2.0 * std::f64::consts::PI * k as f64 / d as f64;
            C(radius * a.cos(), radius * a.sin())
        })
        .collect();
    for _ in 0..5000 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let mut den = C(1.0, 0.0);
            for j in 0..d {
                if i != j {
                    den = den.mul(z[i].sub(z[j]));
                }
            }
            let step = eval(z[i]).div(den);
            if step.0.is_finite() && step.1.is_finite() {
                z[i] = z[i].sub(step);
                moved = moved.max(step.abs());
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    let mut re: Vec<f64> = z.iter().filter(|w| w.1.abs() < tol).map(|w| w.0).collect();
    re.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<f64> = Vec::new();
    for r in re {
        if out.last().is_none_or(|l| r - l > tol) {
            out.push(r);
        }
    }
    out
}

/// Coefficients, in variable `k`, of `p` with the first `k` variables fixed
/// to `point`. `p` must not use variables after `k`.
fn univariate_at(p: &Polynomial, point: &[f64]) -> Vec<f64> {
    let k = point.len();
    let mut c = vec![0.0; p.degree(k) as usize + 1];
    for (e, coef) in p.terms() {
        let mut v = rational::to_f64(coef);
        for (i, x) in point.iter().enumerate() {
            v *= x.powi(e[i] as i32);
        }
        c[e[k] as usize] += v;
    }
    c
}

/// Per-level cell counts of the CAD whose level-`k` sections are the
/// real roots of `levels[k - 1]`, counted by floating-point root finding.
pub fn float_cell_count(levels: &[Vec<Polynomial>]) -> Vec<usize> {
    let mut counts = vec![0; levels.len()];
    count_over(levels, &mut Vec::new(), &mut counts);
    counts
}

fn count_over(levels: &[Vec<Polynomial>], point: &mut Vec<f64>, counts: &mut [usize]) {
    let k = point.len();
    if k == levels.len() {
        return;
    }
    let mut roots: Vec<f64> = Vec::new();
    for p in &levels[k] {
        let q = p.with_nvars(k + 1).unwrap();
        roots.extend(float_real_roots(&univariate_at(&q, point), 1e-6));
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
    let mut samples = Vec::with_capacity(2 * roots.len() + 1);
    match roots.first() {
        None => samples.push(0.0),
        Some(&r) => samples.push(r - 1.0),
    }
    for (i, &r) in roots.iter().enumerate() {
        samples.push(r);
        samples.push(roots.get(i + 1).map_or(r + 1.0, |&s| (r + s) / 2.0));
    }
    counts[k] += samples.len();
    for s in samples {
        point.push(s);
        count_over(levels, point, counts);
        point.pop();
    }
}

// ---------------------------------------------------------------------------
// Raw reduction graphs: every applicable site is an edge, with no
// normalization in between.

pub struct RawEdge {
    pub from: Cad,
    pub site: Index,
    pub to: Cad,
    pub restricted: bool,
    pub full: bool,
}

pub struct RawGraph {
    pub nodes: BTreeMap<String, Cad>,
    /// Every tested site, including refused ones (`to` is then `from`).
    pub edges: Vec<RawEdge>,
    pub sinks: Vec<String>,
}

/// Explores all reduction sequences from `start`. Sites below the top level
/// are taken only when the restricted lift check accepts them; both check
/// modes are recorded.
pub fn raw_graph(start: &Cad, ws: &Workspace, limit: usize) -> RawGraph {
    let mut nodes = BTreeMap::new();
    let mut edges = Vec::new();
    let mut sinks = Vec::new();
    let mut queue = VecDeque::new();
    let k0 = canonical_key(start);
    nodes.insert(k0.clone(), start.clone());
    queue.push_back(k0);
    while let Some(key) = queue.pop_front() {
        let cad = nodes[&key].clone();
        let tree = ws.tree(&cad);
        let mut moved = false;
        for site in tree.enumerate_sites() {
            let a = site.node;
            let (restricted, full, certs) = if a.len() == cad.dimension {
                (true, true, vec![])
            } else {
                let r = lift_check(&cad, &tree, &ws.family, &a, LiftCheckMode::Restricted).unwrap();
                let f = lift_check(&cad, &tree, &ws.family, &a, LiftCheckMode::Full).unwrap();
                let certs = match &r {
                    LiftOutcome::Lifts(c) => c.clone(),
                    _ => vec![],
                };
                (r.lifts(), f.lifts(), certs)
            };
            if !restricted {
                edges.push(RawEdge {
                    from: cad.clone(),
                    site: a,
                    to: cad.clone(),
                    restricted,
                    full,
                });
                continue;
            }
            moved = true;
            let next = apply_reduction(&cad, &a, &certs).unwrap();
            let nk = canonical_key(&next);
            if !nodes.contains_key(&nk) {
                assert!(nodes.len() < limit, "raw graph exceeds {limit} nodes");
                nodes.insert(nk.clone(), next.clone());
                queue.push_back(nk);
            }
            edges.push(RawEdge {
                from: cad.clone(),
                site: a,
                to: next,
                restricted,
                full,
            });
        }
        if !moved {
            sinks.push(key);
        }
    }
    RawGraph { nodes, edges, sinks }
}

pub fn built(p: &Problem) -> (Cad, Workspace) {
    build(p).unwrap()
}

// ---------------------------------------------------------------------------
// Relabelling oracle, written directly from the definitions of the three
// index classes.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    Site,
    Above,
    Fixed,
}

pub fn oracle_class(a: &[u32], i: &[u32]) -> Class {
    let k = a.len();
    if i.len() < k {
        return Class::Fixed;
    }
    if i[..k] == *a {
        Class::Site
    } else if i[..k - 1] == a[..k - 1] && i[k - 1] > a[k - 1] {
        Class::Above
    } else {
        Class::Fixed
    }
}

pub fn oracle_relabel(a: &[u32], i: &[u32]) -> Vec<u32> {
    let k = a.len();
    let mut out = i.to_vec();
    match oracle_class(a, i) {
        Class::Site => out[k - 1] -= 1,
        Class::Above => out[k - 1] -= 2,
        Class::Fixed => {}
    }
    out
}

/// The three-case preimage formula: `{J, J+e, J+2e}` when `J` lies in the
/// site class of `A - e`, `{J + 2e}` when it lies in the site or above class
/// of `A`, and `{J}` otherwise.
pub fn oracle_fibre(a: &[u32], j: &[u32]) -> Vec<Vec<u32>> {
    let k = a.len();
    let mut below = a.to_vec();
    below[k - 1] -= 1;
    let plus = |m: u32| {
        let mut v = j.to_vec();
        v[k - 1] += m;
        v
    };
    if oracle_class(&below, j) == Class::Site {
        vec![j.to_vec(), plus(1), plus(2)]
    } else if oracle_class(a, j) != Class::Fixed {
        vec![plus(2)]
    } else {
        vec![j.to_vec()]
    }
}

/// All preimages of `j` under the implementation's relabelling, found by
/// forward evaluation. Relabelling lowers only entry `|a|`, by at most 2, so
/// the candidates below are exhaustive.
pub fn forward_preimage(a: &Index, j: &Index) -> Vec<Index> {
    let k = a.len();
    let mut out: Vec<Index> = (0..=2i64)
        .filter_map(|m| if j.len() >= k { j.shift(k, m) } else { (m == 0).then(|| j.clone()) })
        .filter(|x| mincad::relabel(a, x) == *j)
        .collect();
    out.sort();
    out.dedup();
    out
}
