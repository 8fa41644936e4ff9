//! Driving reductions: last-level normalization, greedy minimization and
//! exhaustive exploration of the reduction graph.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

use crate::continuity::{lift_check, ContinuityCertificate, LiftCheckMode, LiftOutcome};
use crate::curtain::curtain_locus;
use crate::index::Index;
use crate::labels::{atom_bits, label_tree, LabelTree, ReductionSite};
use crate::lift::lift_cad;
use crate::model::{Cad, Family};
use crate::problem::Problem;
use crate::projection::build_projection_basis;
use crate::reduce::apply_reduction;
use crate::serialize::canonical_key;
use crate::Error;

/// One applied reduction. Cell counts are those of the top level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceStep {
    pub site: Index,
    pub level: usize,
    pub cells_before: usize,
    pub cells_after: usize,
    pub level_counts_before: Vec<usize>,
    pub level_counts_after: Vec<usize>,
}

/// A CAD together with the atom membership bits of its family, from which
/// labels are recomputed after every reduction.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub family: Family,
    pub bits: BTreeMap<Index, Vec<bool>>,
}

impl Workspace {
    pub fn tree(&self, cad: &Cad) -> LabelTree {
        label_tree(cad, &self.bits)
    }
}

/// Builds the initial CAD of a problem.
pub fn build(problem: &Problem) -> Result<(Cad, Workspace), Error> {
    if !problem.options.assume_closed_curtained {
        // Algebraic sets are closed and curtained; computing the loci checks
        // that every set is well formed.
        for s in &problem.family.sets {
            curtain_locus(s, problem.dimension)?;
        }
    }
    let basis = build_projection_basis(&problem.family, &problem.options.extra_polynomials)?;
    let cad = lift_cad(&basis)?;
    let bits = atom_bits(&cad.atoms, &problem.family);
    Ok((
        cad,
        Workspace {
            family: problem.family.clone(),
            bits,
        },
    ))
}

fn step(before: &Cad, after: &Cad, site: &Index) -> TraceStep {
    TraceStep {
        site: site.clone(),
        level: site.len(),
        cells_before: before.top_count(),
        cells_after: after.top_count(),
        level_counts_before: before.level_counts(),
        level_counts_after: after.level_counts(),
    }
}

/// Applies top-level reductions, which always lift, until none applies.
pub fn normalize_last_level(
    cad: &Cad,
    ws: &Workspace,
) -> Result<(Cad, LabelTree, Vec<TraceStep>), Error> {
    let n = cad.dimension;
    let mut cur = cad.clone();
    let mut tree = ws.tree(&cur);
    let mut trace = Vec::new();
    while let Some(site) = tree.enumerate_sites().into_iter().find(|s| s.level == n) {
        let next = apply_reduction(&cur, &site.node, &[])?;
        trace.push(step(&cur, &next, &site.node));
        cur = next;
        tree = ws.tree(&cur);
    }
    Ok((cur, tree, trace))
}

/// Sites below the top level whose labels agree.
pub fn candidate_sites(cad: &Cad, tree: &LabelTree) -> Vec<ReductionSite> {
    tree.enumerate_sites()
        .into_iter()
        .filter(|s| s.level < cad.dimension)
        .collect()
}

/// Applies a lifting reduction and normalizes the top level.
pub fn reduce_and_normalize(
    cad: &Cad,
    ws: &Workspace,
    site: &Index,
    certificates: &[ContinuityCertificate],
) -> Result<(Cad, LabelTree, Vec<TraceStep>), Error> {
    let reduced = apply_reduction(cad, site, certificates)?;
    let mut trace = vec![step(cad, &reduced, site)];
    let (out, tree, more) = normalize_last_level(&reduced, ws)?;
    trace.extend(more);
    Ok((out, tree, trace))
}

#[derive(Clone, Debug)]
pub struct GreedyResult {
    pub initial: Cad,
    pub cad: Cad,
    pub tree: LabelTree,
    pub trace: Vec<TraceStep>,
    /// Sites refused because a boundary point lies in a curtain.
    pub obstructions: Vec<ContinuityCertificate>,
}

/// Normalizes and then repeatedly applies the first lifting site in
/// (level, index) order.
pub fn greedy(cad: &Cad, ws: &Workspace) -> Result<GreedyResult, Error> {
    let (mut cur, mut tree, mut trace) = normalize_last_level(cad, ws)?;
    let mut obstructions = Vec::new();
    'outer: loop {
        for site in candidate_sites(&cur, &tree) {
            match lift_check(&cur, &tree, &ws.family, &site.node, LiftCheckMode::Restricted)? {
                LiftOutcome::Lifts(certs) => {
                    let (next, next_tree, steps) = reduce_and_normalize(&cur, ws, &site.node, &certs)?;
                    trace.extend(steps);
                    cur = next;
                    tree = next_tree;
                    continue 'outer;
                }
                LiftOutcome::Fails(_) => {}
                LiftOutcome::Obstructed(cert) => {
                    if !obstructions.contains(&cert) {
                        obstructions.push(cert);
                    }
                }
            }
        }
        break;
    }
    Ok(GreedyResult {
        initial: cad.clone(),
        cad: cur,
        tree,
        trace,
        obstructions,
    })
}

pub fn run_greedy(problem: &Problem) -> Result<GreedyResult, Error> {
    let (cad, ws) = build(problem)?;
    greedy(&cad, &ws)
}

#[derive(Clone, Debug)]
pub struct GraphNode {
    pub cad: Cad,
    pub tree: LabelTree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub from: String,
    pub site: Index,
    pub to: String,
}

/// The closure of lifting reductions from the normalized initial CAD, with
/// nodes keyed by canonical CAD digests.
#[derive(Clone, Debug)]
pub struct ReductionGraph {
    pub root: String,
    pub nodes: BTreeMap<String, GraphNode>,
    pub edges: Vec<GraphEdge>,
    pub normal_forms: BTreeSet<String>,
    /// The node budget ran out before the closure was complete.
    pub incomplete: bool,
    pub obstructions: Vec<(String, ContinuityCertificate)>,
}

impl ReductionGraph {
    pub fn unique_normal_form(&self) -> Option<&GraphNode> {
        if self.normal_forms.len() == 1 && !self.incomplete {
            self.normal_forms.iter().next().map(|k| &self.nodes[k])
        } else {
            None
        }
    }
}

type Expansion = Result<(Vec<(Index, Cad, LabelTree)>, Vec<ContinuityCertificate>), Error>;

enum SiteResult {
    Child(Index, Cad, LabelTree),
    Refused,
    Obstructed(ContinuityCertificate),
}

fn expand(node: &GraphNode, ws: &Workspace) -> Expansion {
    let sites = candidate_sites(&node.cad, &node.tree);
    let results: Vec<Result<SiteResult, Error>> = sites
        .par_iter()
        .map(|s| {
            let outcome =
                lift_check(&node.cad, &node.tree, &ws.family, &s.node, LiftCheckMode::Restricted)?;
            Ok(match outcome {
                LiftOutcome::Lifts(certs) => {
                    let (c, t, _) = reduce_and_normalize(&node.cad, ws, &s.node, &certs)?;
                    SiteResult::Child(s.node.clone(), c, t)
                }
                LiftOutcome::Fails(_) => SiteResult::Refused,
                LiftOutcome::Obstructed(cert) => SiteResult::Obstructed(cert),
            })
        })
        .collect();
    let mut children = Vec::new();
    let mut obstructions = Vec::new();
    for r in results {
        match r? {
            SiteResult::Child(i, c, t) => children.push((i, c, t)),
            SiteResult::Refused => {}
            SiteResult::Obstructed(cert) => obstructions.push(cert),
        }
    }
    Ok((children, obstructions))
}

/// Breadth-first closure under lifting reductions, each followed by
/// last-level normalization. Stops adding nodes once `budget_nodes` are
/// known and flags the graph incomplete.
pub fn explore(cad: &Cad, ws: &Workspace, budget_nodes: usize) -> Result<ReductionGraph, Error> {
    let (start, tree, _) = normalize_last_level(cad, ws)?;
    let root = canonical_key(&start);
    let mut nodes = BTreeMap::new();
    nodes.insert(root.clone(), GraphNode { cad: start, tree });
    let mut edges = Vec::new();
    let mut normal_forms = BTreeSet::new();
    let mut obstructions = Vec::new();
    let mut incomplete = false;
    let mut frontier = vec![root.clone()];
    while !frontier.is_empty() {
        let expansions: Vec<Expansion> = frontier
            .par_iter()
            .map(|k| expand(&nodes[k], ws))
            .collect();
        let mut next = Vec::new();
        for (key, exp) in frontier.iter().zip(expansions) {
            let (children, obs) = exp?;
            obstructions.extend(obs.into_iter().map(|c| (key.clone(), c)));
            if children.is_empty() {
                normal_forms.insert(key.clone());
            }
            for (site, c, t) in children {
                let ck = canonical_key(&c);
                if !nodes.contains_key(&ck) {
                    if nodes.len() >= budget_nodes {
                        incomplete = true;
                        continue;
                    }
                    nodes.insert(ck.clone(), GraphNode { cad: c, tree: t });
                    next.push(ck.clone());
                }
                edges.push(GraphEdge {
                    from: key.clone(),
                    site,
                    to: ck,
                });
            }
        }
        next.sort();
        next.dedup();
        frontier = next;
    }
    Ok(ReductionGraph {
        root,
        nodes,
        edges,
        normal_forms,
        incomplete,
        obstructions,
    })
}

pub fn run_exhaustive(problem: &Problem) -> Result<ReductionGraph, Error> {
    let (cad, ws) = build(problem)?;
    explore(&cad, &ws, problem.options.budget_nodes)
}
