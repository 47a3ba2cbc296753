//! Exact search for large non-sunflower SCIDs in small projective spaces.
//!
//! A SCID is a clique of the graph on k-spaces whose edges join k-spaces
//! meeting in exactly one point. The search is a branch-and-bound over
//! cliques with greedy-coloring upper bounds. Every top-level branch keeps
//! its own incumbent, so results and node counts do not depend on the
//! thread schedule.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::bounds::{self, BoundReport};
use crate::error::{Error, Result};
use crate::geom::{self, Subspace};
use crate::gf::{FieldCtx, FieldElement};
use crate::scid::{self, Scid};

pub const GRAPH_LIMIT: u64 = 100_000;

#[derive(Debug, Clone)]
pub struct IntersectionGraph {
    ctx: FieldCtx,
    n: usize,
    k: usize,
    vertices: Vec<Subspace>,
    adjacency: Vec<FixedBitSet>,
    /// Points of each vertex as a bitset over all points of PG(n, q).
    point_sets: Vec<FixedBitSet>,
}

impl IntersectionGraph {
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertices(&self) -> &[Subspace] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(b)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].count_ones(..)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.len()).map(|v| self.degree(v)).sum::<usize>() / 2
    }
}

/// All k-spaces of PG(n, q) in lexicographic order, adjacent when they meet
/// in exactly one point.
pub fn build_intersection_graph(ctx: &FieldCtx, n: usize, k: usize) -> Result<IntersectionGraph> {
    if k > n {
        return Err(Error::KOutOfRange {
            n: n as u64,
            k: k as u64,
        });
    }
    let q = ctx.q() as u64;
    let count = geom::gaussian_binomial(n as u64 + 1, k as u64 + 1, q)?;
    if count > BigUint::from(GRAPH_LIMIT) {
        return Err(Error::TooManySubspaces {
            count: count.to_string(),
            limit: GRAPH_LIMIT,
        });
    }
    let vertices: Vec<Subspace> = geom::enumerate_subspaces(ctx, n, k as isize)?.collect();
    let all_points = geom::point_vectors(ctx, &Subspace::whole(n));
    let index: HashMap<&[FieldElement], usize> = all_points
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_slice(), i))
        .collect();
    let point_sets: Vec<FixedBitSet> = vertices
        .par_iter()
        .map(|s| {
            let mut bits = FixedBitSet::with_capacity(all_points.len());
            for v in geom::point_vectors(ctx, s) {
                bits.insert(index[v.as_slice()]);
            }
            bits
        })
        .collect();
    let adjacency: Vec<FixedBitSet> = (0..vertices.len())
        .into_par_iter()
        .map(|a| {
            let mut row = FixedBitSet::with_capacity(vertices.len());
            for b in 0..vertices.len() {
                if a != b && point_sets[a].intersection(&point_sets[b]).take(2).count() == 1 {
                    row.insert(b);
                }
            }
            row
        })
        .collect();
    Ok(IntersectionGraph {
        ctx: ctx.clone(),
        n,
        k,
        vertices,
        adjacency,
        point_sets,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Stop a branch once it holds a non-sunflower clique of this size.
    pub size_cap: Option<usize>,
    /// Total node budget; branches then run one after another.
    pub node_budget: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub q: u64,
    pub n: usize,
    pub k: usize,
    pub best_size: usize,
    /// Absent when no non-sunflower SCID exists (or none was found).
    pub best_scid: Option<Scid>,
    pub exhaustive: bool,
    pub nodes_explored: u64,
    pub classical_bound: BigUint,
    pub within_bounds: bool,
}

impl SearchResult {
    /// `{"best_size", "exhaustive", "nodes"}`, stored next to the SCID file.
    pub fn sidecar_json(&self) -> serde_json::Value {
        json!({
            "best_size": self.best_size,
            "exhaustive": self.exhaustive,
            "nodes": self.nodes_explored,
        })
    }
}

/// Vertices sorted by degree, largest first, ties by index.
pub fn degree_order(graph: &IntersectionGraph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..graph.len()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(graph.degree(v)), v));
    order
}

pub fn max_nonsunflower_clique(graph: &IntersectionGraph, opts: SearchOptions) -> Result<SearchResult> {
    max_nonsunflower_clique_with_order(graph, &degree_order(graph), opts)
}

/// Graph relabelled by search position.
struct Relabelled {
    adj: Vec<FixedBitSet>,
    pts: Vec<FixedBitSet>,
}

impl Relabelled {
    fn new(graph: &IntersectionGraph, order: &[usize]) -> Self {
        let mut pos = vec![0; order.len()];
        for (p, &v) in order.iter().enumerate() {
            pos[v] = p;
        }
        let adj = order
            .iter()
            .map(|&v| {
                let mut row = FixedBitSet::with_capacity(order.len());
                for u in graph.adjacency[v].ones() {
                    row.insert(pos[u]);
                }
                row
            })
            .collect();
        let pts = order.iter().map(|&v| graph.point_sets[v].clone()).collect();
        Self { adj, pts }
    }

    /// Greedy non-sunflower clique from the first few start vertices.
    fn greedy(&self) -> Option<Vec<usize>> {
        let n = self.adj.len();
        let mut best: Option<Vec<usize>> = None;
        for start in 0..n.min(64) {
            let mut clique = vec![start];
            let mut cand = self.adj[start].clone();
            let mut common = self.pts[start].clone();
            let mut best_here: Option<Vec<usize>> = None;
            while let Some(v) = cand.ones().next() {
                clique.push(v);
                cand.intersect_with(&self.adj[v]);
                common.intersect_with(&self.pts[v]);
                if clique.len() >= 3 && common.is_clear() {
                    best_here = Some(clique.clone());
                }
            }
            if let Some(c) = best_here {
                if best.as_ref().is_none_or(|b| c.len() > b.len()) {
                    best = Some(c);
                }
            }
        }
        best
    }
}

struct Branch<'a> {
    g: &'a Relabelled,
    best: usize,
    found: Option<Vec<usize>>,
    nodes: u64,
    node_limit: Option<u64>,
    size_cap: Option<usize>,
    stopped: bool,
}

impl Branch<'_> {
    /// Greedy coloring of `cand`, as (vertex, color) with colors ascending.
    fn color_sort(&self, cand: &FixedBitSet) -> Vec<(usize, usize)> {
        let mut uncolored = cand.clone();
        let mut out = Vec::with_capacity(cand.count_ones(..));
        let mut color = 0;
        while !uncolored.is_clear() {
            color += 1;
            let mut open = uncolored.clone();
            while let Some(v) = open.ones().next() {
                open.set(v, false);
                open.difference_with(&self.g.adj[v]);
                uncolored.set(v, false);
                out.push((v, color));
            }
        }
        out
    }

    fn expand(&mut self, clique: &mut Vec<usize>, mut cand: FixedBitSet, common: &FixedBitSet) {
        if self.stopped {
            return;
        }
        if self.node_limit.is_some_and(|lim| self.nodes >= lim) {
            self.stopped = true;
            return;
        }
        self.nodes += 1;
        let colored = self.color_sort(&cand);
        for &(v, color) in colored.iter().rev() {
            if clique.len() + color <= self.best || self.stopped {
                return;
            }
            clique.push(v);
            let mut next_common = common.clone();
            next_common.intersect_with(&self.g.pts[v]);
            if clique.len() >= 3 && next_common.is_clear() && clique.len() > self.best {
                self.best = clique.len();
                self.found = Some(clique.clone());
                if self.size_cap.is_some_and(|cap| self.best >= cap) {
                    self.stopped = true;
                }
            }
            let mut next = cand.clone();
            next.intersect_with(&self.g.adj[v]);
            if !next.is_clear() {
                self.expand(clique, next, &next_common);
            }
            clique.pop();
            cand.set(v, false);
        }
    }
}

struct BranchOutcome {
    found: Option<Vec<usize>>,
    nodes: u64,
    stopped: bool,
}

fn run_branch(
    g: &Relabelled,
    root: usize,
    floor: usize,
    node_limit: Option<u64>,
    size_cap: Option<usize>,
) -> BranchOutcome {
    let mut cand = g.adj[root].clone();
    cand.set_range(..root + 1, false);
    let mut b = Branch {
        g,
        best: floor,
        found: None,
        nodes: 0,
        node_limit,
        size_cap,
        stopped: false,
    };
    if node_limit == Some(0) {
        b.stopped = true;
    } else {
        b.nodes += 1;
        if !cand.is_clear() {
            b.expand(&mut vec![root], cand, &g.pts[root]);
        }
    }
    BranchOutcome {
        found: b.found,
        nodes: b.nodes,
        stopped: b.stopped,
    }
}

/// Branch-and-bound with the vertices taken in the given order. The reported
/// SCID is the lexicographically smallest block list among the largest
/// non-sunflower cliques found.
pub fn max_nonsunflower_clique_with_order(
    graph: &IntersectionGraph,
    order: &[usize],
    opts: SearchOptions,
) -> Result<SearchResult> {
    if order.len() != graph.len() {
        return Err(Error::BadParams("order must list every vertex once".into()));
    }
    let q = graph.ctx.q() as u64;
    if graph.k == 0 {
        return Err(Error::BadParams("k must be positive".into()));
    }
    let g = Relabelled::new(graph, order);
    let greedy = g.greedy();
    let floor = greedy.as_ref().map_or(0, Vec::len);

    let mut outcomes = Vec::new();
    let mut out_of_budget = false;
    match opts.node_budget {
        Some(budget) => {
            let mut used = 0u64;
            for root in 0..g.adj.len() {
                if used >= budget {
                    out_of_budget = true;
                    break;
                }
                let out = run_branch(&g, root, floor, Some(budget - used), opts.size_cap);
                used += out.nodes;
                outcomes.push(out);
            }
        }
        None => {
            outcomes = (0..g.adj.len())
                .into_par_iter()
                .map(|root| run_branch(&g, root, floor, None, opts.size_cap))
                .collect();
        }
    }

    let nodes_explored = outcomes.iter().map(|o| o.nodes).sum();
    let exhaustive = !out_of_budget && !outcomes.iter().any(|o| o.stopped);
    let candidates: Vec<Vec<Subspace>> = greedy
        .into_iter()
        .chain(outcomes.into_iter().filter_map(|o| o.found))
        .map(|c| {
            let mut blocks: Vec<Subspace> =
                c.iter().map(|&p| graph.vertices[order[p]].clone()).collect();
            blocks.sort();
            blocks
        })
        .collect();
    let best_size = candidates.iter().map(Vec::len).max().unwrap_or(0);
    let best_blocks = candidates.into_iter().filter(|c| c.len() == best_size).min();

    let best_scid = match best_blocks {
        Some(blocks) => {
            let s = Scid::new(graph.ctx.clone(), graph.n, graph.k, blocks)?.into_verified()?;
            if scid::is_sunflower(&s)?.is_sunflower {
                return Err(Error::Inconsistency("search returned a sunflower".into()));
            }
            if BigUint::from(scid::max_blocks_through_point(&s)) > s.theta_k() {
                return Err(Error::Inconsistency(
                    "a point lies on more than theta_k blocks of a non-sunflower".into(),
                ));
            }
            Some(s)
        }
        None => None,
    };
    let classical_bound = bounds::sunflower_bound_classical(q, graph.k as u32, 0)?;
    Ok(SearchResult {
        q,
        n: graph.n,
        k: graph.k,
        best_size,
        best_scid,
        exhaustive,
        nodes_explored,
        within_bounds: BigUint::from(best_size) <= classical_bound,
        classical_bound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundComparison {
    pub best_size: usize,
    #[serde(serialize_with = "bigint_as_string")]
    pub classical_bound: BigUint,
    /// `classical_bound - best_size`.
    #[serde(serialize_with = "bigint_as_string")]
    pub classical_margin: BigInt,
    /// `F_q theta_k^2`, when `k >= 3` and `q >= 7`.
    pub theorem_bound: Option<f64>,
    pub theorem_margin: Option<f64>,
    pub below_theorem_range: bool,
}

fn bigint_as_string<S: serde::Serializer, T: ToString>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Checks the search result against the bounds. A violation is an error,
/// since the bounds are theorems.
pub fn compare_to_bounds(result: &SearchResult, report: &BoundReport) -> Result<BoundComparison> {
    if report.q != result.q || report.k as usize != result.k || report.t != 0 {
        return Err(Error::MixedParameters(format!(
            "report for (q={}, k={}, t={}), result for (q={}, k={})",
            report.q, report.k, report.t, result.q, result.k
        )));
    }
    let size = BigUint::from(result.best_size);
    if size > report.classical {
        return Err(Error::BoundViolated(format!(
            "{} blocks exceed the classical bound {}",
            result.best_size, report.classical
        )));
    }
    let in_range = result.k >= 3 && result.q >= 7;
    let theorem_bound = match (in_range, report.f_q) {
        (true, Some(f)) => {
            let theta = geom::theta(result.k as i64, result.q).to_f64().unwrap_or(f64::INFINITY);
            Some(f * theta * theta)
        }
        _ => None,
    };
    if let Some(b) = theorem_bound {
        if result.best_size as f64 > b {
            return Err(Error::BoundViolated(format!(
                "{} blocks exceed F_q theta_k^2 = {b}",
                result.best_size
            )));
        }
    }
    Ok(BoundComparison {
        best_size: result.best_size,
        classical_margin: BigInt::from(report.classical.clone()) - BigInt::from(result.best_size),
        classical_bound: report.classical.clone(),
        theorem_bound,
        theorem_margin: theorem_bound.map(|b| b - result.best_size as f64),
        below_theorem_range: !in_range,
    })
}
