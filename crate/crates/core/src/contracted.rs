//! A graph under contraction: supervertices over the original vertex set
//! and the merged weights between them.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::dsu::UnionFind;
use crate::error::{KcutError, Result};
use crate::graph::{KPartition, LamBar, Weight, WeightedGraph};
use crate::ratio::Ratio;

#[derive(Debug, Clone)]
pub struct ContractedState<'g> {
    graph: &'g WeightedGraph,
    uf: UnionFind,
    /// Indexed by root; non-roots hold empty maps.
    adj: Vec<BTreeMap<usize, Weight>>,
    degree: Vec<Weight>,
    total: Weight,
    contractions: usize,
}

/// Counts of supervertices by weighted degree relative to `λ̄_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    /// Supervertex count.
    pub r: usize,
    /// Degree in `[λ̄_k, γ λ̄_k)`.
    pub s: usize,
    /// Degree below `λ̄_k`.
    pub tiny: usize,
}

impl<'g> ContractedState<'g> {
    pub fn new(graph: &'g WeightedGraph) -> Self {
        let n = graph.n();
        let mut adj = vec![BTreeMap::new(); n];
        let mut degree = vec![0; n];
        for e in graph.edges() {
            adj[e.u].insert(e.v, e.w);
            adj[e.v].insert(e.u, e.w);
            degree[e.u] += e.w;
            degree[e.v] += e.w;
        }
        ContractedState {
            graph,
            uf: UnionFind::new(n),
            adj,
            degree,
            total: graph.total_weight(),
            contractions: 0,
        }
    }

    pub fn graph(&self) -> &'g WeightedGraph {
        self.graph
    }

    /// Current number of supervertices.
    pub fn r(&self) -> usize {
        self.uf.sets()
    }

    /// Total weight of the remaining super-edges.
    pub fn total_weight(&self) -> Weight {
        self.total
    }

    pub fn contractions(&self) -> usize {
        self.contractions
    }

    /// Supervertex (root) containing original vertex `v`.
    pub fn root_of(&self, v: usize) -> usize {
        self.uf.root(v)
    }

    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.graph.n()).filter(|&v| self.uf.is_root(v))
    }

    /// Weighted degree of the supervertex containing `v`.
    pub fn degree(&self, v: usize) -> Weight {
        self.degree[self.uf.root(v)]
    }

    /// Merged weight between the supervertices containing `a` and `b`.
    pub fn super_weight(&self, a: usize, b: usize) -> Weight {
        let (ra, rb) = (self.uf.root(a), self.uf.root(b));
        self.adj[ra].get(&rb).copied().unwrap_or(0)
    }

    /// Every super-edge `(a, b, w)` with `a < b` as roots, in ascending order.
    pub fn super_edges(&self) -> impl Iterator<Item = (usize, usize, Weight)> + '_ {
        self.roots().flat_map(move |a| {
            self.adj[a]
                .range(a + 1..)
                .map(move |(&b, &w)| (a, b, w))
        })
    }

    /// Contracts the super-edge between the supervertices holding `a` and
    /// `b`. Returns the weight that disappeared as a self-loop.
    pub fn contract_edge(&mut self, a: usize, b: usize) -> Result<Weight> {
        let n = self.graph.n();
        if a >= n || b >= n {
            return Err(KcutError::InvalidContraction(format!(
                "vertex out of range: ({a}, {b})"
            )));
        }
        let (ra, rb) = (self.uf.find(a), self.uf.find(b));
        if ra == rb {
            return Err(KcutError::InvalidContraction(format!(
                "{a} and {b} are already the same supervertex"
            )));
        }
        if !self.adj[ra].contains_key(&rb) {
            return Err(KcutError::InvalidContraction(format!(
                "supervertices of {a} and {b} are not adjacent"
            )));
        }
        Ok(self.merge_roots(ra, rb))
    }

    /// Contracts `(ra, rb)` where both are distinct roots; adjacency is not
    /// required (used when merging edgeless components).
    fn merge_roots(&mut self, ra: usize, rb: usize) -> Weight {
        let (keep, gone) = self.uf.union(ra, rb).expect("distinct roots");
        let moved = std::mem::take(&mut self.adj[gone]);
        let lost = self.adj[keep].remove(&gone).unwrap_or(0);
        for (x, w) in moved {
            if x == keep {
                continue;
            }
            self.adj[x].remove(&gone);
            *self.adj[x].entry(keep).or_insert(0) += w;
            *self.adj[keep].entry(x).or_insert(0) += w;
        }
        self.degree[keep] = self.degree[keep] + self.degree[gone] - 2 * lost;
        self.degree[gone] = 0;
        self.total -= lost;
        self.contractions += 1;
        lost
    }

    /// Joins supervertices with no edges between them until `target` remain.
    /// Only valid once every super-edge is gone.
    pub(crate) fn merge_isolated_down_to(&mut self, target: usize) {
        debug_assert_eq!(self.total, 0);
        while self.r() > target {
            let pair: Vec<usize> = self.roots().take(2).collect();
            self.merge_roots(pair[0], pair[1]);
        }
    }

    /// Draws a super-edge with probability proportional to its weight by
    /// scanning the prefix sums of the current super-edges.
    pub fn sample_super_edge<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<(usize, usize)> {
        if self.total == 0 {
            return None;
        }
        let mut ticket = rng.gen_range(0..self.total);
        for (a, b, w) in self.super_edges() {
            if ticket < w {
                return Some((a, b));
            }
            ticket -= w;
        }
        unreachable!("ticket below total weight")
    }

    pub fn current_partition(&self) -> KPartition {
        let labels: Vec<usize> = (0..self.graph.n()).map(|v| self.uf.root(v)).collect();
        KPartition::from_labels(self.graph, &labels)
    }

    pub fn degree_profile(&self, lam_bar: LamBar, gamma: Ratio) -> Result<DegreeProfile> {
        check_gamma(gamma)?;
        let low = lam_bar.ratio();
        let high = lam_bar.scaled(gamma);
        let mut profile = DegreeProfile { r: 0, s: 0, tiny: 0 };
        for v in self.roots() {
            let d = self.degree[v];
            profile.r += 1;
            if low.exceeds(d) {
                profile.tiny += 1;
            } else if high.exceeds(d) {
                profile.s += 1;
            }
        }
        Ok(profile)
    }
}

pub(crate) fn check_gamma(gamma: Ratio) -> Result<()> {
    if gamma < Ratio::integer(1) || gamma >= Ratio::integer(2) {
        return Err(KcutError::InvalidParameter(format!(
            "gamma must lie in [1, 2), got {gamma}"
        )));
    }
    Ok(())
}
