//! Simple weighted graphs, cuts and k-partitions.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{KcutError, Result};
use crate::ratio::Ratio;

pub type Weight = u64;

/// Largest vertex count for which a vertex subset fits in a `u64` mask.
pub const MASK_LIMIT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: Weight,
}

/// An immutable simple graph on vertices `0..n` with positive integer edge
/// weights. Parallel edges are merged by summing their weights; edges are
/// stored with `u < v`, sorted by `(u, v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, Weight)>>,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, Weight)>) -> Result<Self> {
        Self::with_merge_count(n, edges).map(|(g, _)| g)
    }

    /// Like [`WeightedGraph::new`], also returning how many input edges were
    /// folded into an earlier edge on the same pair.
    pub fn with_merge_count(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, Weight)>,
    ) -> Result<(Self, usize)> {
        if n == 0 {
            return Err(KcutError::InvalidGraph("graph needs at least one vertex".into()));
        }
        let mut merged: BTreeMap<(usize, usize), Weight> = BTreeMap::new();
        let mut duplicates = 0;
        for (a, b, w) in edges {
            if a >= n || b >= n {
                return Err(KcutError::InvalidGraph(format!(
                    "edge ({a}, {b}) out of range for n = {n}"
                )));
            }
            if a == b {
                return Err(KcutError::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if w == 0 {
                return Err(KcutError::InvalidGraph(format!("edge ({a}, {b}) has zero weight")));
            }
            let key = (a.min(b), a.max(b));
            match merged.get_mut(&key) {
                Some(acc) => {
                    duplicates += 1;
                    *acc = acc.checked_add(w).ok_or_else(|| {
                        KcutError::InvalidGraph(format!("weight overflow on pair {key:?}"))
                    })?;
                }
                None => {
                    merged.insert(key, w);
                }
            }
        }
        let edges: Vec<Edge> = merged
            .into_iter()
            .map(|((u, v), w)| Edge { u, v, w })
            .collect();
        let mut total: Weight = 0;
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            total = total
                .checked_add(e.w)
                .ok_or_else(|| KcutError::InvalidGraph("total weight overflows u64".into()))?;
            adj[e.u].push((e.v, e.w));
            adj[e.v].push((e.u, e.w));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok((WeightedGraph { n, edges, adj }, duplicates))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, Weight)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> Weight {
        self.adj[v].iter().map(|&(_, w)| w).sum()
    }

    pub fn total_weight(&self) -> Weight {
        self.edges.iter().map(|e| e.w).sum()
    }

    /// Weight of the stored edge on `{u, v}`, or 0.
    pub fn weight_between(&self, u: usize, v: usize) -> Weight {
        if u >= self.n || v >= self.n {
            return 0;
        }
        self.adj[u]
            .binary_search_by_key(&v, |&(x, _)| x)
            .map(|i| self.adj[u][i].1)
            .unwrap_or(0)
    }

    /// Weight of all edges with exactly one endpoint satisfying `inside`.
    pub(crate) fn crossing_weight(&self, inside: impl Fn(usize) -> bool) -> Weight {
        self.edges
            .iter()
            .filter(|e| inside(e.u) != inside(e.v))
            .map(|e| e.w)
            .sum()
    }

    pub(crate) fn full_mask(&self) -> u64 {
        full_mask(self.n)
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// `w(∂S)` for `S` given as a list of vertices.
pub fn cut_weight(g: &WeightedGraph, side: &[usize]) -> Result<Weight> {
    let mut inside = vec![false; g.n()];
    for &v in side {
        if v >= g.n() {
            return Err(KcutError::InvalidSubset(format!("vertex {v} out of range")));
        }
        inside[v] = true;
    }
    let size = inside.iter().filter(|&&b| b).count();
    if size == 0 || size == g.n() {
        return Err(KcutError::InvalidSubset(
            "cut side must be a nonempty proper subset".into(),
        ));
    }
    Ok(g.crossing_weight(|v| inside[v]))
}

/// `w(∂S)` for `S` given as a bitmask (requires `n <= 64`).
pub fn cut_weight_mask(g: &WeightedGraph, side: u64) -> Result<Weight> {
    if g.n() > MASK_LIMIT {
        return Err(KcutError::TooLarge {
            what: "bitmask cuts",
            limit: MASK_LIMIT,
            n: g.n(),
        });
    }
    if side == 0 || side & !g.full_mask() != 0 || side == g.full_mask() {
        return Err(KcutError::InvalidSubset(format!(
            "{side:#x} is not a nonempty proper subset of {} vertices",
            g.n()
        )));
    }
    Ok(g.crossing_weight(|v| side >> v & 1 == 1))
}

/// Crossing weight of a k-partition given as explicit blocks.
pub fn kcut_weight(g: &WeightedGraph, blocks: &[Vec<usize>]) -> Result<Weight> {
    let labels = labels_of(g.n(), blocks)?;
    Ok(g.crossing_weight_labels(&labels))
}

impl WeightedGraph {
    pub(crate) fn crossing_weight_labels(&self, labels: &[usize]) -> Weight {
        self.edges
            .iter()
            .filter(|e| labels[e.u] != labels[e.v])
            .map(|e| e.w)
            .sum()
    }
}

fn labels_of(n: usize, blocks: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut labels = vec![usize::MAX; n];
    for (i, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            return Err(KcutError::InvalidPartition(format!("block {i} is empty")));
        }
        for &v in block {
            if v >= n {
                return Err(KcutError::InvalidPartition(format!("vertex {v} out of range")));
            }
            if labels[v] != usize::MAX {
                return Err(KcutError::InvalidPartition(format!(
                    "vertex {v} appears in more than one block"
                )));
            }
            labels[v] = i;
        }
    }
    if let Some(v) = labels.iter().position(|&l| l == usize::MAX) {
        return Err(KcutError::InvalidPartition(format!("vertex {v} is not covered")));
    }
    Ok(labels)
}

/// A bipartition `{S, V \ S}` stored by the side that excludes vertex 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Cut {
    pub side: u64,
    pub weight: Weight,
}

impl Cut {
    /// Canonicalizes `side` (complementing it if it holds vertex 0) and
    /// evaluates its weight.
    pub fn new(g: &WeightedGraph, side: u64) -> Result<Self> {
        let weight = cut_weight_mask(g, side)?;
        let side = if side & 1 == 1 { !side & g.full_mask() } else { side };
        Ok(Cut { side, weight })
    }

    pub fn vertices(&self) -> Vec<usize> {
        (0..64).filter(|&v| self.side >> v & 1 == 1).collect()
    }
}

/// A partition of `V` into nonempty blocks, with its crossing weight.
///
/// Blocks are kept canonical: each block sorted ascending and blocks
/// ordered by their smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct KPartition {
    blocks: Vec<Vec<usize>>,
    weight: Weight,
}

impl KPartition {
    pub fn new(g: &WeightedGraph, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let labels = labels_of(g.n(), &blocks)?;
        Ok(Self::from_labels(g, &labels))
    }

    /// Builds the partition whose blocks are the classes of equal label.
    pub fn from_labels(g: &WeightedGraph, labels: &[usize]) -> Self {
        assert_eq!(labels.len(), g.n(), "one label per vertex");
        let mut index: BTreeMap<usize, usize> = BTreeMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (v, &l) in labels.iter().enumerate() {
            let next = blocks.len();
            let b = *index.entry(l).or_insert(next);
            if b == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[b].push(v);
        }
        let weight = g.crossing_weight_labels(labels);
        KPartition { blocks, weight }
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    /// Block index of every vertex.
    pub fn labels(&self) -> Vec<usize> {
        let n = self.blocks.iter().map(Vec::len).sum();
        let mut labels = vec![0; n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &v in b {
                labels[v] = i;
            }
        }
        labels
    }

    /// True when every block of `self` lies inside one block of `coarser`.
    pub fn refines(&self, coarser: &KPartition) -> bool {
        let outer = coarser.labels();
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&v| outer[v] == outer[b[0]]))
    }
}

/// `λ̄_k = λ_k / k`, kept exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LamBar {
    pub lambda_k: Weight,
    pub k: usize,
}

impl LamBar {
    pub fn new(lambda_k: Weight, k: usize) -> Result<Self> {
        if lambda_k == 0 || k == 0 {
            return Err(KcutError::InvalidParameter(format!(
                "lambda_bar needs lambda_k > 0 and k > 0, got {lambda_k} and {k}"
            )));
        }
        Ok(LamBar { lambda_k, k })
    }

    pub fn ratio(&self) -> Ratio {
        Ratio::new(self.lambda_k as u128, self.k as u128)
    }

    pub fn value(&self) -> f64 {
        self.lambda_k as f64 / self.k as f64
    }

    /// `multiplier * λ̄_k` as an exact rational.
    pub fn scaled(&self, multiplier: Ratio) -> Ratio {
        self.ratio() * multiplier
    }
}
