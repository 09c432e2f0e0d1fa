//! Exact ground truth by exhaustive search: minimum k-cuts, cut
//! enumeration below a threshold, and a max-flow global minimum cut used
//! to cross-check the `k = 2` case.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{KcutError, Result};
use crate::graph::{Cut, KPartition, Weight, WeightedGraph};
use crate::ratio::Ratio;
use crate::setfamily::CutFamily;

/// Largest `n` accepted by [`brute_min_kcut`].
pub const KCUT_ORACLE_LIMIT: usize = 20;
/// Largest `n` accepted by [`enumerate_cuts_below`].
pub const CUT_ENUM_LIMIT: usize = 24;

#[derive(Debug, Clone, Serialize)]
pub struct MinKCut {
    pub lambda_k: Weight,
    /// Number of k-partitions attaining `lambda_k`.
    pub count: u64,
    /// Minimizer whose restricted-growth string is lexicographically least.
    pub witness: KPartition,
}

/// Minimum k-cut by enumerating set partitions into exactly `k` blocks as
/// restricted-growth strings, pruning branches whose committed crossing
/// weight plus a per-vertex lower bound already exceeds the best value.
pub fn brute_min_kcut(g: &WeightedGraph, k: usize) -> Result<MinKCut> {
    let n = g.n();
    if k < 2 {
        return Err(KcutError::InvalidParameter(format!("k must be at least 2, got {k}")));
    }
    if n < k {
        return Err(KcutError::TooFewVertices { n, k });
    }
    if n > KCUT_ORACLE_LIMIT {
        return Err(KcutError::TooLarge {
            what: "brute_min_kcut",
            limit: KCUT_ORACLE_LIMIT,
            n,
        });
    }
    let mut search = PartitionSearch {
        g,
        k,
        labels: vec![0; n],
        // acc[v * k + b]: weight from v to assigned vertices in block b.
        acc: vec![0; n * k],
        acc_total: vec![0; n],
        best: Weight::MAX,
        count: 0,
        witness: Vec::new(),
    };
    search.descend(0, 0, 0);
    let witness = KPartition::from_labels(g, &search.witness);
    debug_assert_eq!(witness.weight(), search.best);
    Ok(MinKCut {
        lambda_k: search.best,
        count: search.count,
        witness,
    })
}

struct PartitionSearch<'a> {
    g: &'a WeightedGraph,
    k: usize,
    labels: Vec<usize>,
    acc: Vec<Weight>,
    acc_total: Vec<Weight>,
    best: Weight,
    count: u64,
    witness: Vec<usize>,
}

impl PartitionSearch<'_> {
    fn lower_bound(&self, next: usize, used: usize) -> Weight {
        let k = self.k;
        (next..self.g.n())
            .map(|v| {
                let row = &self.acc[v * k..v * k + used];
                self.acc_total[v] - row.iter().copied().max().unwrap_or(0)
            })
            .sum()
    }

    fn descend(&mut self, v: usize, used: usize, partial: Weight) {
        let n = self.g.n();
        if v == n {
            if used < self.k {
                return;
            }
            if partial < self.best {
                self.best = partial;
                self.count = 0;
                self.witness = self.labels.clone();
            }
            if partial == self.best {
                self.count += 1;
            }
            return;
        }
        // Blocks still to open must fit in the remaining vertices.
        if used + (n - v) < self.k {
            return;
        }
        if partial.saturating_add(self.lower_bound(v, used)) > self.best {
            return;
        }
        let k = self.k;
        let choices = if used < k { used + 1 } else { used };
        for b in 0..choices {
            let added = self.acc_total[v] - self.acc[v * k + b];
            let next_partial = partial + added;
            if next_partial > self.best {
                continue;
            }
            self.labels[v] = b;
            for &(u, w) in self.g.neighbors(v) {
                if u > v {
                    self.acc[u * k + b] += w;
                    self.acc_total[u] += w;
                }
            }
            self.descend(v + 1, used.max(b + 1), next_partial);
            for &(u, w) in self.g.neighbors(v) {
                if u > v {
                    self.acc[u * k + b] -= w;
                    self.acc_total[u] -= w;
                }
            }
        }
    }
}

/// Every canonical cut (side excluding vertex 0) with weight below
/// `threshold`, or at most `threshold` when `inclusive`. Sorted by weight,
/// then by side mask.
pub fn enumerate_cuts_below(g: &WeightedGraph, threshold: Ratio, inclusive: bool) -> Result<CutFamily> {
    let n = g.n();
    if n > CUT_ENUM_LIMIT {
        return Err(KcutError::TooLarge {
            what: "enumerate_cuts_below",
            limit: CUT_ENUM_LIMIT,
            n,
        });
    }
    let keep = |w: Weight| if inclusive { threshold.covers(w) } else { threshold.exceeds(w) };
    let mut cuts: Vec<Cut> = Vec::new();
    if n >= 2 {
        // Gray-code walk over subsets of {1, .., n-1}; each step moves one
        // vertex across and updates the weight by its incident edges.
        let mut side: u64 = 0;
        let mut weight: i128 = 0;
        for i in 1u64..(1u64 << (n - 1)) {
            let v = i.trailing_zeros() as usize + 1;
            let entering = side >> v & 1 == 0;
            for &(u, w) in g.neighbors(v) {
                let same_side_before = (side >> u & 1 == 1) == !entering;
                // Edges to vertices on v's old side start crossing.
                if same_side_before {
                    weight += w as i128;
                } else {
                    weight -= w as i128;
                }
            }
            side ^= 1 << v;
            let w = weight as Weight;
            if keep(w) {
                cuts.push(Cut { side, weight: w });
            }
        }
    }
    cuts.sort_by_key(|c| (c.weight, c.side));
    Ok(CutFamily::from_cuts(n, cuts))
}

/// Global minimum cut as the smallest of the `n - 1` maximum flows from
/// vertex 0. Returns 0 for a single vertex.
pub fn global_min_cut_maxflow(g: &WeightedGraph) -> Weight {
    (1..g.n()).map(|t| max_flow(g, 0, t)).min().unwrap_or(0)
}

/// Edmonds–Karp on the undirected capacity matrix.
fn max_flow(g: &WeightedGraph, s: usize, t: usize) -> Weight {
    let n = g.n();
    let mut cap = vec![vec![0 as Weight; n]; n];
    for e in g.edges() {
        cap[e.u][e.v] += e.w;
        cap[e.v][e.u] += e.w;
    }
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; n];
        prev[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            if x == t {
                break;
            }
            for y in 0..n {
                if prev[y] == usize::MAX && cap[x][y] > 0 {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if prev[t] == usize::MAX {
            return flow;
        }
        let mut push = Weight::MAX;
        let mut y = t;
        while y != s {
            push = push.min(cap[prev[y]][y]);
            y = prev[y];
        }
        let mut y = t;
        while y != s {
            let x = prev[y];
            cap[x][y] -= push;
            cap[y][x] += push;
            y = x;
        }
        flow += push;
    }
}
