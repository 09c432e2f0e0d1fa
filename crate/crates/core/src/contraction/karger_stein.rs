use rand::Rng;
use serde::Serialize;

use crate::contracted::ContractedState;
use crate::error::{KcutError, Result};
use crate::graph::{KPartition, Weight, WeightedGraph};

/// How the next edge to contract is drawn.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub enum EdgeSampler {
    /// Prefix sums over the current super-edges, rebuilt every step.
    #[default]
    PrefixScan,
    /// Fenwick tree over the super-edges present when contraction starts;
    /// entries that became self-loops are zeroed when drawn and redrawn.
    Fenwick,
}

/// Contracts weight-proportional random edges until `target` supervertices
/// remain. If the remaining super-edges run out first, the edgeless
/// supervertices are joined arbitrarily, which changes no cut weight.
pub fn contract_to<R: Rng + ?Sized>(
    state: &mut ContractedState<'_>,
    target: usize,
    sampler: EdgeSampler,
    rng: &mut R,
) {
    let target = target.max(1);
    match sampler {
        EdgeSampler::PrefixScan => {
            while state.r() > target {
                match state.sample_super_edge(rng) {
                    Some((a, b)) => {
                        state.contract_edge(a, b).expect("sampled super-edge is contractible");
                    }
                    None => break,
                }
            }
        }
        EdgeSampler::Fenwick => {
            let edges: Vec<(usize, usize, Weight)> = state.super_edges().collect();
            let mut tree = Fenwick::new(edges.iter().map(|e| e.2));
            while state.r() > target && tree.total() > 0 {
                let i = tree.sample(rng);
                let (a, b, w) = edges[i];
                tree.sub(i, w);
                if state.root_of(a) != state.root_of(b) {
                    state.contract_edge(a, b).expect("live super-edge is contractible");
                }
            }
        }
    }
    if state.r() > target {
        state.merge_isolated_down_to(target);
    }
}

struct Fenwick {
    tree: Vec<Weight>,
    total: Weight,
}

impl Fenwick {
    fn new(weights: impl Iterator<Item = Weight>) -> Self {
        let w: Vec<Weight> = weights.collect();
        let mut tree = vec![0; w.len() + 1];
        for (i, &x) in w.iter().enumerate() {
            let mut j = i + 1;
            while j < tree.len() {
                tree[j] += x;
                j += j & j.wrapping_neg();
            }
        }
        Fenwick {
            tree,
            total: w.iter().sum(),
        }
    }

    fn total(&self) -> Weight {
        self.total
    }

    fn sub(&mut self, i: usize, x: Weight) {
        self.total -= x;
        let mut j = i + 1;
        while j < self.tree.len() {
            self.tree[j] -= x;
            j += j & j.wrapping_neg();
        }
    }

    /// Index `i` with probability `w_i / total`.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let mut ticket = rng.gen_range(0..self.total);
        let mut pos = 0;
        let mut step = (self.tree.len() - 1).next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] <= ticket {
                ticket -= self.tree[next];
                pos = next;
            }
            step >>= 1;
        }
        pos
    }
}

fn check_k(g: &WeightedGraph, k: usize) -> Result<()> {
    if k < 2 {
        return Err(KcutError::InvalidParameter(format!("k must be at least 2, got {k}")));
    }
    if g.n() < k {
        return Err(KcutError::TooFewVertices { n: g.n(), k });
    }
    Ok(())
}

/// One run of sequential random contraction down to `k` supervertices.
pub fn random_contraction<R: Rng + ?Sized>(
    g: &WeightedGraph,
    k: usize,
    sampler: EdgeSampler,
    rng: &mut R,
) -> Result<KPartition> {
    check_k(g, k)?;
    let mut state = ContractedState::new(g);
    contract_to(&mut state, k, sampler, rng);
    Ok(state.current_partition())
}

/// Supervertex count after one recursion level: `r` divided by
/// `2^(1/(2k-2))`, rounded up, but always at least one step and never
/// below `k`.
pub fn shrink_target(r: usize, k: usize) -> usize {
    let factor = 2f64.powf(1.0 / (2 * k - 2) as f64);
    let shrunk = (r as f64 / factor).ceil() as usize;
    shrunk.min(r.saturating_sub(1)).max(k)
}

/// Recursive contraction: shrink by `2^(1/(2k-2))`, branch twice, keep the
/// lighter result.
pub fn recursive_karger_stein<R: Rng + ?Sized>(
    g: &WeightedGraph,
    k: usize,
    sampler: EdgeSampler,
    rng: &mut R,
) -> Result<KPartition> {
    check_k(g, k)?;
    Ok(recurse(ContractedState::new(g), k, sampler, rng))
}

fn recurse<R: Rng + ?Sized>(
    state: ContractedState<'_>,
    k: usize,
    sampler: EdgeSampler,
    rng: &mut R,
) -> KPartition {
    if state.r() <= k {
        return state.current_partition();
    }
    let target = shrink_target(state.r(), k);
    let mut best: Option<KPartition> = None;
    for _ in 0..2 {
        let mut branch = state.clone();
        contract_to(&mut branch, target, sampler, rng);
        let found = recurse(branch, k, sampler, rng);
        if best.as_ref().is_none_or(|b| found.weight() < b.weight()) {
            best = Some(found);
        }
    }
    best.expect("two branches ran")
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SolveOptions {
    /// Multiplier `c` in `R = ceil(c * ln(1/failure_prob) * ln n)`.
    pub repetition_constant: f64,
    pub sampler: EdgeSampler,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            repetition_constant: 3.0,
            sampler: EdgeSampler::PrefixScan,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub partition: KPartition,
    pub repetitions: usize,
    /// 1-based repetition that first produced the returned weight; 0 when
    /// no contraction was needed.
    pub first_hit: usize,
}

impl SolveOptions {
    pub fn repetitions(&self, n: usize, failure_prob: f64) -> usize {
        let r = self.repetition_constant * (1.0 / failure_prob).ln() * (n as f64).ln();
        (r.ceil() as usize).max(1)
    }
}

/// Repeats [`recursive_karger_stein`] and returns the lightest k-cut seen.
pub fn solve_min_kcut<R: Rng + ?Sized>(
    g: &WeightedGraph,
    k: usize,
    failure_prob: f64,
    opts: SolveOptions,
    rng: &mut R,
) -> Result<SolveReport> {
    check_k(g, k)?;
    if !(failure_prob > 0.0 && failure_prob < 1.0) {
        return Err(KcutError::InvalidParameter(format!(
            "failure probability must lie in (0, 1), got {failure_prob}"
        )));
    }
    if !(opts.repetition_constant > 0.0 && opts.repetition_constant.is_finite()) {
        return Err(KcutError::InvalidParameter(format!(
            "repetition constant must be positive, got {}",
            opts.repetition_constant
        )));
    }
    if g.n() == k {
        return Ok(SolveReport {
            partition: ContractedState::new(g).current_partition(),
            repetitions: 0,
            first_hit: 0,
        });
    }
    let repetitions = opts.repetitions(g.n(), failure_prob);
    let mut best: Option<KPartition> = None;
    let mut first_hit = 0;
    for i in 1..=repetitions {
        let found = recursive_karger_stein(g, k, opts.sampler, rng)?;
        if best.as_ref().is_none_or(|b| found.weight() < b.weight()) {
            best = Some(found);
            first_hit = i;
        }
    }
    Ok(SolveReport {
        partition: best.expect("at least one repetition"),
        repetitions,
        first_hit,
    })
}
