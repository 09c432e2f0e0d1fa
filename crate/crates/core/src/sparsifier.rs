//! Forest-peeling sparsification.
//!
//! Round `i` takes a maximal spanning forest of the edges with residual
//! weight and moves one unit of each forest edge into `H`. A weight-`w`
//! edge plays the role of `w` parallel unit edges, so this is the
//! unweighted peeling `F_i ⊆ G \ (F_1 ∪ .. ∪ F_{i-1})` without
//! materializing copies. After `λ` rounds every cut of weight at most `λ`
//! has the same weight in `H` as in `G`.

use rand::Rng;
use serde::Serialize;

use crate::contraction::EdgeClocks;
use crate::contracted::ContractedState;
use crate::dsu::UnionFind;
use crate::error::{KcutError, Result};
use crate::graph::{full_mask, Cut, LamBar, Weight, WeightedGraph};

/// Largest `n` accepted by [`verify_cut_preservation`].
pub const PRESERVATION_LIMIT: usize = 20;

pub fn ni_forest_decomposition(g: &WeightedGraph, lambda: Weight) -> WeightedGraph {
    let edges = g.edges();
    let mut residual: Vec<Weight> = edges.iter().map(|e| e.w).collect();
    let mut kept: Vec<Weight> = vec![0; edges.len()];
    for _ in 0..lambda {
        let mut forest = UnionFind::new(g.n());
        let mut grew = false;
        // Edges are stored in ascending (u, v) order.
        for (i, e) in edges.iter().enumerate() {
            if residual[i] > 0 && forest.union(e.u, e.v).is_some() {
                residual[i] -= 1;
                kept[i] += 1;
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    let h_edges = edges
        .iter()
        .zip(&kept)
        .filter(|(_, &w)| w > 0)
        .map(|(e, &w)| (e.u, e.v, w));
    WeightedGraph::new(g.n(), h_edges).expect("subgraph of a valid graph")
}

#[derive(Debug, Clone, Serialize)]
pub struct Preservation {
    pub preserved: bool,
    /// First cut (in side-mask order) of weight at most `λ` in `G` whose
    /// weight differs in `H`.
    pub witness: Option<Cut>,
    pub h_weight: Option<Weight>,
}

/// Checks every bipartition `S` with `w_G(∂S) <= λ` for `w_H(∂S) = w_G(∂S)`.
pub fn verify_cut_preservation(g: &WeightedGraph, h: &WeightedGraph, lambda: Weight) -> Result<Preservation> {
    let n = g.n();
    if h.n() != n {
        return Err(KcutError::InvalidGraph(format!(
            "vertex counts differ: {} vs {}",
            n,
            h.n()
        )));
    }
    if n > PRESERVATION_LIMIT {
        return Err(KcutError::TooLarge {
            what: "verify_cut_preservation",
            limit: PRESERVATION_LIMIT,
            n,
        });
    }
    let full = full_mask(n);
    // Sides exclude vertex 0, so each bipartition is visited once.
    let mut side: u64 = 2;
    while side != 0 && side <= full {
        let wg = g.crossing_weight(|v| side >> v & 1 == 1);
        if wg <= lambda {
            let wh = h.crossing_weight(|v| side >> v & 1 == 1);
            if wh != wg {
                return Ok(Preservation {
                    preserved: false,
                    witness: Some(Cut { side, weight: wg }),
                    h_weight: Some(wh),
                });
            }
        }
        side += 2;
    }
    Ok(Preservation {
        preserved: true,
        witness: None,
        h_weight: None,
    })
}

/// Supervertex counts for one coupled trial: clocks run on `H` up to time
/// `t`, then the leftover weight `G - H` gets its own clocks up to `t`.
/// Every original edge keeps its survival law `exp(-t w / λ̄_k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComposedTrial {
    pub r_sparse: usize,
    pub r_composed: usize,
}

pub fn composed_clock_trial<R: Rng + ?Sized>(
    g: &WeightedGraph,
    h: &WeightedGraph,
    lam_bar: LamBar,
    t: f64,
    rng: &mut R,
) -> Result<ComposedTrial> {
    if h.n() != g.n() {
        return Err(KcutError::InvalidGraph("H and G differ in vertex count".into()));
    }
    let mut leftover = Vec::new();
    for e in g.edges() {
        let kept = h.weight_between(e.u, e.v);
        if kept > e.w {
            return Err(KcutError::InvalidGraph(format!(
                "H is heavier than G on ({}, {})",
                e.u, e.v
            )));
        }
        if kept < e.w {
            leftover.push((e.u, e.v, e.w - kept));
        }
    }
    // State over G so both phases contract inside one vertex partition.
    let mut state = ContractedState::new(g);
    let sparse = EdgeClocks::draw(h.edges().iter().map(|e| (e.u, e.v, e.w)), lam_bar, rng);
    let rest = EdgeClocks::draw(leftover, lam_bar, rng);
    contract_arrived(&mut state, &sparse, t)?;
    let r_sparse = state.r();
    contract_arrived(&mut state, &rest, t)?;
    Ok(ComposedTrial {
        r_sparse,
        r_composed: state.r(),
    })
}

fn contract_arrived(state: &mut ContractedState<'_>, clocks: &EdgeClocks, t: f64) -> Result<()> {
    for &(x, a, b) in clocks.arrivals() {
        if x > t {
            break;
        }
        if state.root_of(a) != state.root_of(b) {
            state.contract_edge(a, b)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_min_kcut;
    use crate::rng::seeded;

    fn cycle(n: usize) -> WeightedGraph {
        WeightedGraph::new(n, (0..n).map(|i| (i, (i + 1) % n, 1))).unwrap()
    }

    fn clique(n: usize) -> WeightedGraph {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v, 1));
            }
        }
        WeightedGraph::new(n, e).unwrap()
    }

    #[test]
    fn cycle_is_two_forests() {
        for n in 3..10 {
            let g = cycle(n);
            assert_eq!(ni_forest_decomposition(&g, 2), g);
            // One round keeps the path of n - 1 edges.
            assert_eq!(ni_forest_decomposition(&g, 1).total_weight(), n as Weight - 1);
        }
    }

    #[test]
    fn clique_keeps_singleton_cuts() {
        let g = clique(5);
        let h = ni_forest_decomposition(&g, 4);
        assert!(h.total_weight() <= 16);
        for v in 0..5 {
            assert_eq!(crate::graph::cut_weight(&h, &[v]).unwrap(), 4);
        }
        assert!(verify_cut_preservation(&g, &h, 4).unwrap().preserved);
    }

    #[test]
    fn large_lambda_returns_g() {
        let g = WeightedGraph::new(4, [(0, 1, 5), (1, 2, 2), (2, 3, 7), (0, 3, 1), (0, 2, 3)]).unwrap();
        assert_eq!(ni_forest_decomposition(&g, g.total_weight()), g);
    }

    #[test]
    fn h_is_a_weight_subgraph_within_edge_bound() {
        let g = WeightedGraph::new(
            6,
            [(0, 1, 5), (1, 2, 3), (2, 0, 4), (3, 4, 6), (4, 5, 2), (5, 3, 7), (2, 3, 2), (1, 4, 1)],
        )
        .unwrap();
        for lambda in 1..8 {
            let h = ni_forest_decomposition(&g, lambda);
            assert!(h.total_weight() <= lambda * (g.n() as Weight - 1));
            for e in h.edges() {
                assert!(e.w <= g.weight_between(e.u, e.v));
            }
            assert!(verify_cut_preservation(&g, &h, lambda).unwrap().preserved, "lambda = {lambda}");
        }
    }

    #[test]
    fn identical_graphs_are_preserved() {
        let g = clique(6);
        assert!(verify_cut_preservation(&g, &g, 100).unwrap().preserved);
    }

    #[test]
    fn dropped_edge_is_reported() {
        // C6 minus edge (2, 3): the arc {1, 2} cut loses weight.
        let g = cycle(6);
        let h = WeightedGraph::new(6, [(0, 1, 1), (1, 2, 1), (3, 4, 1), (4, 5, 1), (0, 5, 1)]).unwrap();
        let p = verify_cut_preservation(&g, &h, 2).unwrap();
        assert!(!p.preserved);
        let cut = p.witness.unwrap();
        assert_eq!(cut.weight, 2);
        let s = cut.side;
        let crosses = (s >> 2 & 1) != (s >> 3 & 1);
        assert!(crosses);
        assert_eq!(p.h_weight, Some(1));
    }

    #[test]
    fn preservation_limits() {
        assert!(verify_cut_preservation(&cycle(21), &cycle(21), 2).is_err());
        assert!(verify_cut_preservation(&cycle(5), &cycle(6), 2).is_err());
    }

    #[test]
    fn composition_never_adds_vertices() {
        let g = clique(7);
        let lam = brute_min_kcut(&g, 3).unwrap().lambda_k;
        let h = ni_forest_decomposition(&g, lam);
        let lam_bar = LamBar::new(lam, 3).unwrap();
        let mut rng = seeded(4);
        for i in 0..200 {
            let t = 0.05 * (i % 40) as f64;
            let trial = composed_clock_trial(&g, &h, lam_bar, t, &mut rng).unwrap();
            assert!(trial.r_composed <= trial.r_sparse);
        }
    }
}
