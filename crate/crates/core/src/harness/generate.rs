use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{KcutError, Result};
use crate::graph::{Weight, WeightedGraph};
use crate::rng::seeded;

/// Instance families. Cycles and cliques carry one weight on every edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    Cycle { n: usize, weight: Weight },
    Clique { n: usize, weight: Weight },
    /// Each pair becomes an edge with probability `p`, weight uniform in
    /// `1..=max_weight`.
    Random { n: usize, p: f64, max_weight: Weight, seed: u64 },
    /// Unit cliques on `left` and `right` vertices joined by one edge of
    /// weight `bridge` between vertices `left - 1` and `left`.
    TwoCliquesBridge { left: usize, right: usize, bridge: Weight },
}

impl Generator {
    pub fn cycle(n: usize) -> Self {
        Generator::Cycle { n, weight: 1 }
    }

    pub fn clique(n: usize) -> Self {
        Generator::Clique { n, weight: 1 }
    }

    /// Short name such as `C8`, `K6`, `G10p0.5w8s7`, `KK4-5b2`.
    pub fn label(&self) -> String {
        match *self {
            Generator::Cycle { n, weight: 1 } => format!("C{n}"),
            Generator::Cycle { n, weight } => format!("C{n}w{weight}"),
            Generator::Clique { n, weight: 1 } => format!("K{n}"),
            Generator::Clique { n, weight } => format!("K{n}w{weight}"),
            Generator::Random { n, p, max_weight, seed } => format!("G{n}p{p}w{max_weight}s{seed}"),
            Generator::TwoCliquesBridge { left, right, bridge } => format!("KK{left}-{right}b{bridge}"),
        }
    }
}

pub fn generate(spec: &Generator) -> Result<WeightedGraph> {
    let bad = |msg: String| Err(KcutError::InvalidParameter(msg));
    match *spec {
        Generator::Cycle { n, weight } => {
            if n < 3 || weight == 0 {
                return bad(format!("cycle needs n >= 3 and weight >= 1, got n = {n}, weight = {weight}"));
            }
            WeightedGraph::new(n, (0..n).map(|i| (i, (i + 1) % n, weight)))
        }
        Generator::Clique { n, weight } => {
            if n < 2 || weight == 0 {
                return bad(format!("clique needs n >= 2 and weight >= 1, got n = {n}, weight = {weight}"));
            }
            WeightedGraph::new(n, pairs(0, n).map(|(u, v)| (u, v, weight)))
        }
        Generator::Random { n, p, max_weight, seed } => {
            if n < 1 || !(0.0..=1.0).contains(&p) || max_weight == 0 {
                return bad(format!(
                    "random graph needs n >= 1, p in [0, 1], max weight >= 1; got {n}, {p}, {max_weight}"
                ));
            }
            let mut rng = seeded(seed);
            let mut edges = Vec::new();
            for (u, v) in pairs(0, n) {
                if rng.gen_bool(p) {
                    edges.push((u, v, rng.gen_range(1..=max_weight)));
                }
            }
            WeightedGraph::new(n, edges)
        }
        Generator::TwoCliquesBridge { left, right, bridge } => {
            if left < 1 || right < 1 || bridge == 0 {
                return bad(format!(
                    "two cliques need nonempty sides and bridge >= 1; got {left}, {right}, {bridge}"
                ));
            }
            let n = left + right;
            let edges = pairs(0, left)
                .chain(pairs(left, n))
                .map(|(u, v)| (u, v, 1))
                .chain(std::iter::once((left - 1, left, bridge)));
            WeightedGraph::new(n, edges)
        }
    }
}

fn pairs(lo: usize, hi: usize) -> impl Iterator<Item = (usize, usize)> {
    (lo..hi).flat_map(move |u| (u + 1..hi).map(move |v| (u, v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::io::write_graph;

    #[test]
    fn cycle_and_clique_shapes() {
        let c = generate(&Generator::cycle(8)).unwrap();
        assert_eq!(c.m(), 8);
        assert!(c.edges().iter().all(|e| e.w == 1));
        assert!((0..8).all(|v| c.degree(v) == 2));
        let k = generate(&Generator::clique(6)).unwrap();
        assert_eq!(k.m(), 15);
        assert!(k.edges().iter().all(|e| e.w == 1));
    }

    #[test]
    fn random_is_deterministic() {
        let spec = Generator::Random { n: 10, p: 0.5, max_weight: 8, seed: 7 };
        let a = write_graph(&generate(&spec).unwrap());
        let b = write_graph(&generate(&spec).unwrap());
        assert_eq!(a, b);
        let g = generate(&spec).unwrap();
        assert!(g.edges().iter().all(|e| (1..=8).contains(&e.w)));
    }

    #[test]
    fn bridge_instance() {
        let g = generate(&Generator::TwoCliquesBridge { left: 4, right: 5, bridge: 2 }).unwrap();
        assert_eq!(g.n(), 9);
        assert_eq!(g.m(), 6 + 10 + 1);
        assert_eq!(g.weight_between(3, 4), 2);
    }

    #[test]
    fn invalid_params() {
        assert!(generate(&Generator::cycle(2)).is_err());
        assert!(generate(&Generator::clique(1)).is_err());
        assert!(generate(&Generator::Random { n: 5, p: 1.5, max_weight: 2, seed: 0 }).is_err());
        assert!(generate(&Generator::TwoCliquesBridge { left: 0, right: 3, bridge: 1 }).is_err());
    }
}
