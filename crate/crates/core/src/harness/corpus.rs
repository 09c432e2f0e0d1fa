use serde::Serialize;

use super::generate::{generate, Generator};
use crate::error::Result;
use crate::graph::WeightedGraph;

#[derive(Debug, Clone, Serialize)]
pub struct Instance {
    pub name: String,
    pub generator: Generator,
    #[serde(skip)]
    pub graph: WeightedGraph,
}

impl Instance {
    pub fn new(generator: Generator) -> Result<Self> {
        let graph = generate(&generator)?;
        Ok(Instance {
            name: generator.label(),
            generator,
            graph,
        })
    }
}

/// Connected random graphs from consecutive seeds starting at `first_seed`.
pub fn connected_random(count: usize, n: usize, p: f64, max_weight: u64, first_seed: u64) -> Vec<Instance> {
    let mut out = Vec::with_capacity(count);
    let mut seed = first_seed;
    while out.len() < count {
        let inst = Instance::new(Generator::Random { n, p, max_weight, seed }).expect("valid random params");
        if is_connected(&inst.graph) {
            out.push(inst);
        }
        seed += 1;
    }
    out
}

pub fn is_connected(g: &WeightedGraph) -> bool {
    let mut seen = vec![false; g.n()];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &(u, _) in g.neighbors(v) {
            if !seen[u] {
                seen[u] = true;
                count += 1;
                stack.push(u);
            }
        }
    }
    count == g.n()
}

/// Structural corpus: every generator family, `n <= 20`, all connected.
pub fn structural_corpus() -> Vec<Instance> {
    let mut out = Vec::new();
    for n in [5, 8, 12, 16, 20] {
        out.push(Instance::new(Generator::cycle(n)).unwrap());
    }
    for n in [5, 8, 12, 16, 20] {
        out.push(Instance::new(Generator::clique(n)).unwrap());
    }
    for (left, right, bridge) in [(3, 4, 1), (5, 5, 2), (6, 8, 3), (10, 10, 1)] {
        out.push(Instance::new(Generator::TwoCliquesBridge { left, right, bridge }).unwrap());
    }
    for (i, (n, p)) in [(8, 0.5), (10, 0.4), (12, 0.5), (14, 0.3), (16, 0.4), (18, 0.3), (20, 0.25)]
        .into_iter()
        .enumerate()
    {
        out.extend(connected_random(2, n, p, 8, 1000 * (i as u64 + 1)));
    }
    out
}
