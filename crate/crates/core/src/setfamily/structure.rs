use num_bigint::BigUint;
use serde::Serialize;

use super::{count_sunflower_cores, greedy_venn_kcut, SearchBudget, Sunflower};
use crate::contracted::check_gamma;
use crate::error::{KcutError, Result};
use crate::graph::{LamBar, Weight, WeightedGraph};
use crate::oracle::{brute_min_kcut, enumerate_cuts_below};
use crate::ratio::Ratio;

/// Erdős–Rado bound `d! (r - 1)^d` on `sf(d, r)`.
pub fn erdos_rado_bound(d: u32, r: u64) -> BigUint {
    assert!(r >= 2, "sunflowers need at least two petals");
    let fact: BigUint = (1..=d as u64).map(BigUint::from).product();
    fact * BigUint::from(r - 1).pow(d)
}

/// `r = ceil(2γ/(2-γ) + 2) = ceil(4/(2-γ))`, the petal parameter of the
/// small-cut sunflower check.
pub fn sunflower_petal_parameter(gamma: Ratio) -> Result<usize> {
    check_gamma(gamma)?;
    let (p, q) = (gamma.numer(), gamma.denom());
    Ok(Ratio::new(4 * q, 2 * q - p).ceil() as usize)
}

#[derive(Debug, Clone, Serialize)]
pub struct StructureReport {
    pub n: usize,
    pub k: usize,
    pub gamma: Ratio,
    pub lambda_k: Weight,
    pub lam_bar: f64,
    /// Canonical cuts (bipartitions) lighter than `λ̄_k`.
    pub tiny_cuts: usize,
    /// Vertex sets `S` with `w(∂S) < λ̄_k`; twice `tiny_cuts`.
    pub tiny_sets: usize,
    /// `2^{k-1}`.
    pub tiny_bound: u64,
    pub tiny_within_bound: bool,
    /// Whether greedy Venn augmentation over the tiny sets reached `k`
    /// atoms, which would be a k-cut lighter than `λ_k`.
    pub tiny_sets_form_kcut: bool,
    pub petal_parameter: usize,
    /// `petal_parameter + k - 2`.
    pub petals: usize,
    /// Vertex sets `S` with `w(∂S) <= γ λ̄_k`.
    pub family_sets: usize,
    pub family_complement_closed: bool,
    /// Distinct nonempty cores admitting a sunflower with `petals` petals;
    /// `None` if the search budget ran out.
    pub sunflower_cores: Option<usize>,
    pub core_witnesses: Vec<Sunflower>,
    /// `2^k`.
    pub core_bound: u64,
    pub cores_within_bound: Option<bool>,
    /// Canonical cuts `<= γ λ̄_k` per vertex.
    pub cuts_per_vertex: f64,
}

impl StructureReport {
    /// Every exact check passed; `None` when the sunflower search was cut
    /// short by its budget.
    pub fn holds(&self) -> Option<bool> {
        let exact = self.tiny_within_bound && !self.tiny_sets_form_kcut && self.family_complement_closed;
        self.cores_within_bound.map(|c| c && exact)
    }
}

/// Enumerates the cuts of `g` around `λ̄_k` (from the exact oracle) and
/// checks the tiny-cut count bound, the absence of a light k-cut built from
/// tiny cuts, and the distinct-core sunflower bound for cuts up to
/// `γ λ̄_k`.
pub fn check_small_cut_structure(
    g: &WeightedGraph,
    k: usize,
    gamma: Ratio,
    budget: SearchBudget,
) -> Result<StructureReport> {
    check_gamma(gamma)?;
    if k >= 64 {
        return Err(KcutError::InvalidParameter(format!("k = {k} is too large")));
    }
    let exact = brute_min_kcut(g, k)?;
    if exact.lambda_k == 0 {
        return Err(KcutError::InvalidGraph(format!(
            "graph already has {k} components; lambda_k = 0"
        )));
    }
    let lam = LamBar::new(exact.lambda_k, k)?;
    let lam_ratio = lam.ratio();
    let family = enumerate_cuts_below(g, lam.scaled(gamma), true)?;
    let tiny = family.filter(|_, w| lam_ratio.exceeds(w.expect("cut weights")));
    let tiny_sets = tiny.with_complements();
    let tiny_bound = 1u64 << (k - 1);

    let petal_parameter = sunflower_petal_parameter(gamma)?;
    let petals = petal_parameter + k - 2;
    let sets = family.with_complements();
    let count = count_sunflower_cores(&sets, petals, usize::MAX, budget);
    let core_bound = 1u64 << k;
    let sunflower_cores = count.complete.then_some(count.cores);

    Ok(StructureReport {
        n: g.n(),
        k,
        gamma,
        lambda_k: exact.lambda_k,
        lam_bar: lam.value(),
        tiny_cuts: tiny.len(),
        tiny_sets: tiny_sets.len(),
        tiny_bound,
        tiny_within_bound: tiny_sets.len() as u64 <= tiny_bound,
        tiny_sets_form_kcut: greedy_venn_kcut(&tiny_sets, k).is_some(),
        petal_parameter,
        petals,
        family_sets: sets.len(),
        family_complement_closed: sets.is_complement_closed(),
        sunflower_cores,
        core_witnesses: count.witnesses,
        core_bound,
        cores_within_bound: sunflower_cores.map(|c| (c as u64) < core_bound),
        cuts_per_vertex: family.len() as f64 / g.n() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn erdos_rado_values() {
        assert_eq!(erdos_rado_bound(0, 5), BigUint::from(1u32));
        assert_eq!(erdos_rado_bound(2, 3), BigUint::from(8u32));
        assert_eq!(erdos_rado_bound(3, 4), BigUint::from(162u32));
        assert_eq!(erdos_rado_bound(30, 3).to_string(), "284813089515958324736640819941867520000000");
    }

    #[test]
    fn petal_parameter_values() {
        let r = |g: f64| sunflower_petal_parameter(Ratio::from_decimal(g).unwrap()).unwrap();
        assert_eq!(r(1.0), 4);
        assert_eq!(r(1.2), 5);
        assert_eq!(r(1.5), 8);
        assert_eq!(r(1.9), 40);
        // 4 / 0.7 = 5.71..
        assert_eq!(r(1.3), 6);
        assert!(sunflower_petal_parameter(Ratio::integer(2)).is_err());
    }

    #[test]
    fn cycle_has_no_small_cuts() {
        let rep = check_small_cut_structure(&cycle(12), 3, Ratio::from_decimal(1.99).unwrap(), SearchBudget::default()).unwrap();
        assert_eq!(rep.lambda_k, 3);
        assert_eq!(rep.tiny_cuts, 0);
        assert!(rep.tiny_within_bound);
        assert_eq!(rep.family_sets, 0);
        assert_eq!(rep.sunflower_cores, Some(0));
        assert_eq!(rep.cuts_per_vertex, 0.0);
        assert_eq!(rep.holds(), Some(true));
    }

    #[test]
    fn clique_family_is_the_singletons() {
        let rep = check_small_cut_structure(&clique(10), 3, Ratio::from_decimal(1.9).unwrap(), SearchBudget::default()).unwrap();
        // λ_3 = 17, λ̄ = 17/3; singletons weigh 9 >= λ̄ and <= 1.9 λ̄.
        assert_eq!(rep.lambda_k, 17);
        assert_eq!(rep.tiny_cuts, 0);
        assert_eq!(rep.family_sets, 20);
        assert!((rep.cuts_per_vertex - 1.0).abs() < 1e-12);
        assert_eq!(rep.holds(), Some(true));
    }

    #[test]
    fn two_cut_has_no_tiny_cuts() {
        let g = WeightedGraph::new(5, [(0, 1, 3), (1, 2, 1), (2, 3, 4), (3, 4, 1), (4, 0, 2)]).unwrap();
        let rep = check_small_cut_structure(&g, 2, Ratio::from_decimal(1.5).unwrap(), SearchBudget::default()).unwrap();
        assert!(rep.tiny_sets <= 2);
        assert_eq!(rep.holds(), Some(true));
    }
}
