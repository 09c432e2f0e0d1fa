use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{KcutError, Result};
use crate::graph::{full_mask, Cut, Weight, MASK_LIMIT};

/// A family of distinct subsets of `{0, .., n-1}` stored as bitmasks, with
/// an optional weight per member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutFamily {
    n: usize,
    members: Vec<u64>,
    weights: Option<Vec<Weight>>,
}

impl CutFamily {
    pub fn new(n: usize, members: Vec<u64>) -> Result<Self> {
        Self::build(n, members, None)
    }

    pub fn with_weights(n: usize, members: Vec<u64>, weights: Vec<Weight>) -> Result<Self> {
        if weights.len() != members.len() {
            return Err(KcutError::InvalidParameter(format!(
                "{} members but {} weights",
                members.len(),
                weights.len()
            )));
        }
        Self::build(n, members, Some(weights))
    }

    fn build(n: usize, members: Vec<u64>, weights: Option<Vec<Weight>>) -> Result<Self> {
        if n > MASK_LIMIT {
            return Err(KcutError::TooLarge {
                what: "set families",
                limit: MASK_LIMIT,
                n,
            });
        }
        let universe = full_mask(n);
        let mut seen = BTreeSet::new();
        for &m in &members {
            if m & !universe != 0 {
                return Err(KcutError::InvalidSubset(format!(
                    "{m:#x} leaves the universe of {n} elements"
                )));
            }
            if !seen.insert(m) {
                return Err(KcutError::InvalidSubset(format!("duplicate member {m:#x}")));
            }
        }
        Ok(CutFamily { n, members, weights })
    }

    pub(crate) fn from_cuts(n: usize, cuts: Vec<Cut>) -> Self {
        let (members, weights) = cuts.into_iter().map(|c| (c.side, c.weight)).unzip();
        CutFamily {
            n,
            members,
            weights: Some(weights),
        }
    }

    pub fn universe_size(&self) -> usize {
        self.n
    }

    pub fn universe(&self) -> u64 {
        full_mask(self.n)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn weights(&self) -> Option<&[Weight]> {
        self.weights.as_deref()
    }

    /// Largest member size.
    pub fn max_size(&self) -> usize {
        self.members.iter().map(|m| m.count_ones() as usize).max().unwrap_or(0)
    }

    /// `{U \ F : F in family}`, weights carried over.
    pub fn complements(&self) -> CutFamily {
        let u = self.universe();
        CutFamily {
            n: self.n,
            members: self.members.iter().map(|m| !m & u).collect(),
            weights: self.weights.clone(),
        }
    }

    /// The family closed under complementation. For a canonical cut family
    /// this lists every vertex set `S` with the given boundary weights.
    pub fn with_complements(&self) -> CutFamily {
        let u = self.universe();
        let mut pairs: Vec<(u64, Weight)> = Vec::with_capacity(2 * self.len());
        let mut seen = BTreeSet::new();
        for (i, &m) in self.members.iter().enumerate() {
            let w = self.weights.as_ref().map_or(0, |ws| ws[i]);
            for s in [m, !m & u] {
                if seen.insert(s) {
                    pairs.push((s, w));
                }
            }
        }
        let (members, weights): (Vec<u64>, Vec<Weight>) = pairs.into_iter().unzip();
        CutFamily {
            n: self.n,
            members,
            weights: self.weights.as_ref().map(|_| weights),
        }
    }

    /// True when the complement of every member is also a member.
    pub fn is_complement_closed(&self) -> bool {
        let set: BTreeSet<u64> = self.members.iter().copied().collect();
        let u = self.universe();
        self.members.iter().all(|m| set.contains(&(!m & u)))
    }

    /// Keeps members satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(u64, Option<Weight>) -> bool) -> CutFamily {
        let mut members = Vec::new();
        let mut weights = Vec::new();
        for (i, &m) in self.members.iter().enumerate() {
            let w = self.weights.as_ref().map(|ws| ws[i]);
            if keep(m, w) {
                members.push(m);
                weights.extend(w);
            }
        }
        CutFamily {
            n: self.n,
            members,
            weights: self.weights.as_ref().map(|_| weights),
        }
    }

    /// One member per line: hex mask, then the weight when present.
    pub fn to_hex_lines(&self) -> String {
        let mut out = String::new();
        for (i, m) in self.members.iter().enumerate() {
            match &self.weights {
                Some(ws) => writeln!(out, "{m:x} {}", ws[i]).unwrap(),
                None => writeln!(out, "{m:x}").unwrap(),
            }
        }
        out
    }

    pub fn from_hex_lines(n: usize, text: &str) -> Result<Self> {
        let mut members = Vec::new();
        let mut weights = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let mask = parts.next().unwrap_or_default();
            let mask = u64::from_str_radix(mask.trim_start_matches("0x"), 16).map_err(|e| {
                KcutError::Parse {
                    line: i + 1,
                    msg: format!("bad mask: {e}"),
                }
            })?;
            members.push(mask);
            if let Some(w) = parts.next() {
                weights.push(w.parse().map_err(|e| KcutError::Parse {
                    line: i + 1,
                    msg: format!("bad weight: {e}"),
                })?);
            }
        }
        if weights.is_empty() {
            CutFamily::new(n, members)
        } else {
            CutFamily::with_weights(n, members, weights)
        }
    }
}

/// Number of nonempty regions in the Venn diagram of `sets` over
/// `{0, .., n-1}`, counting the region outside every set.
pub fn venn_atom_count(sets: &[u64], n: usize) -> usize {
    let universe = full_mask(n.min(MASK_LIMIT));
    if universe == 0 {
        return 0;
    }
    let mut atoms = vec![universe];
    for &s in sets {
        let mut next = Vec::with_capacity(atoms.len() * 2);
        for a in atoms {
            for part in [a & s, a & !s] {
                if part != 0 {
                    next.push(part);
                }
            }
        }
        atoms = next;
    }
    atoms.len()
}

/// `a` cuts `b`: both `a ∩ b` and `b \ a` are nonempty.
pub fn cuts_atoms(a: u64, b: u64) -> bool {
    a & b != 0 && b & !a != 0
}

/// Greedily picks members, each adding at least one Venn atom, until the
/// picked sets have at least `k` atoms. `None` if the family runs out.
pub fn greedy_venn_kcut(family: &CutFamily, k: usize) -> Option<Vec<u64>> {
    let n = family.universe_size();
    let mut picked: Vec<u64> = Vec::new();
    let mut atoms = venn_atom_count(&picked, n);
    while atoms < k {
        let next = family.members().iter().find_map(|&s| {
            picked.push(s);
            let grown = venn_atom_count(&picked, n);
            picked.pop();
            (grown > atoms).then_some((s, grown))
        });
        let (s, grown) = next?;
        picked.push(s);
        atoms = grown;
    }
    Some(picked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn window(start: usize, len: usize, n: usize) -> u64 {
        (0..len).fold(0, |m, i| m | 1 << ((start + i) % n))
    }

    #[test]
    fn atom_examples() {
        assert_eq!(venn_atom_count(&[0b001, 0b010], 3), 3);
        assert_eq!(venn_atom_count(&[], 5), 1);
        assert_eq!(venn_atom_count(&[0b0110], 4), 2);
        let arcs: Vec<u64> = (0..4).map(|j| window(j, 4, 8)).collect();
        assert_eq!(venn_atom_count(&arcs, 8), 8);
    }

    #[test]
    fn cuts_relation() {
        assert!(cuts_atoms(0b011, 0b110));
        assert!(!cuts_atoms(0b111, 0b011));
        assert!(!cuts_atoms(0b001, 0b110));
    }

    #[test]
    fn greedy_examples() {
        let arcs: Vec<u64> = (0..4).map(|j| window(j, 4, 8)).collect();
        let fam = CutFamily::new(8, arcs).unwrap();
        let picked = greedy_venn_kcut(&fam, 8).unwrap();
        assert_eq!(picked.len(), 4);
        assert_eq!(venn_atom_count(&picked, 8), 8);
        let single = CutFamily::new(5, vec![0b00110]).unwrap();
        assert!(greedy_venn_kcut(&single, 3).is_none());
    }

    #[test]
    fn family_validation_and_hex_round_trip() {
        assert!(CutFamily::new(3, vec![0b1000]).is_err());
        assert!(CutFamily::new(3, vec![1, 1]).is_err());
        assert!(CutFamily::new(65, vec![]).is_err());
        let fam = CutFamily::with_weights(6, vec![0b110, 0b1], vec![4, 2]).unwrap();
        let text = fam.to_hex_lines();
        assert_eq!(text, "6 4\n1 2\n");
        assert_eq!(CutFamily::from_hex_lines(6, &text).unwrap(), fam);
    }

    #[test]
    fn complement_closure() {
        let fam = CutFamily::new(4, vec![0b0110, 0b0010]).unwrap();
        assert!(!fam.is_complement_closed());
        let closed = fam.with_complements();
        assert_eq!(closed.len(), 4);
        assert!(closed.is_complement_closed());
        assert_eq!(fam.complements().members(), &[0b1001, 0b1101]);
    }

    proptest! {
        #[test]
        fn atoms_invariant_under_order_and_relabeling(
            sets in proptest::collection::vec(0u64..(1 << 10), 0..6),
            seed in any::<u64>(),
        ) {
            let n = 10;
            let base = venn_atom_count(&sets, n);
            prop_assert!(base <= n.min(1 << sets.len()));
            let mut rev = sets.clone();
            rev.reverse();
            prop_assert_eq!(venn_atom_count(&rev, n), base);
            // A rotation of the universe is a relabeling.
            let shift = (seed % n as u64) as u32;
            let rotated: Vec<u64> = sets
                .iter()
                .map(|&s| ((s << shift) | (s >> (n as u32 - shift))) & full_mask(n))
                .collect();
            prop_assert_eq!(venn_atom_count(&rotated, n), base);
        }

        #[test]
        fn many_proper_sets_reach_k_atoms(
            k in 2usize..=4,
            raw in proptest::collection::btree_set(1u64..((1 << 10) - 1), 0..40),
        ) {
            let members: Vec<u64> = raw.into_iter().collect();
            prop_assume!(members.len() > 1 << (k - 1));
            let fam = CutFamily::new(10, members).unwrap();
            let picked = greedy_venn_kcut(&fam, k).expect("more than 2^(k-1) sets");
            prop_assert!(picked.len() < k);
            prop_assert!(venn_atom_count(&picked, 10) >= k);
        }
    }
}
