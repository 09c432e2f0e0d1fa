//! Exact sunflower search.
//!
//! The core of any sunflower equals the intersection of any two of its
//! sets, so the only candidate cores are pairwise intersections of members
//! (and the empty set). For a fixed core the question becomes whether `r`
//! pairwise disjoint petals exist, answered by an exhaustive set-packing
//! search memoized on (position, used elements, petals chosen).

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::CutFamily;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sunflower {
    pub core: u64,
    pub petals: Vec<u64>,
}

impl Sunflower {
    pub fn members(&self) -> Vec<u64> {
        self.petals.iter().map(|p| p | self.core).collect()
    }

    /// Petals pairwise disjoint and disjoint from the core, so the members
    /// pairwise intersect exactly in the core.
    pub fn is_valid(&self) -> bool {
        let mut seen = self.core;
        let mut empty_petals = 0;
        for &p in &self.petals {
            if p & seen != 0 {
                return false;
            }
            if p == 0 {
                empty_petals += 1;
            }
            seen |= p;
        }
        empty_petals <= 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    /// Packing-search nodes allowed across one top-level call.
    pub max_nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: 5_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SearchOutcome {
    Found(Sunflower),
    Absent,
    /// The node budget ran out before the search could decide.
    Inconclusive,
}

struct Packer {
    nodes: u64,
    max_nodes: u64,
}

#[derive(Debug)]
struct OutOfBudget;

impl Packer {
    fn new(budget: SearchBudget) -> Self {
        Packer {
            nodes: 0,
            max_nodes: budget.max_nodes,
        }
    }

    /// `need` pairwise disjoint entries of `petals` (all nonempty, sorted by
    /// size ascending), if they exist.
    fn pack(&mut self, petals: &[u64], need: usize) -> Result<Option<Vec<u64>>, OutOfBudget> {
        if need == 0 {
            return Ok(Some(Vec::new()));
        }
        let mut chosen = Vec::with_capacity(need);
        let mut failed = HashSet::new();
        if self.descend(petals, need, 0, 0, &mut chosen, &mut failed)? {
            Ok(Some(chosen))
        } else {
            Ok(None)
        }
    }

    fn descend(
        &mut self,
        petals: &[u64],
        need: usize,
        idx: usize,
        used: u64,
        chosen: &mut Vec<u64>,
        failed: &mut HashSet<(usize, u64, usize)>,
    ) -> Result<bool, OutOfBudget> {
        if chosen.len() >= need {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(OutOfBudget);
        }
        if failed.contains(&(idx, used, chosen.len())) {
            return Ok(false);
        }
        let missing = need - chosen.len();
        let rest = &petals[idx..];
        let compatible = rest.iter().filter(|&&p| p & used == 0).count();
        let free = (!used).count_ones() as usize;
        let smallest = rest.first().map_or(usize::MAX, |p| p.count_ones() as usize);
        if compatible < missing || free / smallest.max(1) < missing {
            failed.insert((idx, used, chosen.len()));
            return Ok(false);
        }
        for (off, &p) in rest.iter().enumerate() {
            if p & used != 0 {
                continue;
            }
            chosen.push(p);
            if self.descend(petals, need, idx + off + 1, used | p, chosen, failed)? {
                return Ok(true);
            }
            chosen.pop();
        }
        failed.insert((idx, used, chosen.len()));
        Ok(false)
    }

    /// An `r`-sunflower in `members` with exactly this core, if any.
    fn with_core(&mut self, members: &[u64], core: u64, r: usize) -> Result<Option<Sunflower>, OutOfBudget> {
        let mut has_empty = false;
        let mut petals: Vec<u64> = Vec::new();
        for &m in members {
            if m & core == core {
                let p = m & !core;
                if p == 0 {
                    has_empty = true;
                } else {
                    petals.push(p);
                }
            }
        }
        let need = r.saturating_sub(has_empty as usize);
        if petals.len() < need {
            return Ok(None);
        }
        petals.sort_by_key(|p| (p.count_ones(), *p));
        Ok(self.pack(&petals, need)?.map(|mut chosen| {
            if has_empty && chosen.len() < r {
                chosen.push(0);
            }
            Sunflower { core, petals: chosen }
        }))
    }
}

/// Every candidate core: all pairwise intersections, plus `∅` unless a
/// nonempty core is required. Sorted by size descending, then value.
fn candidate_cores(members: &[u64], nonempty: bool) -> Vec<u64> {
    let mut cores = BTreeSet::new();
    if !nonempty {
        cores.insert(0);
    }
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            let c = a & b;
            if c != 0 || !nonempty {
                cores.insert(c);
            }
        }
    }
    let mut cores: Vec<u64> = cores.into_iter().collect();
    cores.sort_by_key(|c| (std::cmp::Reverse(c.count_ones()), *c));
    cores
}

/// Finds an `r`-sunflower, optionally with a nonempty core.
pub fn find_sunflower(
    family: &CutFamily,
    r: usize,
    require_nonempty_core: bool,
    budget: SearchBudget,
) -> SearchOutcome {
    assert!(r >= 2, "sunflowers need at least two petals");
    let members = family.members();
    if members.len() < r {
        return SearchOutcome::Absent;
    }
    let mut packer = Packer::new(budget);
    for core in candidate_cores(members, require_nonempty_core) {
        match packer.with_core(members, core, r) {
            Ok(Some(sf)) => {
                debug_assert!(sf.is_valid());
                return SearchOutcome::Found(sf);
            }
            Ok(None) => {}
            Err(OutOfBudget) => return SearchOutcome::Inconclusive,
        }
    }
    SearchOutcome::Absent
}

#[derive(Debug, Clone, Serialize)]
pub struct DistinctCores {
    /// Rounds completed; a lower bound on the largest number of
    /// distinct-core sunflowers in the family.
    pub s: usize,
    pub sunflowers: Vec<Sunflower>,
}

/// The constructive distinct-core procedure: take a maximal nonempty core
/// that admits an `r`-sunflower, record it, drop every member containing
/// that core, and repeat. `None` when the budget runs out.
pub fn distinct_core_sunflowers(
    family: &CutFamily,
    r: usize,
    budget: SearchBudget,
) -> Option<DistinctCores> {
    assert!(r >= 2, "sunflowers need at least two petals");
    let mut remaining: Vec<u64> = family.members().to_vec();
    let mut packer = Packer::new(budget);
    let mut sunflowers = Vec::new();
    'rounds: while remaining.len() >= r {
        // Larger cores come first, so the first admissible one is maximal.
        for core in candidate_cores(&remaining, true) {
            match packer.with_core(&remaining, core, r) {
                Ok(Some(sf)) => {
                    remaining.retain(|&m| m & core != core);
                    sunflowers.push(sf);
                    continue 'rounds;
                }
                Ok(None) => {}
                Err(OutOfBudget) => return None,
            }
        }
        break;
    }
    Some(DistinctCores {
        s: sunflowers.len(),
        sunflowers,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CoreCount {
    /// Distinct nonempty cores admitting an `r`-sunflower.
    pub cores: usize,
    pub witnesses: Vec<Sunflower>,
    /// False when the budget ran out; `cores` is then only a lower bound.
    pub complete: bool,
}

/// Exhaustively counts the distinct nonempty cores that admit an
/// `r`-sunflower, i.e. the largest number of `r`-sunflowers with pairwise
/// distinct nonempty cores. Stops early once `stop_at` cores are found.
pub fn count_sunflower_cores(
    family: &CutFamily,
    r: usize,
    stop_at: usize,
    budget: SearchBudget,
) -> CoreCount {
    assert!(r >= 2, "sunflowers need at least two petals");
    let members = family.members();
    let mut witnesses = Vec::new();
    if members.len() >= r {
        let mut packer = Packer::new(budget);
        for core in candidate_cores(members, true) {
            if witnesses.len() >= stop_at {
                break;
            }
            match packer.with_core(members, core, r) {
                Ok(Some(sf)) => witnesses.push(sf),
                Ok(None) => {}
                Err(OutOfBudget) => {
                    return CoreCount {
                        cores: witnesses.len(),
                        witnesses,
                        complete: false,
                    }
                }
            }
        }
    }
    CoreCount {
        cores: witnesses.len(),
        witnesses,
        complete: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fam(n: usize, sets: &[&[usize]]) -> CutFamily {
        CutFamily::new(n, sets.iter().map(|s| s.iter().fold(0, |m, &v| m | 1 << v)).collect()).unwrap()
    }

    /// Brute force over all r-subsets of the family.
    fn brute_has_sunflower(members: &[u64], r: usize, nonempty: bool) -> bool {
        fn rec(members: &[u64], r: usize, start: usize, pick: &mut Vec<u64>, nonempty: bool) -> bool {
            if pick.len() == r {
                let core = pick[0] & pick[1];
                if nonempty && core == 0 {
                    return false;
                }
                return pick
                    .iter()
                    .enumerate()
                    .all(|(i, a)| pick[i + 1..].iter().all(|b| a & b == core));
            }
            for i in start..members.len() {
                pick.push(members[i]);
                if rec(members, r, i + 1, pick, nonempty) {
                    return true;
                }
                pick.pop();
            }
            false
        }
        rec(members, r, 0, &mut Vec::new(), nonempty)
    }

    #[test]
    fn finds_star_core() {
        let f = fam(4, &[&[0, 1], &[0, 2], &[0, 3]]);
        match find_sunflower(&f, 3, true, SearchBudget::default()) {
            SearchOutcome::Found(sf) => {
                assert_eq!(sf.core, 1);
                let mut p = sf.petals.clone();
                p.sort();
                assert_eq!(p, vec![0b0010, 0b0100, 0b1000]);
                assert!(sf.is_valid());
            }
            other => panic!("expected a sunflower, got {other:?}"),
        }
    }

    #[test]
    fn singletons_only_have_empty_cores() {
        let f = fam(3, &[&[0], &[1], &[2]]);
        assert_eq!(find_sunflower(&f, 3, true, SearchBudget::default()), SearchOutcome::Absent);
        assert!(matches!(find_sunflower(&f, 3, false, SearchBudget::default()), SearchOutcome::Found(sf) if sf.core == 0));
    }

    #[test]
    fn all_pairs_have_nonempty_core_sunflower() {
        let mut sets = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                sets.push((1u64 << a) | (1u64 << b));
            }
        }
        let f = CutFamily::new(6, sets).unwrap();
        match find_sunflower(&f, 3, true, SearchBudget::default()) {
            SearchOutcome::Found(sf) => {
                assert_eq!(sf.core.count_ones(), 1);
                assert_eq!(sf.petals.len(), 3);
                assert!(sf.is_valid());
                for m in sf.members() {
                    assert!(f.members().contains(&m));
                }
            }
            other => panic!("expected a sunflower, got {other:?}"),
        }
    }

    #[test]
    fn member_equal_to_core_is_an_empty_petal() {
        let f = fam(5, &[&[0], &[0, 1], &[0, 2]]);
        match find_sunflower(&f, 3, true, SearchBudget::default()) {
            SearchOutcome::Found(sf) => {
                assert_eq!(sf.core, 1);
                assert!(sf.petals.contains(&0));
                assert!(sf.is_valid());
            }
            other => panic!("expected a sunflower, got {other:?}"),
        }
    }

    #[test]
    fn distinct_core_examples() {
        let f = fam(8, &[&[0, 1], &[0, 2], &[0, 3], &[4, 5], &[4, 6], &[4, 7]]);
        let d = distinct_core_sunflowers(&f, 3, SearchBudget::default()).unwrap();
        assert_eq!(d.s, 2);
        let cores: BTreeSet<u64> = d.sunflowers.iter().map(|s| s.core).collect();
        assert_eq!(cores, BTreeSet::from([1 << 0, 1 << 4]));

        let small = fam(8, &[&[0, 1], &[0, 2]]);
        assert_eq!(distinct_core_sunflowers(&small, 3, SearchBudget::default()).unwrap().s, 0);

        let singles = CutFamily::new(8, (0..8).map(|v| 1u64 << v).collect()).unwrap();
        assert_eq!(distinct_core_sunflowers(&singles, 3, SearchBudget::default()).unwrap().s, 0);
        assert_eq!(count_sunflower_cores(&singles, 3, usize::MAX, SearchBudget::default()).cores, 0);
    }

    #[test]
    fn exhaustive_count_is_at_least_greedy() {
        let f = fam(8, &[&[0, 1], &[0, 2], &[0, 3], &[0, 1, 4], &[0, 2, 5], &[0, 3, 6], &[4, 5], &[4, 6], &[4, 7]]);
        let greedy = distinct_core_sunflowers(&f, 3, SearchBudget::default()).unwrap();
        let exact = count_sunflower_cores(&f, 3, usize::MAX, SearchBudget::default());
        assert!(exact.complete);
        assert!(exact.cores >= greedy.s);
        for sf in &exact.witnesses {
            assert!(sf.is_valid());
            assert_ne!(sf.core, 0);
        }
    }

    #[test]
    fn tiny_budget_is_inconclusive_not_absent() {
        let mut sets = Vec::new();
        for a in 0..12 {
            for b in a + 1..12 {
                sets.push((1u64 << a) | (1u64 << b));
            }
        }
        let f = CutFamily::new(12, sets).unwrap();
        let tight = SearchBudget { max_nodes: 3 };
        assert_eq!(find_sunflower(&f, 6, true, tight), SearchOutcome::Inconclusive);
        assert!(distinct_core_sunflowers(&f, 6, tight).is_none());
        assert!(!count_sunflower_cores(&f, 6, usize::MAX, tight).complete);
    }

    proptest! {
        #[test]
        fn search_agrees_with_brute_force(
            raw in proptest::collection::btree_set(0u64..(1 << 7), 0..12),
            r in 2usize..5,
            nonempty in any::<bool>(),
        ) {
            let members: Vec<u64> = raw.into_iter().collect();
            let f = CutFamily::new(7, members.clone()).unwrap();
            let got = find_sunflower(&f, r, nonempty, SearchBudget::default());
            let want = brute_has_sunflower(&members, r, nonempty);
            match got {
                SearchOutcome::Found(sf) => {
                    prop_assert!(want);
                    prop_assert!(sf.is_valid());
                    prop_assert_eq!(sf.petals.len(), r);
                    if nonempty { prop_assert!(sf.core != 0); }
                    for m in sf.members() { prop_assert!(members.contains(&m)); }
                }
                SearchOutcome::Absent => prop_assert!(!want),
                SearchOutcome::Inconclusive => prop_assert!(false, "default budget suffices"),
            }
        }
    }
}
