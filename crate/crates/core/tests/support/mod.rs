//! Checkers for the Venn-diagram conditions that a family of light cuts
//! satisfies, with the extremal bound they imply.

use kcut::setfamily::{cuts_atoms, erdos_rado_bound, venn_atom_count};
use num_bigint::BigUint;

/// Calls `f` on every `j`-subset of `items` (as index lists).
pub fn for_each_subset(len: usize, j: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn go(start: usize, len: usize, j: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == j {
            return f(cur);
        }
        for i in start..len {
            cur.push(i);
            if !go(i + 1, len, j, cur, f) {
                return false;
            }
            cur.pop();
        }
        true
    }
    go(0, len, j, &mut Vec::with_capacity(j), f)
}

fn atoms(sets: &[u64], n: usize) -> Vec<u64> {
    let mut atoms = vec![if n == 64 { u64::MAX } else { (1u64 << n) - 1 }];
    for &s in sets {
        atoms = atoms
            .into_iter()
            .flat_map(|a| [a & s, a & !s])
            .filter(|&p| p != 0)
            .collect();
    }
    atoms
}

/// Condition (i): every `kp` members have fewer than `2 kp` Venn atoms.
pub fn condition_i(members: &[u64], n: usize, kp: usize) -> bool {
    let j = kp.min(members.len());
    for_each_subset(members.len(), j, &mut |idx| {
        let sets: Vec<u64> = idx.iter().map(|&i| members[i]).collect();
        venn_atom_count(&sets, n) < 2 * kp
    })
}

/// Odd-case conditions: no `kp - 1` members reach `2(kp - 1) + 1` atoms,
/// and when `kp - 1` members have exactly `2(kp - 1)` atoms no further
/// member cuts two of them.
pub fn conditions_odd(members: &[u64], n: usize, kp: usize) -> bool {
    let j = (kp - 1).min(members.len());
    for_each_subset(members.len(), j, &mut |idx| {
        let sets: Vec<u64> = idx.iter().map(|&i| members[i]).collect();
        let a = atoms(&sets, n);
        if a.len() > 2 * (kp - 1) {
            return false;
        }
        if a.len() == 2 * (kp - 1) {
            for &s in members {
                if a.iter().filter(|&&atom| cuts_atoms(s, atom)).count() >= 2 {
                    return false;
                }
            }
        }
        true
    })
}

/// `10 s kp (5 kp + 2) sf(5 kp, r) n` with the Erdős–Rado value for `sf`.
pub fn extremal_bound(s: u64, kp: usize, r: u64, n: usize) -> BigUint {
    let kp64 = kp as u64;
    BigUint::from(10 * s * kp64 * (5 * kp64 + 2) * n as u64) * erdos_rado_bound(5 * kp as u32, r)
}
