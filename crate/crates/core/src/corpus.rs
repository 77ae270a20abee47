//! Enumeration of small finite abelian groups, their subgroups, and the
//! periodic sequences on them.

use std::collections::HashSet;

use rand::Rng;

use crate::error::Result;
use crate::groups::finite::{FiniteAbelian, FiniteSubgroup};
use crate::groups::{Character, GroupDescriptor};
use crate::sequences::CharSequence;

/// Every finite abelian group of order at most `max_order`, one per
/// invariant-factor shape, starting with the trivial group.
pub fn groups_up_to(max_order: u64) -> Vec<FiniteAbelian> {
    fn extend(prefix: &mut Vec<u64>, order: u64, max_order: u64, out: &mut Vec<FiniteAbelian>) {
        let last = prefix.last().copied().unwrap_or(1);
        let mut d = if prefix.is_empty() { 2 } else { last };
        while order * d <= max_order {
            prefix.push(d);
            out.push(FiniteAbelian::new(prefix.clone()).expect("divisibility chain"));
            extend(prefix, order * d, max_order, out);
            prefix.pop();
            d += last;
        }
    }
    let mut out = vec![FiniteAbelian::trivial()];
    if max_order >= 2 {
        extend(&mut Vec::new(), 1, max_order, &mut out);
    }
    out.sort_by_key(|g| (g.order(), g.factors().to_vec()));
    out
}

/// Every subgroup of `group`, smallest first.
pub fn subgroups(group: &FiniteAbelian, cap: u64) -> Result<Vec<FiniteSubgroup>> {
    let elements = group.elements(cap)?;
    let zero = FiniteSubgroup::zero(group, cap)?;
    let mut seen: HashSet<FiniteSubgroup> = HashSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    while let Some(s) = frontier.pop() {
        let gens = s.generators();
        for x in &elements {
            if s.contains(x) {
                continue;
            }
            let mut g = gens.clone();
            g.push(x.clone());
            let t = FiniteSubgroup::generated_by(group, &g, cap)?;
            if seen.insert(t.clone()) {
                frontier.push(t);
            }
        }
    }
    let mut out: Vec<FiniteSubgroup> = seen.into_iter().collect();
    out.sort_by_key(|s| (s.order(), s.elements()));
    Ok(out)
}

/// Every character of `group`, in index order.
pub fn dual_characters(group: &FiniteAbelian) -> Vec<Character> {
    (0..group.order() as usize).map(|i| Character::Residues(group.element_at(i))).collect()
}

/// `periodic(prefix; cycle)` on `group` from character indices.
pub fn periodic_by_index(group: &FiniteAbelian, prefix: &[usize], cycle: &[usize]) -> CharSequence {
    let chi = |i: &usize| Character::Residues(group.element_at(*i));
    CharSequence::periodic(
        GroupDescriptor::Finite(group.clone()),
        prefix.iter().map(chi).collect(),
        cycle.iter().map(chi).collect(),
    )
    .expect("characters of the group")
}

/// Every cycle of length `1..=max_len` over the full dual, as index lists.
pub fn all_cycles(group: &FiniteAbelian, max_len: usize) -> Vec<Vec<usize>> {
    let n = group.order() as usize;
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|c| {
                (0..n).map(move |i| {
                    let mut d = c.clone();
                    d.push(i);
                    d
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// A random periodic sequence with prefix length `≤ max_prefix` and cycle
/// length in `1..=max_cycle`.
pub fn random_periodic(group: &FiniteAbelian, rng: &mut impl Rng, max_prefix: usize, max_cycle: usize) -> CharSequence {
    let n = group.order() as usize;
    let p = rng.gen_range(0..=max_prefix);
    let c = rng.gen_range(1..=max_cycle);
    let prefix: Vec<usize> = (0..p).map(|_| rng.gen_range(0..n)).collect();
    let cycle: Vec<usize> = (0..c).map(|_| rng.gen_range(0..n)).collect();
    periodic_by_index(group, &prefix, &cycle)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_counts_match_partition_numbers() {
        // number of abelian groups of order n is the product of p(e) over prime powers p^e ∥ n
        let gs = groups_up_to(64);
        let count = |n: u64| gs.iter().filter(|g| g.order() == n).count();
        assert_eq!(count(1), 1);
        assert_eq!(count(8), 3);
        assert_eq!(count(16), 5);
        assert_eq!(count(32), 7);
        assert_eq!(count(64), 11);
        assert_eq!(count(36), 4);
        assert_eq!(count(48), 5);
        assert_eq!(count(60), 2);
        assert_eq!(gs.len(), (1..=64).map(count).sum::<usize>());
    }

    #[test]
    fn subgroup_counts() {
        let count = |f: Vec<u64>| subgroups(&FiniteAbelian::new(f).unwrap(), 1000).unwrap().len();
        assert_eq!(count(vec![12]), 6);
        assert_eq!(count(vec![2, 2]), 5);
        assert_eq!(count(vec![2, 2, 2]), 16);
        assert_eq!(count(vec![2, 4]), 8);
        assert_eq!(count(vec![4, 4]), 15);
        assert_eq!(subgroups(&FiniteAbelian::trivial(), 10).unwrap().len(), 1);
    }

    #[test]
    fn cycles_enumerate_words() {
        let g = FiniteAbelian::cyclic(3).unwrap();
        assert_eq!(all_cycles(&g, 2).len(), 3 + 9);
    }
}
