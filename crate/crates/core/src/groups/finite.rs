//! Finite abelian groups ℤ(d₁)⊕…⊕ℤ(d_k) in invariant-factor form, their
//! subgroups, and the self-duality pairing.

use std::fmt;

use crate::arith::rat;
use crate::error::{Error, Result};
use crate::groups::circle::CirclePoint;

/// Default brute-force cap on enumerated elements.
pub const DEFAULT_CAP: u64 = 1_000_000;

/// `ℤ(d₁)⊕…⊕ℤ(d_k)` with `d₁ | … | d_k`, every `dᵢ ≥ 2`. No factors is the
/// trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteAbelian {
    factors: Vec<u64>,
}

impl FiniteAbelian {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if let Some(&d) = factors.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDescriptor(format!("invariant factor {d} is below 2")));
        }
        if let Some(w) = factors.windows(2).find(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidDescriptor(format!(
                "invariant factors must form a divisibility chain: {} does not divide {}",
                w[0], w[1]
            )));
        }
        if factors.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d)).is_none() {
            return Err(Error::InvalidDescriptor("group order overflows u64".into()));
        }
        Ok(FiniteAbelian { factors })
    }

    /// Invariant factors of `ℤ(n₁)⊕…⊕ℤ(n_k)` for arbitrary orders `nᵢ ≥ 1`.
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::InvalidDescriptor("cyclic order 0 is not finite".into()));
        }
        // prime-power parts, largest first for each prime
        let mut powers: std::collections::BTreeMap<u64, Vec<u64>> = Default::default();
        for &n in orders {
            let mut m = n;
            let mut p = 2;
            while m > 1 {
                if p * p > m {
                    p = m;
                }
                if m % p == 0 {
                    let mut q = 1;
                    while m % p == 0 {
                        m /= p;
                        q *= p;
                    }
                    powers.entry(p).or_default().push(q);
                }
                p += 1;
            }
        }
        let len = powers.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for list in powers.values_mut() {
            list.sort_unstable();
            // align the largest powers with the last invariant factor
            for (i, q) in list.iter().rev().enumerate() {
                factors[len - 1 - i] = factors[len - 1 - i]
                    .checked_mul(*q)
                    .ok_or_else(|| Error::InvalidDescriptor("group order overflows u64".into()))?;
            }
        }
        Self::new(factors)
    }

    pub fn trivial() -> Self {
        FiniteAbelian { factors: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        if n == 1 {
            Ok(Self::trivial())
        } else {
            Self::new(vec![n])
        }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Errors unless the group can be enumerated under `cap`.
    pub fn check_cap(&self, cap: u64) -> Result<u64> {
        let n = self.order();
        if n > cap {
            Err(Error::CapExceeded { cap, needed: n })
        } else {
            Ok(n)
        }
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.rank()]
    }

    pub fn is_valid(&self, x: &[u64]) -> bool {
        x.len() == self.rank() && x.iter().zip(&self.factors).all(|(a, d)| a < d)
    }

    pub fn validate(&self, x: &[u64]) -> Result<()> {
        if self.is_valid(x) {
            Ok(())
        } else {
            Err(Error::InvalidValue(format!("{x:?} is not a reduced element of {self}")))
        }
    }

    /// Reduces arbitrary integer coordinates.
    pub fn reduce(&self, x: &[i64]) -> Result<Vec<u64>> {
        if x.len() != self.rank() {
            return Err(Error::InvalidValue(format!("expected {} coordinates", self.rank())));
        }
        Ok(x.iter().zip(&self.factors).map(|(&a, &d)| a.rem_euclid(d as i64) as u64).collect())
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(&self.factors).map(|((x, y), d)| (x + y) % d).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.factors).map(|(x, d)| (d - x) % d).collect()
    }

    pub fn scale(&self, a: &[u64], k: i64) -> Vec<u64> {
        a.iter()
            .zip(&self.factors)
            .map(|(&x, &d)| ((x as i128 * k as i128).rem_euclid(d as i128)) as u64)
            .collect()
    }

    /// Mixed-radix index, first coordinate least significant.
    pub fn index_of(&self, x: &[u64]) -> usize {
        let mut idx = 0usize;
        for (a, d) in x.iter().zip(&self.factors).rev() {
            idx = idx * *d as usize + *a as usize;
        }
        idx
    }

    pub fn element_at(&self, mut idx: usize) -> Vec<u64> {
        self.factors
            .iter()
            .map(|&d| {
                let a = (idx % d as usize) as u64;
                idx /= d as usize;
                a
            })
            .collect()
    }

    /// All elements in index order.
    pub fn elements(&self, cap: u64) -> Result<Vec<Vec<u64>>> {
        let n = self.check_cap(cap)?;
        Ok((0..n as usize).map(|i| self.element_at(i)).collect())
    }

    /// `χ_c(x)` as a residue modulo the exponent: `Σ cᵢxᵢ·(e/dᵢ) mod e`.
    pub fn pairing_residue(&self, c: &[u64], x: &[u64]) -> u64 {
        let e = self.exponent() as u128;
        let mut acc = 0u128;
        for ((ci, xi), d) in c.iter().zip(x).zip(&self.factors) {
            acc = (acc + (*ci as u128 * *xi as u128 % *d as u128) * (e / *d as u128)) % e;
        }
        acc as u64
    }

    /// `χ_c(x) = Σ cᵢxᵢ/dᵢ mod 1`.
    pub fn pairing(&self, c: &[u64], x: &[u64]) -> CirclePoint {
        CirclePoint::new(rat(self.pairing_residue(c, x) as i64, self.exponent() as i64))
    }

    /// Order of an element.
    pub fn element_order(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.factors)
            .map(|(&a, &d)| d / crate::arith::gcd_u64(a, d))
            .fold(1, crate::arith::lcm_u64)
    }
}

impl fmt::Display for FiniteAbelian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("Z(1)");
        }
        let parts: Vec<String> = self.factors.iter().map(u64::to_string).collect();
        write!(f, "Z({})", parts.join(","))
    }
}

/// A subgroup of a finite abelian group, stored as a membership mask over
/// the mixed-radix indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSubgroup {
    group: FiniteAbelian,
    mask: Vec<bool>,
    order: u64,
}

impl FiniteSubgroup {
    /// `{0}`.
    pub fn zero(group: &FiniteAbelian, cap: u64) -> Result<Self> {
        let n = group.check_cap(cap)? as usize;
        let mut mask = vec![false; n];
        mask[0] = true;
        Ok(FiniteSubgroup { group: group.clone(), mask, order: 1 })
    }

    pub fn whole(group: &FiniteAbelian, cap: u64) -> Result<Self> {
        let n = group.check_cap(cap)?;
        Ok(FiniteSubgroup { group: group.clone(), mask: vec![true; n as usize], order: n })
    }

    /// `{x : keep(x)}`; the caller guarantees the result is a subgroup.
    pub fn from_predicate(
        group: &FiniteAbelian,
        cap: u64,
        mut keep: impl FnMut(&[u64]) -> bool,
    ) -> Result<Self> {
        let n = group.check_cap(cap)? as usize;
        let mut mask = vec![false; n];
        let mut order = 0;
        for (i, m) in mask.iter_mut().enumerate() {
            if keep(&group.element_at(i)) {
                *m = true;
                order += 1;
            }
        }
        debug_assert!(mask[0], "a subgroup contains 0");
        Ok(FiniteSubgroup { group: group.clone(), mask, order })
    }

    /// Closure of `gens` under addition.
    pub fn generated_by(group: &FiniteAbelian, gens: &[Vec<u64>], cap: u64) -> Result<Self> {
        for g in gens {
            group.validate(g)?;
        }
        // closure under +g suffices in a finite group
        let mut sub = Self::zero(group, cap)?;
        let mut queue = vec![group.zero()];
        while let Some(h) = queue.pop() {
            for g in gens {
                let y = group.add(&h, g);
                let i = group.index_of(&y);
                if !sub.mask[i] {
                    sub.mask[i] = true;
                    sub.order += 1;
                    queue.push(y);
                }
            }
        }
        Ok(sub)
    }

    pub fn group(&self) -> &FiniteAbelian {
        &self.group
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        self.group.is_valid(x) && self.mask[self.group.index_of(x)]
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn index(&self) -> u64 {
        self.group.order() / self.order
    }

    pub fn is_whole(&self) -> bool {
        self.order == self.group.order()
    }

    pub fn is_zero(&self) -> bool {
        self.order == 1
    }

    pub fn elements(&self) -> Vec<Vec<u64>> {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| self.group.element_at(i))
            .collect()
    }

    /// A generating set, chosen greedily in index order.
    pub fn generators(&self) -> Vec<Vec<u64>> {
        let mut gens = Vec::new();
        let mut span = FiniteSubgroup {
            group: self.group.clone(),
            mask: vec![false; self.mask.len()],
            order: 1,
        };
        span.mask[0] = true;
        for x in self.elements() {
            if !span.contains(&x) {
                gens.push(x);
                span = Self::generated_by(&self.group, &gens, u64::MAX).expect("under cap");
            }
            if span.order == self.order {
                break;
            }
        }
        gens
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let mask: Vec<bool> = self.mask.iter().zip(&other.mask).map(|(a, b)| *a && *b).collect();
        let order = mask.iter().filter(|&&m| m).count() as u64;
        Ok(FiniteSubgroup { group: self.group.clone(), mask, order })
    }

    pub fn is_subset_of(&self, other: &Self) -> Result<bool> {
        self.same_group(other)?;
        Ok(self.mask.iter().zip(&other.mask).all(|(a, b)| !*a || *b))
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if self.group != other.group {
            return Err(crate::error::mismatch(format!(
                "subgroups of {} and {}",
                self.group, other.group
            )));
        }
        Ok(())
    }
}

impl fmt::Display for FiniteSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.elements().iter().map(|x| fmt_tuple(x)).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

/// `a` for rank one, `(a,b,…)` otherwise.
pub fn fmt_tuple(x: &[u64]) -> String {
    if x.len() == 1 {
        x[0].to_string()
    } else {
        let parts: Vec<String> = x.iter().map(u64::to_string).collect();
        format!("({})", parts.join(","))
    }
}

/// The dual of a finite abelian group, realized on the same invariant
/// factors via `(c, x) ↦ Σ cᵢxᵢ/dᵢ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteDual {
    group: FiniteAbelian,
}

impl FiniteDual {
    pub fn group(&self) -> &FiniteAbelian {
        &self.group
    }

    pub fn pair(&self, c: &[u64], x: &[u64]) -> CirclePoint {
        self.group.pairing(c, x)
    }
}

/// Builds the dual and checks, for every nonzero element, that some basis
/// character detects it.
pub fn dual_finite(group: &FiniteAbelian, cap: u64) -> Result<FiniteDual> {
    let n = group.check_cap(cap)? as usize;
    let basis: Vec<Vec<u64>> = (0..group.rank())
        .map(|i| {
            let mut e = group.zero();
            e[i] = 1;
            e
        })
        .collect();
    for idx in 1..n {
        let x = group.element_at(idx);
        if basis.iter().all(|c| group.pairing_residue(c, &x) == 0) {
            return Err(Error::Internal(format!("pairing fails to separate {x:?}")));
        }
    }
    Ok(FiniteDual { group: group.clone() })
}

/// `S^⊥`. The pairing is symmetric in the invariant-factor realization, so
/// the same computation serves `S ⊆ G` (result in the dual) and `S ⊆ Ĝ`
/// (result in `G`).
pub fn annihilator_finite(group: &FiniteAbelian, s: &[Vec<u64>], cap: u64) -> Result<FiniteSubgroup> {
    for y in s {
        group.validate(y)?;
    }
    FiniteSubgroup::from_predicate(group, cap, |c| s.iter().all(|y| group.pairing_residue(c, y) == 0))
}
