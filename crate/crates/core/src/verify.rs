//! Seeded property suites over the library's laws. Every suite is
//! deterministic given its seed and sizes.

use std::collections::HashMap;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::rat;
use crate::classify::{eo_descriptor, exp_descriptor, factors_finite, not_t_characterizable, scale_factors};
use crate::construct::{claim_lift, k_characterize_chain, k_characterize_open_finite_index, quotient_lift, Quotient};
use crate::corpus::{dual_characters, groups_up_to, periodic_by_index, random_periodic, subgroups};
use crate::error::{Error, Result};
use crate::groups::circle::{CirclePoint, CircleValue};
use crate::groups::finite::{FiniteAbelian, FiniteSubgroup};
use crate::groups::{CompactBase, CompactFactor, Element, GroupDescriptor, Multiplicity};
use crate::membership::{member, s_v_finite, Limits};
use crate::radicals::{radical_circle, radical_finite_seq, RadicalPresentation};
use crate::sequences::{CharSequence, Generator};
use crate::groups::Character;

pub const SUITES: &[&str] = &[
    "subgroup-law",
    "permutation",
    "interleave-intersection",
    "restriction",
    "radical-bound",
    "claim-lift",
    "k-characterize",
    "quotient-lift",
    "eo-exp",
];

/// Problem sizes; each suite reads the fields it needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sizes {
    /// Largest finite group order in the corpus.
    pub max_order: u64,
    /// Random cases per group, or in total for group-free suites.
    pub cases: u64,
    /// Range `|k| ≤ bound` for integer membership checks.
    pub bound: i64,
}

impl Default for Sizes {
    fn default() -> Self {
        Sizes { max_order: 24, cases: 200, bound: 300 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteSummary {
    pub suite: String,
    pub seed: u64,
    pub cases: u64,
    pub failed: u64,
    /// At most ten, in discovery order.
    pub counterexamples: Vec<String>,
}

impl SuiteSummary {
    pub fn passed(&self) -> u64 {
        self.cases - self.failed
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

struct Tally {
    cases: u64,
    failed: u64,
    counterexamples: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, failed: 0, counterexamples: Vec::new() }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.counterexamples.len() < 10 {
                self.counterexamples.push(describe());
            }
        }
    }

    fn finish(self, suite: &str, seed: u64) -> SuiteSummary {
        SuiteSummary {
            suite: suite.to_string(),
            seed,
            cases: self.cases,
            failed: self.failed,
            counterexamples: self.counterexamples,
        }
    }
}

pub fn run_suite(name: &str, seed: u64, sizes: &Sizes) -> Result<SuiteSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    match name {
        "subgroup-law" => subgroup_law(&mut t, &mut rng, sizes)?,
        "permutation" => permutation(&mut t, &mut rng, sizes)?,
        "interleave-intersection" => interleave_intersection(&mut t, &mut rng, sizes)?,
        "restriction" => restriction(&mut t, &mut rng, sizes)?,
        "radical-bound" => radical_bound(&mut t, &mut rng, sizes)?,
        "claim-lift" => claim_lift_suite(&mut t, &mut rng, sizes)?,
        "k-characterize" => k_characterize(&mut t, sizes)?,
        "quotient-lift" => quotient_lift_suite(&mut t, sizes)?,
        "eo-exp" => eo_exp(&mut t, &mut rng, sizes)?,
        other => {
            return Err(Error::InvalidValue(format!("unknown suite {other:?}; known: {}", SUITES.join(", "))));
        }
    }
    Ok(t.finish(name, seed))
}

const CAP: u64 = 1 << 20;

fn finite_member(g: &FiniteAbelian, seq: &CharSequence, x: &[u64]) -> Result<bool> {
    let v = member(&GroupDescriptor::Finite(g.clone()), seq, &Element::Residues(x.to_vec()), &Limits::default())?;
    if v.is_undecided() {
        return Err(Error::Internal(format!("undecided verdict on a finite group for {seq}")));
    }
    Ok(v.is_in())
}

fn subgroup_law(t: &mut Tally, rng: &mut ChaCha8Rng, sizes: &Sizes) -> Result<()> {
    for g in groups_up_to(sizes.max_order) {
        for _ in 0..sizes.cases.min(8) {
            let seq = random_periodic(&g, rng, 2, 3);
            let inside: Vec<Vec<u64>> = g
                .elements(CAP)?
                .into_iter()
                .filter_map(|x| finite_member(&g, &seq, &x).map(|b| b.then_some(x)).transpose())
                .collect::<Result<_>>()?;
            for x in &inside {
                let neg = finite_member(&g, &seq, &g.neg(x))?;
                t.check(neg, || format!("{g}, {seq}: -x fails for x = {x:?}"));
            }
            for x in inside.iter().take(8) {
                for y in &inside {
                    let sum = finite_member(&g, &seq, &g.add(x, y))?;
                    t.check(sum, || format!("{g}, {seq}: x + y fails for {x:?}, {y:?}"));
                }
            }
        }
    }
    // sampled on the circle
    let l = Limits::default();
    let families = [CharSequence::factorial(), CharSequence::fibonacci(), CharSequence::integer_enumeration()];
    for _ in 0..sizes.cases {
        let q = rng.gen_range(1..60i64);
        let (a, b) = (rng.gen_range(0..q), rng.gen_range(0..q));
        let s = &families[rng.gen_range(0..families.len())];
        let pt = |a: i64| Element::Circle(CircleValue::Exact(CirclePoint::from_ratio(a, q)));
        let g = GroupDescriptor::Circle;
        if member(&g, s, &pt(a), &l)?.is_in() && member(&g, s, &pt(b), &l)?.is_in() {
            let ok = member(&g, s, &pt(a + b), &l)?.is_in() && member(&g, s, &pt(-a), &l)?.is_in();
            t.check(ok, || format!("T, {s}: {a}/{q} and {b}/{q}"));
        }
    }
    Ok(())
}

fn permutation(t: &mut Tally, rng: &mut ChaCha8Rng, sizes: &Sizes) -> Result<()> {
    for g in groups_up_to(sizes.max_order) {
        let n = g.order() as usize;
        for _ in 0..sizes.cases.min(8) {
            let len = rng.gen_range(1..=4);
            let cycle: Vec<usize> = (0..len).map(|_| rng.gen_range(0..n)).collect();
            let prefix: Vec<usize> = (0..rng.gen_range(0..3)).map(|_| rng.gen_range(0..n)).collect();
            let base = periodic_by_index(&g, &prefix, &cycle);
            let sv = s_v_finite(&g, &base, CAP)?;
            for k in 1..len {
                let mut rotated = cycle.clone();
                rotated.rotate_left(k);
                let mut shuffled = prefix.clone();
                shuffled.reverse();
                let other = periodic_by_index(&g, &shuffled, &rotated);
                for x in g.elements(CAP)? {
                    let ok = finite_member(&g, &other, &x)? == sv.contains(&x);
                    t.check(ok, || format!("{g}: {base} vs {other} at {x:?}"));
                }
            }
        }
    }
    Ok(())
}

/// `s_u` cached by sequence.
struct SvCache(HashMap<CharSequence, FiniteSubgroup>);

impl SvCache {
    fn get(&mut self, g: &FiniteAbelian, s: &CharSequence) -> Result<FiniteSubgroup> {
        if let Some(v) = self.0.get(s) {
            return Ok(v.clone());
        }
        let v = s_v_finite(g, s, CAP)?;
        self.0.insert(s.clone(), v.clone());
        Ok(v)
    }
}

/// `s_{interleave(u,v)} = s_u ∩ s_v` on one pair.
pub fn check_interleave_pair(g: &FiniteAbelian, u: &CharSequence, v: &CharSequence) -> Result<bool> {
    let w = CharSequence::interleave(u, v)?;
    Ok(s_v_finite(g, &w, CAP)? == s_v_finite(g, u, CAP)?.intersect(&s_v_finite(g, v, CAP)?)?)
}

fn interleave_intersection(t: &mut Tally, rng: &mut ChaCha8Rng, sizes: &Sizes) -> Result<()> {
    for g in groups_up_to(sizes.max_order) {
        let mut cache = SvCache(HashMap::new());
        let n = g.order() as usize;
        let mut pairs: Vec<(CharSequence, CharSequence)> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                pairs.push((periodic_by_index(&g, &[], &[i]), periodic_by_index(&g, &[], &[j])));
            }
        }
        for _ in 0..sizes.cases {
            pairs.push((random_periodic(&g, rng, 2, 3), random_periodic(&g, rng, 2, 3)));
        }
        for (u, v) in pairs {
            let w = CharSequence::interleave(&u, &v)?;
            let lhs = s_v_finite(&g, &w, CAP)?;
            let rhs = cache.get(&g, &u)?.intersect(&cache.get(&g, &v)?)?;
            t.check(lhs == rhs, || format!("{g}: {u} and {v}: {lhs} vs {rhs}"));
        }
    }
    Ok(())
}

/// Restriction of a finite-group sequence to the cyclic subgroup `⟨h⟩`,
/// identified with `ℤ(k)` via `i ↦ i·h`.
pub fn restrict_to_cyclic(g: &FiniteAbelian, seq: &CharSequence, h: &[u64]) -> Result<(FiniteAbelian, CharSequence)> {
    let k = g.element_order(h);
    let j = FiniteAbelian::cyclic(k)?;
    let e = g.exponent();
    let restrict = |c: &Character| -> Result<Character> {
        let Character::Residues(c) = c else {
            return Err(Error::DescriptorMismatch("non-residue character".into()));
        };
        if k == 1 {
            return Ok(Character::Residues(Vec::new()));
        }
        // χ(h) = r/e with k·r ≡ 0 mod e, so χ(h) = (r·k/e)/k
        let r = g.pairing_residue(c, h);
        Ok(Character::Residues(vec![(r * k / e) % k]))
    };
    let restricted = match seq.generator() {
        Generator::Periodic { prefix, cycle } => CharSequence::periodic(
            GroupDescriptor::Finite(j.clone()),
            prefix.iter().map(restrict).collect::<Result<_>>()?,
            cycle.iter().map(restrict).collect::<Result<_>>()?,
        )?,
        _ => return Err(Error::Unsupported("restriction of a non-periodic sequence".into())),
    };
    Ok((j, restricted))
}

fn restriction(t: &mut Tally, rng: &mut ChaCha8Rng, sizes: &Sizes) -> Result<()> {
    for g in groups_up_to(sizes.max_order) {
        for _ in 0..sizes.cases.min(6) {
            let seq = random_periodic(&g, rng, 2, 3);
            let sv = s_v_finite(&g, &seq, CAP)?;
            for h in g.elements(CAP)? {
                let (j, r) = restrict_to_cyclic(&g, &seq, &h)?;
                let sj = s_v_finite(&j, &r, CAP)?;
                let k = j.order();
                for i in 0..k {
                    let x = g.scale(&h, i as i64);
                    let lhs = if k == 1 { sj.contains(&[]) } else { sj.contains(&[i]) };
                    t.check(lhs == sv.contains(&x), || format!("{g}, {seq}, J = <{h:?}>, i = {i}"));
                }
            }
        }
    }
    Ok(())
}

fn radical_bound(t: &mut Tally, rng: &mut ChaCha8Rng, sizes: &Sizes) -> Result<()> {
    for g in groups_up_to(sizes.max_order) {
        for _ in 0..sizes.cases.min(10) {
            let seq = random_periodic(&g, rng, 2, 3);
            let RadicalPresentation::Finite(rad) = radical_finite_seq(&g, &seq, CAP)?.presentation else {
                return Err(Error::Internal("finite radical presentation expected".into()));
            };
            let sv = s_v_finite(&g, &seq, CAP)?;
            t.check(rad.is_subset_of(&sv)?, || format!("{g}, {seq}: {rad} ⊄ {sv}"));
        }
    }
    let l = Limits::default();
    let mut families = vec![
        CharSequence::factorial(),
        CharSequence::fibonacci(),
        CharSequence::factorial().tail(4),
        CharSequence::zero(GroupDescriptor::Circle)?,
    ];
    for (c, q) in [(1, 2), (3, 2), (6, 5), (4, 10), (-2, 3)] {
        families.push(CharSequence::geometric(GroupDescriptor::Circle, rat(c, 1), q)?);
    }
    for s in &families {
        let RadicalPresentation::Circle(d) = radical_circle(s)?.presentation else {
            return Err(Error::Internal("circle radical presentation expected".into()));
        };
        let points: Vec<CirclePoint> = match u64::try_from(d.clone()) {
            Ok(0) => (0..sizes.cases.min(50) as i64)
                .map(|_| {
                    let q = rng.gen_range(1..100);
                    CirclePoint::from_ratio(rng.gen_range(0..q), q)
                })
                .collect(),
            Ok(d) if d <= 5000 => (0..d as i64).map(|k| CirclePoint::from_ratio(k, d as i64)).collect(),
            _ => (0..50).map(|k| CirclePoint::new(rat(k, 1) / d.clone())).collect(),
        };
        for p in points {
            let v = member(&GroupDescriptor::Circle, s, &Element::Circle(CircleValue::Exact(p.clone())), &l)?;
            t.check(v.is_in(), || format!("T, {s}: radical point {p} has verdict {}", v.label()));
        }
    }
    Ok(())
}

/// A random `a` with `‖a‖ < 1/m²`, as an exact rational.
pub fn random_small_point(rng: &mut impl Rng, m: u64) -> CirclePoint {
    let m2 = (m * m) as i64;
    let den = rng.gen_range(m2 + 1..=1_000_000i64);
    // num·m² < den keeps the bound strict
    let num = rng.gen_range(0..=(den - 1) / m2);
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    CirclePoint::new(rat(sign * num, den))
}

fn claim_lift_suite(t: &mut Tally, rng: &mut ChaCha8Rng, sizes: &Sizes) -> Result<()> {
    for _ in 0..sizes.cases {
        let m = rng.gen_range(2..=12u64);
        let a = random_small_point(rng, m);
        let ok = match claim_lift(&a, m) {
            Ok(b) => {
                let bound = rat(1, (m * m) as i64);
                b.mul_int(&BigInt::from(m)) == a
                    && (1..m).all(|k| b.mul_int(&BigInt::from(k)).norm() > bound)
            }
            Err(_) => false,
        };
        t.check(ok, || format!("a = {a}, m = {m}"));
    }
    Ok(())
}

fn k_characterize(t: &mut Tally, sizes: &Sizes) -> Result<()> {
    let l = Limits::default();
    for m in [2u64, 3, 4, 6, 12] {
        let k = k_characterize_open_finite_index(m, None, &l)?;
        let check = k.verify(sizes.bound, 1000, &l)?;
        t.check(check.passed(), || format!("m = {m}: {check:?}"));
    }
    for chain in [vec![6u64, 2, 1], vec![12, 4, 2, 1], vec![12, 6, 3, 1]] {
        let k = k_characterize_chain(&chain, None, &l)?;
        let check = k.verify(sizes.bound, 1000, &l)?;
        t.check(check.passed(), || format!("chain {chain:?}: {check:?}"));
    }
    Ok(())
}

/// Checks `s_v(X) = π⁻¹(s_u(X/F))` for every subgroup `F` and every
/// single-character `u` on the quotient; calls `check` once per instance.
pub fn quotient_instances(
    g: &FiniteAbelian,
    mut check: impl FnMut(&FiniteSubgroup, &CharSequence, bool),
) -> Result<()> {
    for f in subgroups(g, CAP)? {
        let q = Quotient::new(g, &f)?;
        for chi in dual_characters(&q.group) {
            let u = CharSequence::periodic(GroupDescriptor::Finite(q.group.clone()), vec![], vec![chi])?;
            let lift = quotient_lift(&q, &u, CAP)?;
            let sv = s_v_finite(g, &lift.sequence, CAP)?;
            let su = s_v_finite(&q.group, &u, CAP)?;
            let ok = g.elements(CAP)?.iter().all(|x| sv.contains(x) == su.contains(&q.project(x)));
            check(&f, &u, ok);
        }
    }
    Ok(())
}

fn quotient_lift_suite(t: &mut Tally, sizes: &Sizes) -> Result<()> {
    for g in groups_up_to(sizes.max_order.min(32)) {
        quotient_instances(&g, |f, u, ok| t.check(ok, || format!("{g}, F = {f}, u = {u}")))?;
    }
    Ok(())
}

fn eo_exp(t: &mut Tally, rng: &mut ChaCha8Rng, sizes: &Sizes) -> Result<()> {
    for _ in 0..sizes.cases {
        let k = rng.gen_range(1..=4);
        let factors: Vec<CompactFactor> = (0..k)
            .map(|_| {
                let base = if rng.gen_bool(0.15) { CompactBase::Circle } else { CompactBase::Cyclic(rng.gen_range(2..=12)) };
                let mult = if rng.gen_bool(0.5) { Multiplicity::Countable } else { Multiplicity::Finite(rng.gen_range(1..=3)) };
                CompactFactor::new(base, mult)
            })
            .collect::<Result<_>>()?;
        let d = GroupDescriptor::SymbolicCompact(factors.clone());
        let (eo, exp) = (eo_descriptor(&d)?, exp_descriptor(&d)?);
        let least = (1u64..=30_000).find(|&n| factors_finite(&scale_factors(&factors, n))).unwrap_or(0);
        let v = not_t_characterizable(&d)?;
        let witness_ok = v
            .witness
            .is_none_or(|m| {
                let image = scale_factors(&factors, m);
                factors_finite(&image) && !image.is_empty()
            });
        t.check(eo <= exp && eo.0 == least && witness_ok, || format!("{d}: eo {eo}, exp {exp}, least {least}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_at_small_sizes() {
        let sizes = Sizes { max_order: 12, cases: 20, bound: 60 };
        for name in SUITES {
            let s = run_suite(name, 7, &sizes).unwrap();
            assert!(s.ok(), "{name}: {:?}", s.counterexamples);
            assert!(s.cases > 0, "{name} ran no cases");
        }
    }

    #[test]
    fn suites_are_deterministic() {
        let sizes = Sizes { max_order: 8, cases: 10, bound: 20 };
        assert_eq!(run_suite("claim-lift", 3, &sizes).unwrap(), run_suite("claim-lift", 3, &sizes).unwrap());
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(matches!(run_suite("nope", 0, &Sizes::default()), Err(Error::InvalidValue(_))));
    }

    #[test]
    fn radical_bound_on_the_trivial_group() {
        let sizes = Sizes { max_order: 1, cases: 5, bound: 5 };
        let s = run_suite("radical-bound", 0, &sizes).unwrap();
        assert!(s.ok());
    }

    #[test]
    fn claim_lift_suite_matches_the_example() {
        let s = run_suite("claim-lift", 7, &Sizes { cases: 500, ..Sizes::default() }).unwrap();
        assert_eq!((s.cases, s.passed()), (500, 500));
    }
}
