//! Constructions of characterizing sequences for designated subgroups.
//!
//! Subgroups of ℤ are handled in coordinates: `dℤ` is identified with ℤ via
//! `j ↦ dj`, so a sequence "on `dℤ`" is a sequence on [`GroupDescriptor::Integers`].

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{int_rat, is_prime, pow_big, rat};
use crate::error::{mismatch, Error, Result};
use crate::groups::circle::{CirclePoint, CircleValue};
use crate::groups::finite::{fmt_tuple, FiniteAbelian, FiniteSubgroup};
use crate::groups::snf::{smith_normal_form, Matrix};
use crate::groups::{Character, Element, GroupDescriptor};
use crate::membership::{is_autochar_witness, member, Autochar, Limits};
use crate::sequences::{CharSequence, Generator};

/// `b` with `mb = a` and `‖kb‖ > 1/m²` for `1 ≤ k < m`.
///
/// Accepts `‖a‖ ≤ 1/m²`; the construction still works on the boundary.
/// The postcondition is re-checked exactly on every call.
pub fn claim_lift(a: &CirclePoint, m: u64) -> Result<CirclePoint> {
    if m < 2 {
        return Err(Error::InvalidValue(format!("claim lift needs m ≥ 2, got {m}")));
    }
    let bound = rat(1, (m * m) as i64);
    if a.norm() > bound {
        return Err(Error::Precondition(format!("‖{a}‖ exceeds 1/{m}²")));
    }
    let mb = BigRational::from_integer(m.into());
    let b = if a.value() <= &bound {
        CirclePoint::new(a.value() / &mb + rat(1, m as i64))
    } else {
        // mirrored branch: a is close to 1
        CirclePoint::new(a.neg().value() / &mb + rat(1, m as i64)).neg()
    };
    if b.mul_int(&BigInt::from(m)) != *a {
        return Err(Error::Internal(format!("claim lift: {m}·{b} ≠ {a}")));
    }
    for k in 1..m {
        if b.mul_int(&BigInt::from(k)).norm() <= bound {
            return Err(Error::Internal(format!("claim lift: ‖{k}·{b}‖ ≤ 1/{m}²")));
        }
    }
    Ok(b)
}

/// Extends each `u_n` on `H` to `H × Z` by zero on `Z`.
pub fn extend_zero_on_summand(u: &CharSequence, product: &GroupDescriptor) -> Result<CharSequence> {
    let GroupDescriptor::Product(h, z) = product else {
        return Err(mismatch(format!("{product} is not a product")));
    };
    if u.group() != h.as_ref() {
        return Err(mismatch(format!("sequence lives on {}, not on the factor {h}", u.group())));
    }
    CharSequence::pair(u, &CharSequence::zero(z.as_ref().clone())?)
}

/// How `X = H + ⟨x⟩` with `[X:H] = p` sits around `H ≅ ℤ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeIndexAmbient {
    /// `H = pℤ ≤ ℤ`, `x = 1`.
    Integers,
    /// `X = H × ℤ(p)`, `x = (0, 1)`; here `px = 0`.
    Summand,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtensionBranch {
    /// `u_n(px) = 0` infinitely often: extend by `0` at `x`.
    ZeroAtX,
    /// `x ↦ b_n` with `p·b_n = u_n(px)`.
    Divided,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeIndexExtension {
    pub branch: ExtensionBranch,
    /// The extensions `u_n` of the witness.
    pub extension: CharSequence,
    /// `w_n = p·u_n`; non-trivial, and `s_w(X) = X` when `s_u(H) = H`.
    pub output: CharSequence,
}

/// Extends an autocharacterizing sequence of `H = pℤ` (in coordinates) to
/// one of `X = ℤ`.
pub fn extend_prime_index(u: &CharSequence, p: u64, ambient: PrimeIndexAmbient) -> Result<PrimeIndexExtension> {
    if !is_prime(p) {
        return Err(Error::InvalidValue(format!("index {p} is not prime")));
    }
    if ambient == PrimeIndexAmbient::Summand {
        return Err(Error::Precondition("px = 0: H is a direct summand, extend by zero instead".into()));
    }
    if u.group() != &GroupDescriptor::Integers {
        return Err(mismatch(format!("witness lives on {}, not on coordinates of {p}Z", u.group())));
    }
    // u_n(px) is the rotation of u_n at the coordinate 1
    let zero_often = match u.support_partition().gamma_inf() {
        Some(inf) => inf.iter().any(Character::is_zero),
        None => return Err(Error::Undecidable("support of the witness".into())),
    };
    if zero_often {
        // on ℤ a character vanishing at p vanishes on pℤ, so these terms are 0
        let extension = u.clone();
        return Ok(PrimeIndexExtension { branch: ExtensionBranch::ZeroAtX, output: extension.clone(), extension });
    }
    let extension = divide_rotations(u, p)?;
    // p·u_n is the rotation by u_n(px) on ℤ
    Ok(PrimeIndexExtension { branch: ExtensionBranch::Divided, extension, output: u.clone() })
}

/// The extension `k ↦ α_n·k/r` from `rℤ` to ℤ of a sequence given in
/// coordinates of `rℤ`.
pub fn divide_rotations(seq: &CharSequence, r: u64) -> Result<CharSequence> {
    let rr = int_rat(r);
    let g = GroupDescriptor::Integers;
    let divide = |c: &Character| -> Result<Character> {
        match c {
            Character::Rotation(CircleValue::Exact(a)) => {
                Ok(Character::Rotation(CircleValue::Exact(CirclePoint::new(a.value() / &rr))))
            }
            other => Err(Error::Unsupported(format!("cannot divide {other:?} exactly"))),
        }
    };
    match seq.generator() {
        Generator::Geometric { coeff, ratio } => CharSequence::geometric(g, coeff / &rr, ratio.clone()),
        Generator::AffineGeometric { offset, scale, ratio } => {
            CharSequence::affine_geometric(offset / &rr, scale / &rr, ratio.clone())
        }
        Generator::Periodic { prefix, cycle } => CharSequence::periodic(
            g,
            prefix.iter().map(divide).collect::<Result<_>>()?,
            cycle.iter().map(divide).collect::<Result<_>>()?,
        ),
        Generator::Interleave(a, b) => CharSequence::interleave(&divide_rotations(a, r)?, &divide_rotations(b, r)?),
        Generator::Tail(inner, m) => Ok(divide_rotations(inner, r)?.tail(*m)),
        _ => Err(mismatch(format!("{} is not a sequence on the integers", seq.group()))),
    }
}

/// `(1/2ⁿ)` shifted by the least `t` with `2^t > m²`.
pub fn default_witness(m: u64) -> CharSequence {
    let mut t = 0u64;
    while (1u128 << t) <= (m as u128) * (m as u128) {
        t += 1;
    }
    CharSequence::geometric(GroupDescriptor::Integers, rat(1, 1), 2).expect("valid geometric").tail(t)
}

/// The strictly increasing chain `d₀ℤ < d₁ℤ < … < d_kℤ = ℤ`, with coset
/// representative `x_i = d_i` at step `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetPresentation {
    pub ambient: GroupDescriptor,
    pub levels: Vec<u64>,
}

impl CosetPresentation {
    pub fn new(levels: Vec<u64>) -> Result<Self> {
        if levels.len() < 2 || levels.last() != Some(&1) {
            return Err(Error::InvalidValue("a chain needs at least two levels ending at 1".into()));
        }
        for w in levels.windows(2) {
            if w[1] == 0 || w[0] <= w[1] || w[0] % w[1] != 0 {
                return Err(Error::InvalidValue(format!("{}Z < {}Z is not a proper finite-index step", w[0], w[1])));
            }
        }
        Ok(CosetPresentation { ambient: GroupDescriptor::Integers, levels })
    }

    pub fn subgroup(&self) -> u64 {
        self.levels[0]
    }

    /// `[X_{i+1} : X_i]` for every step.
    pub fn indices(&self) -> Vec<u64> {
        self.levels.windows(2).map(|w| w[0] / w[1]).collect()
    }

    /// Coset representatives of `H` in `X`.
    pub fn representatives(&self) -> Vec<u64> {
        (0..self.levels[0]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KCharacterization {
    pub chain: CosetPresentation,
    pub sequence: CharSequence,
    pub steps: Vec<String>,
}

/// One technical-lemma step: from `u` on `H = mℤ` (coordinates) with
/// `s_u(H) = H`, a one-to-one `v` on ℤ extending `u` with `s_v(ℤ) = mℤ`.
pub fn technical_step(m: u64, witness: &CharSequence, limits: &Limits) -> Result<CharSequence> {
    if m == 1 {
        return Ok(witness.clone());
    }
    if m == 0 {
        return Err(Error::InvalidValue("index 0".into()));
    }
    if witness.group() != &GroupDescriptor::Integers {
        return Err(mismatch(format!("witness lives on {}, not on coordinates of {m}Z", witness.group())));
    }
    match is_autochar_witness(&GroupDescriptor::Integers, witness, limits)? {
        Autochar::Confirmed { .. } => {}
        other => {
            return Err(Error::Precondition(format!("witness is not certified on its subgroup: {}", other.label())));
        }
    }
    let simple = witness.simplify();
    let Generator::Geometric { coeff, ratio } = simple.generator() else {
        return Err(Error::Unsupported("the witness must be a geometric sequence on the integers".into()));
    };
    // drop the prefix where ‖a_n‖ = |s|/qⁿ ≥ 1/m²
    let bound = rat(1, (m * m) as i64);
    let mut s = coeff.clone();
    let mut dropped = 0u64;
    while s.abs() >= bound {
        if dropped >= limits.horizon {
            return Err(Error::Precondition(format!(
                "‖u_n({m})‖ stays ≥ 1/{m}² through the horizon {}",
                limits.horizon
            )));
        }
        s /= int_rat(ratio.clone());
        dropped += 1;
    }
    let mb = int_rat(m);
    let offset = if s.is_positive() { rat(1, m as i64) } else { rat(m as i64 - 1, m as i64) };
    let v = CharSequence::affine_geometric(offset, &s / &mb, ratio.clone())?;
    // the closed form must agree with the claim, term by term
    for n in 0..64u64 {
        let a = CirclePoint::new(&s / int_rat(pow_big(ratio, n)));
        let b = claim_lift(&a, m)?;
        if v.nth(n) != Character::Rotation(CircleValue::Exact(b)) {
            return Err(Error::Internal(format!("closed form disagrees with the claim at n = {n}")));
        }
    }
    Ok(v)
}

/// A sequence `v` on ℤ with `s_v(ℤ) = mℤ`.
pub fn k_characterize_open_finite_index(
    m: u64,
    witness: Option<&CharSequence>,
    limits: &Limits,
) -> Result<KCharacterization> {
    if m == 1 {
        let u = witness.cloned().unwrap_or_else(|| default_witness(1));
        return Ok(KCharacterization {
            chain: CosetPresentation { ambient: GroupDescriptor::Integers, levels: vec![1] },
            sequence: u,
            steps: vec!["index 1: identity".into()],
        });
    }
    k_characterize_chain(&[m, 1], witness, limits)
}

/// Induction along a chain: each step divides the previous sequence by the
/// index and interleaves it with a fresh technical step.
pub fn k_characterize_chain(levels: &[u64], witness: Option<&CharSequence>, limits: &Limits) -> Result<KCharacterization> {
    let chain = CosetPresentation::new(levels.to_vec())?;
    let idx = chain.indices();
    let first = witness.cloned().unwrap_or_else(|| default_witness(idx[0]));
    let mut v = technical_step(idx[0], &first, limits)?;
    let mut steps = vec![format!("{}Z < {}Z: {v}", levels[0], levels[1])];
    for (i, &r) in idx.iter().enumerate().skip(1) {
        let lifted = divide_rotations(&v, r)?;
        let w = technical_step(r, &default_witness(r), limits)?;
        v = CharSequence::interleave(&lifted, &w)?;
        steps.push(format!("{}Z < {}Z: {w}", levels[i], levels[i + 1]));
    }
    Ok(KCharacterization { chain, sequence: v, steps })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KCheck {
    /// `k` in `[−bound, bound]` whose verdict disagrees with `m | k`.
    pub mismatches: Vec<i64>,
    pub undecided: Vec<i64>,
    pub one_to_one: bool,
    pub nonzero: bool,
}

impl KCheck {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.undecided.is_empty() && self.one_to_one && self.nonzero
    }
}

impl KCharacterization {
    /// Checks `member(k) = ProvenIn ⇔ m | k` for `|k| ≤ bound`, and that the
    /// first `window` terms are distinct and non-zero.
    pub fn verify(&self, bound: i64, window: usize, limits: &Limits) -> Result<KCheck> {
        let m = self.chain.subgroup() as i64;
        let g = GroupDescriptor::Integers;
        let mut mismatches = Vec::new();
        let mut undecided = Vec::new();
        for k in -bound..=bound {
            let v = member(&g, &self.sequence, &Element::Integer(k.into()), limits)?;
            if v.is_undecided() {
                undecided.push(k);
            } else if v.is_in() != (k % m == 0) {
                mismatches.push(k);
            }
        }
        let terms = self.sequence.prefix_terms(window);
        let nonzero = terms.iter().all(|c| !c.is_zero());
        let one_to_one = terms.iter().collect::<HashSet<_>>().len() == terms.len();
        Ok(KCheck { mismatches, undecided, one_to_one, nonzero })
    }
}

/// `X/F` with the projection `x ↦ (x·V)ᵢ mod sᵢ` read off a Smith form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub group: FiniteAbelian,
    pub ambient: FiniteAbelian,
    /// Columns of `V` kept for the non-trivial invariant factors.
    columns: Vec<Vec<i128>>,
}

impl Quotient {
    pub fn new(ambient: &FiniteAbelian, f: &FiniteSubgroup) -> Result<Self> {
        if f.group() != ambient {
            return Err(mismatch(format!("subgroup of {} used in {ambient}", f.group())));
        }
        let r = ambient.rank();
        if r == 0 {
            return Ok(Quotient { group: FiniteAbelian::trivial(), ambient: ambient.clone(), columns: Vec::new() });
        }
        let mut rows: Matrix = (0..r)
            .map(|i| (0..r).map(|j| if i == j { ambient.factors()[i] as i128 } else { 0 }).collect())
            .collect();
        rows.extend(f.generators().into_iter().map(|g| g.into_iter().map(i128::from).collect::<Vec<_>>()));
        let (diag, v) = smith_normal_form(&rows, r)?;
        let mut factors = Vec::new();
        let mut columns = Vec::new();
        for (i, s) in diag.iter().enumerate() {
            if *s > 1 {
                factors.push(*s as u64);
                columns.push((0..r).map(|j| v[j][i]).collect());
            }
        }
        let group = if factors.is_empty() { FiniteAbelian::trivial() } else { FiniteAbelian::new(factors)? };
        Ok(Quotient { group, ambient: ambient.clone(), columns })
    }

    pub fn project(&self, x: &[u64]) -> Vec<u64> {
        self.columns
            .iter()
            .zip(self.group.factors())
            .map(|(col, &s)| {
                let t: i128 = col.iter().zip(x).map(|(c, xi)| c * *xi as i128).sum();
                t.rem_euclid(s as i128) as u64
            })
            .collect()
    }

    /// The character `χ ∘ π` of the ambient group.
    pub fn pull_back(&self, chi: &[u64]) -> Vec<u64> {
        self.ambient
            .factors()
            .iter()
            .enumerate()
            .map(|(j, &d)| {
                let mut acc = BigRational::zero();
                for ((col, &s), &c) in self.columns.iter().zip(self.group.factors()).zip(chi) {
                    acc += BigRational::new(BigInt::from(c as i128 * col[j]), BigInt::from(s));
                }
                let t = (acc * int_rat(d)).to_integer();
                let d = BigInt::from(d);
                ((t % &d + &d) % &d).to_u64().expect("residue fits")
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientLift {
    pub quotient: Quotient,
    pub sequence: CharSequence,
}

/// `v_n = u_n ∘ π` for `u` on `X/F`.
pub fn quotient_lift(quotient: &Quotient, u: &CharSequence, cap: u64) -> Result<QuotientLift> {
    quotient.ambient.check_cap(cap)?;
    let qg = GroupDescriptor::Finite(quotient.group.clone());
    if u.group() != &qg {
        return Err(mismatch(format!("sequence lives on {}, not on the quotient {qg}", u.group())));
    }
    let target = GroupDescriptor::Finite(quotient.ambient.clone());
    Ok(QuotientLift { quotient: quotient.clone(), sequence: pull_back_seq(quotient, u, &target)? })
}

fn pull_back_seq(q: &Quotient, u: &CharSequence, target: &GroupDescriptor) -> Result<CharSequence> {
    let pull = |c: &Character| -> Result<Character> {
        match c {
            Character::Residues(r) => Ok(Character::Residues(q.pull_back(r))),
            other => Err(mismatch(format!("{other:?} is not a finite character"))),
        }
    };
    match u.generator() {
        Generator::Periodic { prefix, cycle } => CharSequence::periodic(
            target.clone(),
            prefix.iter().map(pull).collect::<Result<_>>()?,
            cycle.iter().map(pull).collect::<Result<_>>()?,
        ),
        Generator::Interleave(a, b) => {
            CharSequence::interleave(&pull_back_seq(q, a, target)?, &pull_back_seq(q, b, target)?)
        }
        Generator::Tail(inner, m) => Ok(pull_back_seq(q, inner, target)?.tail(*m)),
        _ => Err(Error::Unsupported("only periodic sequences live on finite groups".into())),
    }
}

/// Human-readable presentation of a quotient map.
pub fn describe_quotient(q: &Quotient) -> String {
    let gens: Vec<String> = (0..q.ambient.rank())
        .map(|i| {
            let mut e = vec![0u64; q.ambient.rank()];
            e[i] = 1;
            format!("{} -> {}", fmt_tuple(&e), fmt_tuple(&q.project(&e)))
        })
        .collect();
    format!("{} / F = {}; {}", q.ambient, q.group, gens.join(", "))
}

/// The enumeration `1, −1, 2, −2, …` of the non-zero characters of 𝕋.
pub fn dense_enum_zero_characterizer() -> CharSequence {
    CharSequence::integer_enumeration()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_sequence;
    use crate::membership::{s_v_finite, Certificate, Verdict};
    use crate::radicals::{radical_finite_seq, RadicalPresentation};
    use proptest::prelude::*;

    fn pt(a: i64, b: i64) -> CirclePoint {
        CirclePoint::from_ratio(a, b)
    }

    #[test]
    fn claim_lift_examples() {
        assert_eq!(claim_lift(&pt(1, 5), 2).unwrap(), pt(3, 5));
        assert_eq!(claim_lift(&pt(0, 1), 3).unwrap(), pt(1, 3));
        assert_eq!(claim_lift(&pt(24, 25), 5).unwrap(), pt(99, 125));
        assert!(matches!(claim_lift(&pt(1, 3), 2), Err(Error::Precondition(_))));
        assert!(matches!(claim_lift(&pt(0, 1), 1), Err(Error::InvalidValue(_))));
    }

    proptest! {
        #[test]
        fn claim_lift_postcondition(m in 2u64..12, num in -1000i64..1000) {
            // a ranges over [−1/m², 1/m²]
            let a = CirclePoint::new(rat(num, 1000 * (m * m) as i64));
            let b = claim_lift(&a, m).unwrap();
            prop_assert_eq!(b.mul_int(&BigInt::from(m)), a);
            for k in 1..m {
                prop_assert!(b.mul_int(&BigInt::from(k)).norm() > rat(1, (m * m) as i64));
            }
        }

        #[test]
        fn quotient_commutes(
            factors in prop_oneof![Just(vec![4]), Just(vec![2, 4]), Just(vec![2, 6]), Just(vec![3, 3]), Just(vec![2, 2, 4])],
            gen_seeds in proptest::collection::vec(0usize..1000, 0..3),
            chi_seeds in proptest::collection::vec(0usize..1000, 1..3),
        ) {
            let g = FiniteAbelian::new(factors).unwrap();
            let n = g.order() as usize;
            let gens: Vec<Vec<u64>> = gen_seeds.iter().map(|s| g.element_at(s % n)).collect();
            let f = FiniteSubgroup::generated_by(&g, &gens, 1000).unwrap();
            let q = Quotient::new(&g, &f).unwrap();
            prop_assert_eq!(q.group.order() * f.order(), g.order());
            let qn = q.group.order() as usize;
            let cycle: Vec<Character> =
                chi_seeds.iter().map(|s| Character::Residues(q.group.element_at(s % qn))).collect();
            let u = CharSequence::periodic(GroupDescriptor::Finite(q.group.clone()), vec![], cycle.clone()).unwrap();
            let lift = quotient_lift(&q, &u, 1000).unwrap();
            for x in g.elements(1000).unwrap() {
                let px = q.project(&x);
                prop_assert_eq!(f.contains(&x), px.iter().all(|&c| c == 0));
                for c in &cycle {
                    let Character::Residues(c) = c else { unreachable!() };
                    prop_assert_eq!(g.pairing(&q.pull_back(c), &x), q.group.pairing(c, &px));
                }
            }
            let sv = s_v_finite(&g, &lift.sequence, 1000).unwrap();
            let su = s_v_finite(&q.group, &u, 1000).unwrap();
            for x in g.elements(1000).unwrap() {
                prop_assert_eq!(sv.contains(&x), su.contains(&q.project(&x)));
            }
            let RadicalPresentation::Finite(rad) = radical_finite_seq(&g, &lift.sequence, 1000).unwrap().presentation else {
                unreachable!()
            };
            prop_assert!(rad.is_subset_of(&sv).unwrap());
        }
    }

    #[test]
    fn quotient_lift_examples() {
        let z4 = FiniteAbelian::cyclic(4).unwrap();
        let f = FiniteSubgroup::generated_by(&z4, &[vec![2]], 100).unwrap();
        let q = Quotient::new(&z4, &f).unwrap();
        assert_eq!(q.group.factors(), &[2]);
        let qg = GroupDescriptor::Finite(q.group.clone());
        let u = parse_sequence(&qg, "periodic([];[1])").unwrap();
        let lift = quotient_lift(&q, &u, 100).unwrap();
        assert_eq!(s_v_finite(&z4, &lift.sequence, 100).unwrap(), f);
        let zero = CharSequence::zero(qg).unwrap();
        let lift = quotient_lift(&q, &zero, 100).unwrap();
        assert!(s_v_finite(&z4, &lift.sequence, 100).unwrap().is_whole());

        let g = FiniteAbelian::new(vec![2, 4]).unwrap();
        let f = FiniteSubgroup::generated_by(&g, &[vec![0, 2]], 100).unwrap();
        let q = Quotient::new(&g, &f).unwrap();
        assert_eq!(q.group.factors(), &[2, 2]);
        let qg = GroupDescriptor::Finite(q.group.clone());
        let u = parse_sequence(&qg, "periodic([];[(1,0),(0,1)])").unwrap();
        let lift = quotient_lift(&q, &u, 100).unwrap();
        assert_eq!(s_v_finite(&g, &lift.sequence, 100).unwrap(), f);
        assert!(matches!(quotient_lift(&q, &u, 4), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn zero_summand_extension() {
        let h = GroupDescriptor::finite(vec![4]).unwrap();
        let z = GroupDescriptor::finite(vec![2]).unwrap();
        let prod = GroupDescriptor::product(h.clone(), z.clone()).unwrap();
        let u = parse_sequence(&h, "periodic([];[1])").unwrap();
        let w = extend_zero_on_summand(&u, &prod).unwrap();
        let l = Limits::default();
        for a in 0..4u64 {
            for b in 0..2u64 {
                let x = Element::pair(Element::Residues(vec![a]), Element::Residues(vec![b]));
                assert_eq!(member(&prod, &w, &x, &l).unwrap().is_in(), a == 0);
            }
        }
        let zero = CharSequence::zero(h.clone()).unwrap();
        let w0 = extend_zero_on_summand(&zero, &prod).unwrap();
        assert_eq!(w0.nth(5), Character::pair(Character::Residues(vec![0]), Character::Residues(vec![0])));

        let zprod = GroupDescriptor::product(GroupDescriptor::Integers, z).unwrap();
        let u = CharSequence::geometric(GroupDescriptor::Integers, rat(1, 1), 2).unwrap();
        let w = extend_zero_on_summand(&u, &zprod).unwrap();
        for k in -20i64..=20 {
            for b in 0..2u64 {
                let x = Element::pair(Element::Integer(k.into()), Element::Residues(vec![b]));
                assert!(member(&zprod, &w, &x, &l).unwrap().is_in());
            }
        }
        assert!(matches!(extend_zero_on_summand(&u, &prod), Err(Error::DescriptorMismatch(_))));
    }

    #[test]
    fn prime_index_extension() {
        let l = Limits::default();
        let u = CharSequence::geometric(GroupDescriptor::Integers, rat(1, 1), 2).unwrap();
        for p in [2u64, 3] {
            let ext = extend_prime_index(&u, p, PrimeIndexAmbient::Integers).unwrap();
            assert_eq!(ext.branch, ExtensionBranch::Divided);
            for k in -100i64..=100 {
                let x = Element::Integer(k.into());
                assert!(member(&GroupDescriptor::Integers, &ext.output, &x, &l).unwrap().is_in());
                assert!(member(&GroupDescriptor::Integers, &ext.extension, &x, &l).unwrap().is_in());
            }
            // u_n agrees with the witness on pℤ
            for n in 0..20 {
                let (Character::Rotation(a), Character::Rotation(b)) = (ext.extension.nth(n), u.nth(n)) else {
                    unreachable!()
                };
                assert_eq!(a.mul_int(&BigInt::from(p)), b);
            }
        }
        assert!(matches!(extend_prime_index(&u, 4, PrimeIndexAmbient::Integers), Err(Error::InvalidValue(_))));
        assert!(matches!(extend_prime_index(&u, 2, PrimeIndexAmbient::Summand), Err(Error::Precondition(_))));
        let zero = CharSequence::zero(GroupDescriptor::Integers).unwrap();
        let ext = extend_prime_index(&zero, 2, PrimeIndexAmbient::Integers).unwrap();
        assert_eq!(ext.branch, ExtensionBranch::ZeroAtX);
        assert_eq!(ext.output.is_eventually_null(), Some(true));
    }

    #[test]
    fn open_finite_index_examples() {
        let l = Limits::default();
        let k = k_characterize_open_finite_index(2, None, &l).unwrap();
        let g = GroupDescriptor::Integers;
        assert!(member(&g, &k.sequence, &Element::Integer(1.into()), &l).unwrap().is_not_in());
        assert!(member(&g, &k.sequence, &Element::Integer(2.into()), &l).unwrap().is_in());
        assert!(k.verify(1000, 1000, &l).unwrap().passed());
        for m in [3u64, 5, 7] {
            let k = k_characterize_open_finite_index(m, None, &l).unwrap();
            assert!(k.verify(200, 1000, &l).unwrap().passed(), "m = {m}");
        }
        let u = default_witness(1);
        assert_eq!(k_characterize_open_finite_index(1, Some(&u), &l).unwrap().sequence, u);
    }

    #[test]
    fn chain_induction() {
        let l = Limits::default();
        let k = k_characterize_chain(&[6, 2, 1], None, &l).unwrap();
        assert_eq!(k.steps.len(), 2);
        let check = k.verify(1000, 1000, &l).unwrap();
        assert!(check.passed(), "{check:?}");
        let k = k_characterize_chain(&[12, 4, 2, 1], None, &l).unwrap();
        assert!(k.verify(300, 1000, &l).unwrap().passed());
        assert!(k_characterize_chain(&[6, 4, 1], None, &l).is_err());
    }

    #[test]
    fn witness_checks() {
        let l = Limits::default();
        let periodic = parse_sequence(&GroupDescriptor::Integers, "periodic([];[1/2])").unwrap();
        assert!(matches!(technical_step(2, &periodic, &l), Err(Error::Precondition(_))));
        // a large coefficient forces a prefix drop
        let big = CharSequence::geometric(GroupDescriptor::Integers, rat(5, 1), 2).unwrap();
        let v = technical_step(3, &big, &l).unwrap();
        assert_eq!(v.generator(), &Generator::AffineGeometric { offset: rat(1, 3), scale: rat(5, 192), ratio: 2.into() });
        let short = Limits { horizon: 2, ..Limits::default() };
        assert!(matches!(technical_step(3, &big, &short), Err(Error::Precondition(_))));
        let neg = CharSequence::geometric(GroupDescriptor::Integers, rat(-1, 1), 3).unwrap();
        let v = technical_step(2, &neg, &l).unwrap();
        let check = KCharacterization {
            chain: CosetPresentation::new(vec![2, 1]).unwrap(),
            sequence: v,
            steps: Vec::new(),
        };
        assert!(check.verify(100, 200, &l).unwrap().passed());
    }

    #[test]
    fn dense_enumeration_escapes() {
        let l = Limits::default();
        let s = dense_enum_zero_characterizer();
        let g = GroupDescriptor::Circle;
        for q in 2i64..30 {
            for a in 1..q {
                let x = Element::Circle(CircleValue::Exact(pt(a, q)));
                let Verdict::ProvenNotIn(Certificate::Escape { escapes_t_plus, .. }) = member(&g, &s, &x, &l).unwrap()
                else {
                    panic!("{a}/{q} must escape");
                };
                assert!(escapes_t_plus);
            }
        }
        assert!(member(&g, &s, &Element::Circle(CircleValue::zero()), &l).unwrap().is_in());
    }
}
