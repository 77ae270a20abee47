//! Finitely presented infinite sequences of characters.

pub mod recurrence;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{int_rat, lcm_u64, pow_big};
use crate::error::{mismatch, Error, Result};
use crate::groups::circle::{CirclePoint, CircleValue};
use crate::groups::padic::PAdicRational;
use crate::groups::{Character, GroupDescriptor};
use recurrence::RecurrenceShape;

/// How the terms of a sequence are produced.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Generator {
    /// `prefix` followed by `cycle` repeated forever; any group.
    Periodic { prefix: Vec<Character>, cycle: Vec<Character> },
    /// `v_n = Σ cᵢ v_{n−i}` with integer data; 𝕋 only.
    Recurrence { coeffs: Vec<BigInt>, init: Vec<BigInt> },
    /// `v_n = n!`; 𝕋 only.
    Factorial,
    /// `c·qⁿ` on 𝕋 (integer `c`) and on ℚ_p, `c/qⁿ` on ℤ.
    Geometric { coeff: BigRational, ratio: BigInt },
    /// `offset + scale/qⁿ` on ℤ.
    AffineGeometric { offset: BigRational, scale: BigRational, ratio: BigInt },
    /// `1/(n+1)` on ℝ.
    Harmonic,
    /// `1, −1, 2, −2, …` on 𝕋.
    IntegerEnumeration,
    /// `w_{2n} = u_n`, `w_{2n+1} = v_n`.
    Interleave(Box<CharSequence>, Box<CharSequence>),
    /// `(v_{n+m})_n`.
    Tail(Box<CharSequence>, u64),
    /// `(u_n, w_n)` on the product of the two groups.
    Pair(Box<CharSequence>, Box<CharSequence>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharSequence {
    group: GroupDescriptor,
    generator: Generator,
}

/// The characters occurring finitely often, when decided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gamma0 {
    Empty,
    Infinite,
    FiniteNonempty(Vec<Character>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SupportAnalysis {
    Decided { gamma_inf: Vec<Character>, gamma0: Gamma0 },
    Undecidable { reason: String },
}

impl SupportAnalysis {
    fn decided(gamma_inf: BTreeSet<Character>, gamma0: Gamma0) -> Self {
        SupportAnalysis::Decided { gamma_inf: gamma_inf.into_iter().collect(), gamma0 }
    }

    fn finitely_many_to_one() -> Self {
        SupportAnalysis::Decided { gamma_inf: Vec::new(), gamma0: Gamma0::Infinite }
    }

    pub fn gamma_inf(&self) -> Option<&[Character]> {
        match self {
            SupportAnalysis::Decided { gamma_inf, .. } => Some(gamma_inf),
            SupportAnalysis::Undecidable { .. } => None,
        }
    }

    pub fn gamma0(&self) -> Option<&Gamma0> {
        match self {
            SupportAnalysis::Decided { gamma0, .. } => Some(gamma0),
            SupportAnalysis::Undecidable { .. } => None,
        }
    }
}

fn require(group: &GroupDescriptor, want: &[GroupKind], what: &str) -> Result<()> {
    let kind = match group {
        GroupDescriptor::Circle => GroupKind::Circle,
        GroupDescriptor::Integers => GroupKind::Integers,
        GroupDescriptor::Reals => GroupKind::Reals,
        GroupDescriptor::PAdic(_) => GroupKind::PAdic,
        _ => GroupKind::Other,
    };
    if want.contains(&kind) {
        Ok(())
    } else {
        Err(mismatch(format!("{what} sequences are not defined on {group}")))
    }
}

#[derive(PartialEq)]
enum GroupKind {
    Circle,
    Integers,
    Reals,
    PAdic,
    Other,
}

impl CharSequence {
    pub fn new(group: GroupDescriptor, generator: Generator) -> Result<Self> {
        group.validate()?;
        match &generator {
            Generator::Periodic { prefix, cycle } => {
                if cycle.is_empty() {
                    return Err(Error::InvalidValue("periodic sequence needs a nonempty cycle".into()));
                }
                for c in prefix.iter().chain(cycle) {
                    c.validate(&group)?;
                }
            }
            Generator::Recurrence { coeffs, init } => {
                require(&group, &[GroupKind::Circle], "recurrence")?;
                if coeffs.is_empty() || coeffs.len() != init.len() {
                    return Err(Error::InvalidValue(
                        "recurrence needs r ≥ 1 coefficients and r initial values".into(),
                    ));
                }
            }
            Generator::Factorial => require(&group, &[GroupKind::Circle], "factorial")?,
            Generator::IntegerEnumeration => require(&group, &[GroupKind::Circle], "enumeration")?,
            Generator::Harmonic => require(&group, &[GroupKind::Reals], "harmonic")?,
            Generator::Geometric { coeff, ratio } => {
                require(&group, &[GroupKind::Circle, GroupKind::Integers, GroupKind::PAdic], "geometric")?;
                check_ratio(ratio)?;
                if group == GroupDescriptor::Circle && !coeff.is_integer() {
                    return Err(Error::InvalidValue("geometric coefficient on T must be an integer".into()));
                }
            }
            Generator::AffineGeometric { ratio, .. } => {
                require(&group, &[GroupKind::Integers], "affine geometric")?;
                check_ratio(ratio)?;
            }
            Generator::Interleave(u, v) => {
                if u.group != group || v.group != group {
                    return Err(mismatch(format!(
                        "interleave of sequences on {} and {} into {group}",
                        u.group, v.group
                    )));
                }
            }
            Generator::Tail(inner, _) => {
                if inner.group != group {
                    return Err(mismatch("tail changes the group"));
                }
            }
            Generator::Pair(u, w) => {
                let want = GroupDescriptor::Product(Box::new(u.group.clone()), Box::new(w.group.clone()));
                if want != group {
                    return Err(mismatch(format!("pair of sequences lives on {want}, not {group}")));
                }
            }
        }
        Ok(CharSequence { group, generator })
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn periodic(group: GroupDescriptor, prefix: Vec<Character>, cycle: Vec<Character>) -> Result<Self> {
        Self::new(group, Generator::Periodic { prefix, cycle })
    }

    pub fn constant(group: GroupDescriptor, chi: Character) -> Result<Self> {
        Self::periodic(group, Vec::new(), vec![chi])
    }

    pub fn zero(group: GroupDescriptor) -> Result<Self> {
        let z = Character::zero(&group)?;
        Self::constant(group, z)
    }

    pub fn factorial() -> Self {
        CharSequence { group: GroupDescriptor::Circle, generator: Generator::Factorial }
    }

    pub fn harmonic() -> Self {
        CharSequence { group: GroupDescriptor::Reals, generator: Generator::Harmonic }
    }

    pub fn integer_enumeration() -> Self {
        CharSequence { group: GroupDescriptor::Circle, generator: Generator::IntegerEnumeration }
    }

    pub fn recurrence(coeffs: Vec<BigInt>, init: Vec<BigInt>) -> Result<Self> {
        Self::new(GroupDescriptor::Circle, Generator::Recurrence { coeffs, init })
    }

    pub fn fibonacci() -> Self {
        Self::recurrence(vec![BigInt::one(), BigInt::one()], vec![BigInt::one(), BigInt::one()])
            .expect("valid recurrence")
    }

    pub fn geometric(group: GroupDescriptor, coeff: BigRational, ratio: impl Into<BigInt>) -> Result<Self> {
        Self::new(group, Generator::Geometric { coeff, ratio: ratio.into() })
    }

    pub fn affine_geometric(offset: BigRational, scale: BigRational, ratio: impl Into<BigInt>) -> Result<Self> {
        Self::new(
            GroupDescriptor::Integers,
            Generator::AffineGeometric { offset, scale, ratio: ratio.into() },
        )
    }

    pub fn interleave(u: &CharSequence, v: &CharSequence) -> Result<Self> {
        if u.group != v.group {
            return Err(mismatch(format!("cannot interleave sequences on {} and {}", u.group, v.group)));
        }
        Self::new(u.group.clone(), Generator::Interleave(Box::new(u.clone()), Box::new(v.clone())))
    }

    pub fn tail(&self, m: u64) -> Self {
        CharSequence { group: self.group.clone(), generator: Generator::Tail(Box::new(self.clone()), m) }
    }

    pub fn pair(u: &CharSequence, w: &CharSequence) -> Result<Self> {
        let group = GroupDescriptor::product(u.group.clone(), w.group.clone())?;
        Self::new(group, Generator::Pair(Box::new(u.clone()), Box::new(w.clone())))
    }

    /// The `n`-th character.
    pub fn nth(&self, n: u64) -> Character {
        match &self.generator {
            Generator::Periodic { prefix, cycle } => {
                let n = n as usize;
                if n < prefix.len() {
                    prefix[n].clone()
                } else {
                    cycle[(n - prefix.len()) % cycle.len()].clone()
                }
            }
            Generator::Recurrence { coeffs, init } => {
                let r = coeffs.len();
                if (n as usize) < r {
                    return Character::Multiplier(init[n as usize].clone());
                }
                let mut window: Vec<BigInt> = init.clone();
                for _ in r as u64..=n {
                    let next = recurrence::step(coeffs, &window);
                    window.remove(0);
                    window.push(next);
                }
                Character::Multiplier(window[r - 1].clone())
            }
            Generator::Factorial => Character::Multiplier((1..=n).map(BigInt::from).product()),
            Generator::Geometric { coeff, ratio } => self.geometric_term(coeff, ratio, n),
            Generator::AffineGeometric { offset, scale, ratio } => {
                let q = int_rat(pow_big(ratio, n));
                Character::Rotation(CircleValue::Exact(CirclePoint::new(offset + scale / q)))
            }
            Generator::Harmonic => Character::Scale(BigRational::new(BigInt::one(), BigInt::from(n + 1))),
            Generator::IntegerEnumeration => {
                let k = BigInt::from(n / 2 + 1);
                Character::Multiplier(if n % 2 == 0 { k } else { -k })
            }
            Generator::Interleave(u, v) => {
                if n % 2 == 0 {
                    u.nth(n / 2)
                } else {
                    v.nth(n / 2)
                }
            }
            Generator::Tail(inner, m) => inner.nth(n + m),
            Generator::Pair(u, w) => Character::pair(u.nth(n), w.nth(n)),
        }
    }

    fn geometric_term(&self, coeff: &BigRational, ratio: &BigInt, n: u64) -> Character {
        let qn = int_rat(pow_big(ratio, n));
        match &self.group {
            GroupDescriptor::Circle => Character::Multiplier((coeff * qn).to_integer()),
            GroupDescriptor::Integers => Character::Rotation(CircleValue::Exact(CirclePoint::new(coeff / qn))),
            GroupDescriptor::PAdic(p) => {
                Character::PAdic(PAdicRational::new(*p, coeff * qn).expect("validated prime"))
            }
            _ => unreachable!("validated in CharSequence::new"),
        }
    }

    /// `v_0, …, v_{count−1}`, computed incrementally where that is cheaper.
    pub fn prefix_terms(&self, count: usize) -> Vec<Character> {
        match &self.generator {
            Generator::Recurrence { coeffs, init } => recurrence::terms(coeffs, init, count)
                .into_iter()
                .map(Character::Multiplier)
                .collect(),
            Generator::Factorial => {
                let mut acc = BigInt::one();
                (0..count)
                    .map(|n| {
                        if n > 0 {
                            acc *= n;
                        }
                        Character::Multiplier(acc.clone())
                    })
                    .collect()
            }
            Generator::Tail(inner, m) => {
                let mut all = inner.prefix_terms(count + *m as usize);
                all.split_off(*m as usize)
            }
            Generator::Interleave(u, v) => {
                let a = u.prefix_terms(count.div_ceil(2));
                let b = v.prefix_terms(count / 2);
                (0..count).map(|n| if n % 2 == 0 { a[n / 2].clone() } else { b[n / 2].clone() }).collect()
            }
            Generator::Pair(u, w) => u
                .prefix_terms(count)
                .into_iter()
                .zip(w.prefix_terms(count))
                .map(|(a, b)| Character::pair(a, b))
                .collect(),
            _ => (0..count as u64).map(|n| self.nth(n)).collect(),
        }
    }

    /// Integer values of a 𝕋-sequence, or `None` on other groups.
    pub fn integer_terms(&self, count: usize) -> Option<Vec<BigInt>> {
        if self.group != GroupDescriptor::Circle {
            return None;
        }
        self.prefix_terms(count)
            .into_iter()
            .map(|c| match c {
                Character::Multiplier(n) => Some(n),
                _ => None,
            })
            .collect()
    }

    /// Pushes tails into the generators that absorb them; pointwise equal to
    /// `self`.
    pub fn simplify(&self) -> CharSequence {
        let generator = match &self.generator {
            Generator::Interleave(u, v) => Generator::Interleave(Box::new(u.simplify()), Box::new(v.simplify())),
            Generator::Pair(u, w) => Generator::Pair(Box::new(u.simplify()), Box::new(w.simplify())),
            Generator::Tail(inner, m) => return inner.simplify().drop_front(*m),
            g => g.clone(),
        };
        CharSequence { group: self.group.clone(), generator }
    }

    fn drop_front(&self, m: u64) -> CharSequence {
        if m == 0 {
            return self.clone();
        }
        let group = self.group.clone();
        let generator = match &self.generator {
            Generator::Periodic { prefix, cycle } => {
                let m = m as usize;
                if m <= prefix.len() {
                    Generator::Periodic { prefix: prefix[m..].to_vec(), cycle: cycle.clone() }
                } else {
                    let k = (m - prefix.len()) % cycle.len();
                    let mut rotated = cycle[k..].to_vec();
                    rotated.extend_from_slice(&cycle[..k]);
                    Generator::Periodic { prefix: Vec::new(), cycle: rotated }
                }
            }
            Generator::Recurrence { coeffs, init } => {
                let r = coeffs.len();
                let all = recurrence::terms(coeffs, init, m as usize + r);
                Generator::Recurrence { coeffs: coeffs.clone(), init: all[m as usize..].to_vec() }
            }
            Generator::Geometric { coeff, ratio } => {
                let qm = int_rat(pow_big(ratio, m));
                let coeff = if group == GroupDescriptor::Integers { coeff / qm } else { coeff * qm };
                Generator::Geometric { coeff, ratio: ratio.clone() }
            }
            Generator::AffineGeometric { offset, scale, ratio } => Generator::AffineGeometric {
                offset: offset.clone(),
                scale: scale / int_rat(pow_big(ratio, m)),
                ratio: ratio.clone(),
            },
            Generator::Interleave(u, v) => {
                let k = m / 2;
                if m % 2 == 0 {
                    Generator::Interleave(Box::new(u.drop_front(k)), Box::new(v.drop_front(k)))
                } else {
                    Generator::Interleave(Box::new(v.drop_front(k)), Box::new(u.drop_front(k + 1)))
                }
            }
            Generator::Pair(u, w) => Generator::Pair(Box::new(u.drop_front(m)), Box::new(w.drop_front(m))),
            Generator::Tail(inner, a) => return inner.drop_front(a + m),
            Generator::Factorial | Generator::Harmonic | Generator::IntegerEnumeration => {
                Generator::Tail(Box::new(self.clone()), m)
            }
        };
        CharSequence { group, generator }
    }

    /// Eventually periodic presentation `(prefix, cycle)` when the structure
    /// certifies one.
    pub fn eventually_periodic_form(&self) -> Option<(Vec<Character>, Vec<Character>)> {
        let (pre, per) = self.periodic_shape()?;
        let terms = self.prefix_terms(pre + per);
        let cycle = terms[pre..].to_vec();
        let mut prefix = terms;
        prefix.truncate(pre);
        Some((prefix, cycle))
    }

    /// `(preperiod, period)` bounds certified from the structure.
    fn periodic_shape(&self) -> Option<(usize, usize)> {
        match &self.generator {
            Generator::Periodic { prefix, cycle } => Some((prefix.len(), cycle.len())),
            Generator::Recurrence { coeffs, init } => match recurrence::analyze(coeffs, init)? {
                RecurrenceShape::EventuallyPeriodic { prefix, cycle } => Some((prefix.len(), cycle.len())),
                _ => None,
            },
            Generator::Geometric { coeff, .. } if coeff.is_zero() => Some((0, 1)),
            Generator::AffineGeometric { scale, .. } if scale.is_zero() => Some((0, 1)),
            Generator::Interleave(u, v) => {
                let (pu, cu) = u.periodic_shape()?;
                let (pv, cv) = v.periodic_shape()?;
                Some((2 * pu.max(pv), 2 * lcm_u64(cu as u64, cv as u64) as usize))
            }
            Generator::Tail(inner, m) => {
                let (p, c) = inner.periodic_shape()?;
                Some((p.saturating_sub(*m as usize), c))
            }
            Generator::Pair(u, w) => {
                let (pu, cu) = u.periodic_shape()?;
                let (pw, cw) = w.periodic_shape()?;
                Some((pu.max(pw), lcm_u64(cu as u64, cw as u64) as usize))
            }
            _ => None,
        }
    }

    /// The partition of the occurring characters into those occurring
    /// infinitely often and those occurring finitely often.
    pub fn support_partition(&self) -> SupportAnalysis {
        if let Some((prefix, cycle)) = self.eventually_periodic_form() {
            return periodic_support(&prefix, &cycle);
        }
        match &self.generator {
            Generator::Factorial | Generator::Harmonic | Generator::IntegerEnumeration => {
                SupportAnalysis::finitely_many_to_one()
            }
            // coefficient and scale are nonzero here, else the form above applies
            Generator::Geometric { .. } | Generator::AffineGeometric { .. } => {
                SupportAnalysis::finitely_many_to_one()
            }
            Generator::Recurrence { coeffs, init } => match recurrence::analyze(coeffs, init) {
                Some(RecurrenceShape::Dominant { .. }) | Some(RecurrenceShape::Polynomial { .. }) => {
                    SupportAnalysis::finitely_many_to_one()
                }
                _ => SupportAnalysis::Undecidable {
                    reason: "recurrence is neither dominant, polynomial, nor eventually periodic \
                             within the search budget"
                        .into(),
                },
            },
            Generator::Interleave(u, v) => combine_interleave(u.support_partition(), v.support_partition()),
            Generator::Tail(inner, m) => {
                let simple = self.simplify();
                if !matches!(simple.generator, Generator::Tail(..)) {
                    return simple.support_partition();
                }
                match inner.support_partition() {
                    SupportAnalysis::Decided { gamma0: Gamma0::FiniteNonempty(_), .. } => {
                        SupportAnalysis::Undecidable {
                            reason: format!("tail by {m} of a sequence with finite Γ⁰ and no closed form"),
                        }
                    }
                    other => other,
                }
            }
            Generator::Pair(u, w) => {
                let (su, sw) = (u.support_partition(), w.support_partition());
                // each pair occurs at most as often as either coordinate
                let fmo = |s: &SupportAnalysis| {
                    matches!(s, SupportAnalysis::Decided { gamma_inf, gamma0: Gamma0::Infinite } if gamma_inf.is_empty())
                };
                if fmo(&su) || fmo(&sw) {
                    SupportAnalysis::finitely_many_to_one()
                } else {
                    SupportAnalysis::Undecidable {
                        reason: "paired sequence mixes periodic and aperiodic structure".into(),
                    }
                }
            }
            Generator::Periodic { .. } => unreachable!("periodic form always exists"),
        }
    }

    /// Drops a finite Γ⁰ part so the support is `Empty` or `Infinite`; the
    /// result characterizes the same subgroup.
    pub fn normalize_dag(&self) -> Result<CharSequence> {
        match self.support_partition() {
            SupportAnalysis::Undecidable { reason } => Err(Error::Undecidable(reason)),
            SupportAnalysis::Decided { gamma0: Gamma0::FiniteNonempty(_), gamma_inf } => {
                let (prefix, cycle) = self
                    .eventually_periodic_form()
                    .ok_or_else(|| Error::Internal("finite Γ⁰ without a periodic form".into()))?;
                let keep: Vec<Character> =
                    prefix.into_iter().filter(|c| gamma_inf.contains(c)).collect();
                Self::periodic(self.group.clone(), keep, cycle)
            }
            SupportAnalysis::Decided { .. } => Ok(self.clone()),
        }
    }

    /// True when only finitely many terms are nonzero.
    pub fn is_eventually_null(&self) -> Option<bool> {
        match self.support_partition() {
            SupportAnalysis::Decided { gamma0: Gamma0::Infinite, .. } => Some(false),
            SupportAnalysis::Decided { gamma_inf, .. } => Some(gamma_inf.iter().all(Character::is_zero)),
            SupportAnalysis::Undecidable { .. } => None,
        }
    }
}

fn check_ratio(q: &BigInt) -> Result<()> {
    if q < &BigInt::from(2) {
        return Err(Error::InvalidValue(format!("geometric ratio {q} must be at least 2")));
    }
    Ok(())
}

fn periodic_support(prefix: &[Character], cycle: &[Character]) -> SupportAnalysis {
    let inf: BTreeSet<Character> = cycle.iter().cloned().collect();
    let fin: Vec<Character> = prefix
        .iter()
        .filter(|c| !inf.contains(c))
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let gamma0 = if fin.is_empty() { Gamma0::Empty } else { Gamma0::FiniteNonempty(fin) };
    SupportAnalysis::decided(inf, gamma0)
}

fn combine_interleave(a: SupportAnalysis, b: SupportAnalysis) -> SupportAnalysis {
    match (a, b) {
        (
            SupportAnalysis::Decided { gamma_inf: ia, gamma0: za },
            SupportAnalysis::Decided { gamma_inf: ib, gamma0: zb },
        ) => {
            let inf: BTreeSet<Character> = ia.into_iter().chain(ib).collect();
            let gamma0 = match (za, zb) {
                (Gamma0::Infinite, _) | (_, Gamma0::Infinite) => Gamma0::Infinite,
                (x, y) => {
                    let list = |z: Gamma0| match z {
                        Gamma0::FiniteNonempty(v) => v,
                        _ => Vec::new(),
                    };
                    let fin: BTreeSet<Character> =
                        list(x).into_iter().chain(list(y)).filter(|c| !inf.contains(c)).collect();
                    if fin.is_empty() {
                        Gamma0::Empty
                    } else {
                        Gamma0::FiniteNonempty(fin.into_iter().collect())
                    }
                }
            };
            SupportAnalysis::decided(inf, gamma0)
        }
        (SupportAnalysis::Undecidable { reason }, _) | (_, SupportAnalysis::Undecidable { reason }) => {
            SupportAnalysis::Undecidable { reason }
        }
    }
}

/// Standalone form of [`CharSequence::interleave`].
pub fn interleave(u: &CharSequence, v: &CharSequence) -> Result<CharSequence> {
    CharSequence::interleave(u, v)
}

/// Standalone form of [`CharSequence::tail`].
pub fn tail(seq: &CharSequence, m: u64) -> CharSequence {
    seq.tail(m)
}

/// `v_n` as an integer when `v_n` is a character of 𝕋.
pub fn multiplier(c: &Character) -> Option<&BigInt> {
    match c {
        Character::Multiplier(n) => Some(n),
        _ => None,
    }
}

/// gcd of a list; 0 for the empty or all-zero list.
pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::zero(), |acc, v| acc.gcd(v))
}
