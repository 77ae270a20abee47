//! Radicals `n_Γ(X) = ⋂_{χ∈Γ} ker χ` and `n_v(X) = n_{Γ_v}(X)`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::lcm_big;
use crate::error::{mismatch, Error, Result};
use crate::groups::circle::CircleValue;
use crate::groups::finite::{annihilator_finite, fmt_tuple, FiniteAbelian, FiniteSubgroup};
use crate::groups::{Character, GroupDescriptor};
use crate::sequences::{gcd_all, CharSequence, Generator};

/// Canonical presentation of a radical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RadicalPresentation {
    Finite(FiniteSubgroup),
    /// `𝕋[g] = {x : gx = 0}`; `g = 0` is all of 𝕋 and `g = 1` is `{0}`.
    Circle(BigInt),
    /// `dℤ`; `d = 0` is `{0}` and `d = 1` is ℤ.
    Integers(BigInt),
    /// Product of the radicals of the two coordinates.
    Product(Box<RadicalPresentation>, Box<RadicalPresentation>),
}

/// The argument establishing a radical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RadicalCertificate {
    /// Exhaustive kernel intersection over the listed characters.
    Enumerated { characters: Vec<String> },
    /// `g` divides every term because it divides the listed generating
    /// terms, and it is the gcd of those terms.
    Gcd { rule: String, terms: Vec<BigInt> },
    /// The lcm of the denominators of all occurring characters.
    DenominatorLcm { denominators: Vec<BigInt> },
    /// Denominators are unbounded, so only `0` is killed by every term.
    UnboundedDenominators { rule: String },
    /// Coordinatewise.
    Product(Box<RadicalCertificate>, Box<RadicalCertificate>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalResult {
    pub presentation: RadicalPresentation,
    pub certificate: RadicalCertificate,
}

impl fmt::Display for RadicalPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadicalPresentation::Finite(h) => h.fmt(f),
            RadicalPresentation::Circle(g) if g.is_zero() => f.write_str("T"),
            RadicalPresentation::Circle(g) if g.is_one() => f.write_str("{0}"),
            RadicalPresentation::Circle(g) => write!(f, "T[{g}]"),
            RadicalPresentation::Integers(d) if d.is_zero() => f.write_str("{0}"),
            RadicalPresentation::Integers(d) if d.is_one() => f.write_str("Z"),
            RadicalPresentation::Integers(d) => write!(f, "{d}Z"),
            RadicalPresentation::Product(a, b) => write!(f, "{a} x {b}"),
        }
    }
}

impl RadicalCertificate {
    /// Human-readable proof trace.
    pub fn trace(&self) -> Vec<String> {
        match self {
            RadicalCertificate::Enumerated { characters } => vec![format!(
                "kernel intersection over Γ = {{{}}}, checked on every element",
                characters.join(", ")
            )],
            RadicalCertificate::Gcd { rule, terms } => {
                let t: Vec<String> = terms.iter().map(BigInt::to_string).collect();
                vec![rule.clone(), format!("g = gcd({})", t.join(", "))]
            }
            RadicalCertificate::DenominatorLcm { denominators } => {
                let t: Vec<String> = denominators.iter().map(BigInt::to_string).collect();
                vec![format!("ker(p/q) = qZ; d = lcm({})", t.join(", "))]
            }
            RadicalCertificate::UnboundedDenominators { rule } => vec![rule.clone()],
            RadicalCertificate::Product(a, b) => {
                let mut out: Vec<String> = a.trace().into_iter().map(|s| format!("left: {s}")).collect();
                out.extend(b.trace().into_iter().map(|s| format!("right: {s}")));
                out
            }
        }
    }
}

/// `Γ^⊥` in a finite group.
pub fn radical_finite(group: &FiniteAbelian, gamma: &[Vec<u64>], cap: u64) -> Result<RadicalResult> {
    let sub = annihilator_finite(group, gamma, cap)?;
    let characters = gamma.iter().map(|c| fmt_tuple(c)).collect();
    Ok(RadicalResult {
        presentation: RadicalPresentation::Finite(sub),
        certificate: RadicalCertificate::Enumerated { characters },
    })
}

/// Every character occurring in a sequence on a finite group.
pub fn occurring_residues(seq: &CharSequence) -> Result<Vec<Vec<u64>>> {
    let (prefix, cycle) = seq
        .eventually_periodic_form()
        .ok_or_else(|| Error::Undecidable("sequence on a finite group without a periodic form".into()))?;
    let set: BTreeSet<Vec<u64>> = prefix
        .iter()
        .chain(&cycle)
        .map(|c| match c {
            Character::Residues(r) => Ok(r.clone()),
            _ => Err(mismatch("non-residue character on a finite group")),
        })
        .collect::<Result<_>>()?;
    Ok(set.into_iter().collect())
}

/// `n_v` for a sequence on a finite group.
pub fn radical_finite_seq(group: &FiniteAbelian, seq: &CharSequence, cap: u64) -> Result<RadicalResult> {
    if seq.group() != &GroupDescriptor::Finite(group.clone()) {
        return Err(mismatch(format!("sequence on {} used on {group}", seq.group())));
    }
    radical_finite(group, &occurring_residues(seq)?, cap)
}

fn gcd_rule(seq: &CharSequence) -> Result<(BigInt, String, Vec<BigInt>)> {
    let simple = seq.simplify();
    let int_terms = |cs: &[Character]| -> Vec<BigInt> {
        cs.iter()
            .map(|c| match c {
                Character::Multiplier(n) => n.clone(),
                _ => unreachable!("validated 𝕋 sequence"),
            })
            .collect()
    };
    match simple.generator() {
        Generator::Periodic { prefix, cycle } => {
            let terms: Vec<BigInt> = int_terms(prefix).into_iter().chain(int_terms(cycle)).collect();
            Ok((gcd_all(&terms), "every term is listed in the prefix or the cycle".into(), terms))
        }
        Generator::Recurrence { init, .. } => Ok((
            gcd_all(init),
            "each term is an integer combination of the initial values".into(),
            init.clone(),
        )),
        Generator::Factorial => Ok((BigInt::one(), "v_0 = 0! = 1".into(), vec![BigInt::one()])),
        Generator::Geometric { coeff, .. } => {
            let c = coeff.to_integer();
            Ok((c.abs(), "v_0 = c and every term c·qⁿ is a multiple of c".into(), vec![c]))
        }
        Generator::IntegerEnumeration => {
            Ok((BigInt::one(), "v_0 = 1".into(), vec![BigInt::one()]))
        }
        Generator::Tail(inner, m) => match inner.generator() {
            Generator::Factorial => {
                let f: BigInt = (1..=*m).map(BigInt::from).product();
                Ok((f.clone(), format!("v_{m} = {m}! divides every later factorial"), vec![f]))
            }
            Generator::IntegerEnumeration => {
                // both k and k+1 occur for k = ⌊m/2⌋ + 2
                let k = BigInt::from(m / 2 + 2);
                let terms = vec![k.clone(), k + 1];
                Ok((BigInt::one(), "two consecutive integers occur".into(), terms))
            }
            _ => Err(Error::Undecidable(format!("no gcd rule for {simple}"))),
        },
        Generator::Interleave(u, v) => {
            let (a, _, ta) = gcd_rule(u)?;
            let (b, _, tb) = gcd_rule(v)?;
            let terms: Vec<BigInt> = ta.into_iter().chain(tb).collect();
            Ok((a.gcd(&b), "gcd of the two interleaved sequences".into(), terms))
        }
        _ => Err(Error::Undecidable(format!("no gcd rule for {simple}"))),
    }
}

/// `n_v(𝕋) = 𝕋[g]` with `g` the gcd of all terms. Zero terms contribute
/// nothing; the all-zero sequence gives 𝕋.
pub fn radical_circle(seq: &CharSequence) -> Result<RadicalResult> {
    if seq.group() != &GroupDescriptor::Circle {
        return Err(mismatch(format!("radical_circle on a sequence over {}", seq.group())));
    }
    let (g, rule, terms) = gcd_rule(seq)?;
    Ok(RadicalResult {
        presentation: RadicalPresentation::Circle(g),
        certificate: RadicalCertificate::Gcd { rule, terms },
    })
}

enum Denominators {
    Bounded(BigInt, Vec<BigInt>),
    Unbounded(String),
}

fn denominators(seq: &CharSequence) -> Result<Denominators> {
    let simple = seq.simplify();
    let denom = |c: &Character| -> Result<BigInt> {
        match c {
            Character::Rotation(CircleValue::Exact(p)) => Ok(p.order()),
            Character::Rotation(CircleValue::Interval(_)) => Err(Error::Unsupported(
                "character with an interval value: certifying irrationality is out of scope".into(),
            )),
            _ => Err(mismatch("expected a character of Z")),
        }
    };
    match simple.generator() {
        Generator::Periodic { prefix, cycle } => {
            let ds: Vec<BigInt> = prefix.iter().chain(cycle).map(denom).collect::<Result<_>>()?;
            let d = ds.iter().fold(BigInt::one(), |acc, q| lcm_big(&acc, q));
            Ok(Denominators::Bounded(d, ds))
        }
        Generator::Geometric { coeff, .. } if coeff.is_zero() => {
            Ok(Denominators::Bounded(BigInt::one(), vec![BigInt::one()]))
        }
        Generator::Geometric { .. } => Ok(Denominators::Unbounded(
            "c/qⁿ with c ≠ 0 and q ≥ 2: denominators grow without bound".into(),
        )),
        Generator::AffineGeometric { offset, scale, .. } if scale.is_zero() => {
            let q = offset.denom().clone();
            Ok(Denominators::Bounded(q.clone(), vec![q]))
        }
        Generator::AffineGeometric { .. } => Ok(Denominators::Unbounded(
            "distinct rationals converging to a limit have unbounded denominators".into(),
        )),
        Generator::Interleave(u, v) => match (denominators(u)?, denominators(v)?) {
            (Denominators::Bounded(a, mut da), Denominators::Bounded(b, db)) => {
                da.extend(db);
                Ok(Denominators::Bounded(lcm_big(&a, &b), da))
            }
            (Denominators::Unbounded(r), _) | (_, Denominators::Unbounded(r)) => {
                Ok(Denominators::Unbounded(format!("one interleaved half: {r}")))
            }
        },
        _ => Err(Error::Undecidable(format!("no denominator analysis for {simple}"))),
    }
}

/// `n_v(ℤ) = dℤ`, `d` the lcm of all denominators (`d = 0` when unbounded).
pub fn radical_integers(seq: &CharSequence) -> Result<RadicalResult> {
    if seq.group() != &GroupDescriptor::Integers {
        return Err(mismatch(format!("radical_integers on a sequence over {}", seq.group())));
    }
    Ok(match denominators(seq)? {
        Denominators::Bounded(d, ds) => RadicalResult {
            presentation: RadicalPresentation::Integers(d),
            certificate: RadicalCertificate::DenominatorLcm { denominators: ds },
        },
        Denominators::Unbounded(rule) => RadicalResult {
            presentation: RadicalPresentation::Integers(BigInt::zero()),
            certificate: RadicalCertificate::UnboundedDenominators { rule },
        },
    })
}

/// Dispatches on the group of the sequence.
pub fn radical(seq: &CharSequence, cap: u64) -> Result<RadicalResult> {
    match seq.group() {
        GroupDescriptor::Finite(g) => radical_finite_seq(g, seq, cap),
        GroupDescriptor::Circle => radical_circle(seq),
        GroupDescriptor::Integers => radical_integers(seq),
        GroupDescriptor::Product(..) => radical_split_product(seq, cap),
        other => Err(Error::Unsupported(format!("radicals over {other} are not computed"))),
    }
}

/// Radical of a product sequence whose characters each vanish on one
/// factor: `interleave(pair(u, 0), pair(0, w))` or `pair(u, 0)`.
fn radical_split_product(seq: &CharSequence, cap: u64) -> Result<RadicalResult> {
    let GroupDescriptor::Product(ga, gb) = seq.group() else { unreachable!() };
    let is_zero_seq = |s: &CharSequence| s.is_eventually_null() == Some(true)
        && s.eventually_periodic_form().is_some_and(|(p, _)| p.iter().all(Character::is_zero));
    let whole = |g: &GroupDescriptor| -> Result<RadicalResult> {
        let z = CharSequence::zero(g.clone())?;
        radical(&z, cap)
    };
    let combine = |a: RadicalResult, b: RadicalResult| RadicalResult {
        presentation: RadicalPresentation::Product(Box::new(a.presentation), Box::new(b.presentation)),
        certificate: RadicalCertificate::Product(Box::new(a.certificate), Box::new(b.certificate)),
    };
    match seq.simplify().generator() {
        Generator::Pair(u, w) if is_zero_seq(w) => Ok(combine(radical(u, cap)?, whole(gb)?)),
        Generator::Pair(u, w) if is_zero_seq(u) => Ok(combine(whole(ga)?, radical(w, cap)?)),
        Generator::Interleave(l, r) => match (l.generator(), r.generator()) {
            (Generator::Pair(u, z1), Generator::Pair(z2, w)) if is_zero_seq(z1) && is_zero_seq(z2) => {
                Ok(combine(radical(u, cap)?, radical(w, cap)?))
            }
            _ => Err(Error::Undecidable("product sequence is not coordinate-split".into())),
        },
        _ => Err(Error::Undecidable("product sequence is not coordinate-split".into())),
    }
}

impl RadicalResult {
    /// Recomputes the result and checks the certificate against the terms
    /// `v_0, …, v_{window−1}`.
    pub fn replay(&self, seq: &CharSequence, window: usize, cap: u64) -> Result<bool> {
        if radical(seq, cap)? != *self {
            return Ok(false);
        }
        let terms = seq.prefix_terms(window);
        Ok(match &self.presentation {
            RadicalPresentation::Circle(g) => terms.iter().all(|c| match c {
                Character::Multiplier(n) => if g.is_zero() { n.is_zero() } else { (n % g).is_zero() },
                _ => false,
            }),
            RadicalPresentation::Integers(d) => terms.iter().all(|c| match c {
                // d·v_n = 0 in 𝕋
                Character::Rotation(CircleValue::Exact(p)) => p.mul_int(d).is_zero() || d.is_zero(),
                _ => false,
            }),
            RadicalPresentation::Finite(h) => {
                let g = h.group();
                terms.iter().all(|c| match c {
                    Character::Residues(r) => h.elements().iter().all(|x| g.pairing_residue(r, x) == 0),
                    _ => false,
                })
            }
            RadicalPresentation::Product(..) => true,
        })
    }
}

/// A sequence whose support is exactly `Γ`: the cycle `Γ` repeated.
pub fn n_characterizer(group: &GroupDescriptor, gamma: Vec<Character>) -> Result<CharSequence> {
    if gamma.is_empty() {
        return Err(Error::Precondition(
            "Γ = ∅ has no sequence witness; its radical is the whole group".into(),
        ));
    }
    CharSequence::periodic(group.clone(), Vec::new(), gamma)
}

/// A family of characters with trivial joint kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TorusInjection {
    /// The basis characters of a finite group.
    Finite { group: FiniteAbelian, characters: Vec<Character> },
    /// The sequence `(1/2ⁿ)` on ℤ.
    Integers(CharSequence),
    Product(Box<TorusInjection>, Box<TorusInjection>),
}

impl TorusInjection {
    /// The family as one character sequence on the whole group.
    pub fn to_sequence(&self) -> Result<CharSequence> {
        match self {
            TorusInjection::Finite { group, characters } => {
                let g = GroupDescriptor::Finite(group.clone());
                if characters.is_empty() {
                    CharSequence::zero(g)
                } else {
                    CharSequence::periodic(g, Vec::new(), characters.clone())
                }
            }
            TorusInjection::Integers(s) => Ok(s.clone()),
            TorusInjection::Product(a, b) => {
                let (u, w) = (a.to_sequence()?, b.to_sequence()?);
                let zu = CharSequence::zero(u.group().clone())?;
                let zw = CharSequence::zero(w.group().clone())?;
                CharSequence::interleave(&CharSequence::pair(&u, &zw)?, &CharSequence::pair(&zu, &w)?)
            }
        }
    }

    /// Re-derives the joint kernel with the radical operations.
    pub fn joint_kernel_is_trivial(&self, cap: u64) -> Result<bool> {
        fn trivial(p: &RadicalPresentation) -> bool {
            match p {
                RadicalPresentation::Finite(h) => h.is_zero(),
                RadicalPresentation::Circle(g) => g.is_one(),
                RadicalPresentation::Integers(d) => d.is_zero(),
                RadicalPresentation::Product(a, b) => trivial(a) && trivial(b),
            }
        }
        Ok(trivial(&radical(&self.to_sequence()?, cap)?.presentation))
    }
}

/// Characters of a discrete group separating its points.
pub fn inj_into_torus(group: &GroupDescriptor) -> Result<TorusInjection> {
    match group {
        GroupDescriptor::Finite(g) => {
            let characters = (0..g.rank())
                .map(|i| {
                    let mut e = g.zero();
                    e[i] = 1;
                    Character::Residues(e)
                })
                .collect();
            Ok(TorusInjection::Finite { group: g.clone(), characters })
        }
        GroupDescriptor::Integers => Ok(TorusInjection::Integers(CharSequence::geometric(
            GroupDescriptor::Integers,
            crate::arith::rat(1, 1),
            2,
        )?)),
        GroupDescriptor::Product(a, b) => {
            Ok(TorusInjection::Product(Box::new(inj_into_torus(a)?), Box::new(inj_into_torus(b)?)))
        }
        other => Err(Error::Unsupported(format!("no injection into T^N is built for {other}"))),
    }
}
