//! Exponent arithmetic on compact descriptors and the classification
//! verdicts built on it.

use std::cmp::Ordering;
use std::fmt;

use crate::arith::{gcd_u64, lcm_u64, rat};
use crate::error::{mismatch, Error, Result};
use crate::groups::finite::FiniteAbelian;
use crate::groups::{CompactBase, CompactFactor, GroupDescriptor, Multiplicity};
use crate::membership::{is_autochar_witness, Autochar, Limits};
use crate::sequences::CharSequence;

/// An exponent where `0` stands for "unbounded" and is the largest value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExtendedExponent(pub u64);

impl ExtendedExponent {
    pub const UNBOUNDED: ExtendedExponent = ExtendedExponent(0);

    pub fn is_unbounded(self) -> bool {
        self.0 == 0
    }

    fn key(self) -> (bool, u64) {
        (self.0 == 0, self.0)
    }
}

impl Ord for ExtendedExponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for ExtendedExponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtendedExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unbounded() {
            f.write_str("0 (unbounded)")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// The compact factors of a compact descriptor.
pub fn compact_factors(group: &GroupDescriptor) -> Result<Vec<CompactFactor>> {
    let one = Multiplicity::Finite(1);
    match group {
        GroupDescriptor::Finite(g) => {
            g.factors().iter().map(|&d| CompactFactor::new(CompactBase::Cyclic(d), one)).collect()
        }
        GroupDescriptor::Circle => Ok(vec![CompactFactor::new(CompactBase::Circle, one)?]),
        GroupDescriptor::SymbolicCompact(fs) => Ok(fs.clone()),
        GroupDescriptor::Product(a, b) => {
            let mut out = compact_factors(a)?;
            out.extend(compact_factors(b)?);
            Ok(out)
        }
        other => Err(mismatch(format!("{other} is not compact"))),
    }
}

fn exponent_of(factors: &[CompactFactor], keep: impl Fn(&CompactFactor) -> bool) -> ExtendedExponent {
    let mut acc = 1u64;
    for f in factors.iter().filter(|f| keep(f)) {
        match f.base {
            CompactBase::Circle => return ExtendedExponent::UNBOUNDED,
            CompactBase::Cyclic(d) => acc = lcm_u64(acc, d),
        }
    }
    ExtendedExponent(acc)
}

/// `exp(G)`: lcm of the cyclic orders, unbounded with a circle factor.
pub fn exp_descriptor(group: &GroupDescriptor) -> Result<ExtendedExponent> {
    Ok(exponent_of(&compact_factors(group)?, |_| true))
}

/// `eo(G)`: least `n` with `nG` finite, unbounded with a circle factor.
pub fn eo_descriptor(group: &GroupDescriptor) -> Result<ExtendedExponent> {
    let factors = compact_factors(group)?;
    if factors.iter().any(|f| f.base == CompactBase::Circle) {
        return Ok(ExtendedExponent::UNBOUNDED);
    }
    Ok(exponent_of(&factors, |f| f.multiplicity == Multiplicity::Countable))
}

/// `m·G` factorwise: `m·ℤ(d) = ℤ(d / gcd(d, m))`, `m·𝕋 = 𝕋`.
pub fn scale_factors(factors: &[CompactFactor], m: u64) -> Vec<CompactFactor> {
    factors
        .iter()
        .filter_map(|f| match f.base {
            CompactBase::Circle => Some(*f),
            CompactBase::Cyclic(d) => {
                let e = d / gcd_u64(d, m);
                (e > 1).then_some(CompactFactor { base: CompactBase::Cyclic(e), multiplicity: f.multiplicity })
            }
        })
        .collect()
}

pub fn factors_finite(factors: &[CompactFactor]) -> bool {
    factors
        .iter()
        .all(|f| matches!(f.base, CompactBase::Cyclic(_)) && matches!(f.multiplicity, Multiplicity::Finite(_)))
}

fn fmt_factors(factors: &[CompactFactor]) -> String {
    if factors.is_empty() {
        "{0}".into()
    } else {
        GroupDescriptor::SymbolicCompact(factors.to_vec()).to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TCharVerdict {
    pub eo: ExtendedExponent,
    pub exp: ExtendedExponent,
    /// `eo < exp`: the closed subgroup with this quotient is not T-characterized.
    pub not_t_characterizable: bool,
    /// `m` with `m·G` finite and non-trivial, checked factorwise.
    pub witness: Option<u64>,
    pub witness_image: Option<String>,
}

/// The criterion `eo(X/H) < exp(X/H)` for a compact quotient `X/H`.
pub fn not_t_characterizable(quotient: &GroupDescriptor) -> Result<TCharVerdict> {
    let factors = compact_factors(quotient)?;
    let eo = eo_descriptor(quotient)?;
    let exp = exp_descriptor(quotient)?;
    let holds = eo < exp;
    if !holds {
        return Ok(TCharVerdict { eo, exp, not_t_characterizable: false, witness: None, witness_image: None });
    }
    let m = eo.0;
    let image = scale_factors(&factors, m);
    if !factors_finite(&image) || image.is_empty() {
        return Err(Error::Internal(format!("{m}·G = {} is not finite and non-trivial", fmt_factors(&image))));
    }
    Ok(TCharVerdict {
        eo,
        exp,
        not_t_characterizable: true,
        witness: Some(m),
        witness_image: Some(fmt_factors(&image)),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutocharVerdict {
    pub autocharacterized: bool,
    pub reason: String,
    pub witness: Option<CharSequence>,
    pub check: Option<Autochar>,
}

/// Locally compact groups in the tower are autocharacterized exactly when
/// they are not compact; non-compact ones come with a checked witness.
pub fn autochar_verdict(group: &GroupDescriptor, limits: &Limits) -> Result<AutocharVerdict> {
    group.validate()?;
    if group.is_compact() {
        return Ok(AutocharVerdict {
            autocharacterized: false,
            reason: format!("{group} is compact: every sequence with s_v(X) = X is eventually null"),
            witness: None,
            check: None,
        });
    }
    let witness = witness_for(group)?;
    let check = is_autochar_witness(group, &witness, limits)?;
    if !matches!(check, Autochar::Confirmed { .. }) {
        return Err(Error::Internal(format!("witness {witness} for {group} was not confirmed: {}", check.label())));
    }
    Ok(AutocharVerdict {
        autocharacterized: true,
        reason: format!("{group} is not compact"),
        witness: Some(witness),
        check: Some(check),
    })
}

fn witness_for(group: &GroupDescriptor) -> Result<CharSequence> {
    match group {
        GroupDescriptor::Integers => CharSequence::geometric(GroupDescriptor::Integers, rat(1, 1), 2),
        GroupDescriptor::Reals => Ok(CharSequence::harmonic()),
        GroupDescriptor::PAdic(p) => CharSequence::geometric(group.clone(), rat(1, 1), *p),
        GroupDescriptor::Product(a, b) if !a.is_compact() => {
            CharSequence::pair(&witness_for(a)?, &CharSequence::zero(b.as_ref().clone())?)
        }
        GroupDescriptor::Product(a, b) => {
            CharSequence::pair(&CharSequence::zero(a.as_ref().clone())?, &witness_for(b)?)
        }
        other => Err(Error::Unsupported(format!("no witness family for {other}"))),
    }
}

/// A finite dual has `dual_size` characters, so every infinite sequence
/// repeats one of them infinitely often.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PigeonholeFact {
    pub group: FiniteAbelian,
    pub dual_size: u64,
}

pub fn k_char_impossible_finite(group: &FiniteAbelian) -> PigeonholeFact {
    PigeonholeFact { group: group.clone(), dual_size: group.order() }
}

impl PigeonholeFact {
    /// The characters of `seq` occurring infinitely often; never empty.
    pub fn certify(&self, seq: &CharSequence) -> Result<Vec<crate::groups::Character>> {
        if seq.group() != &GroupDescriptor::Finite(self.group.clone()) {
            return Err(mismatch(format!("sequence lives on {}, not {}", seq.group(), self.group)));
        }
        let inf = seq
            .support_partition()
            .gamma_inf()
            .map(<[_]>::to_vec)
            .ok_or_else(|| Error::Undecidable("support of a finite-group sequence".into()))?;
        if inf.is_empty() || inf.len() as u64 > self.dual_size {
            return Err(Error::Internal(format!("{} characters recur in a dual of size {}", inf.len(), self.dual_size)));
        }
        Ok(inf)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinApVerdict {
    pub admits: bool,
    /// `m` with `mG` finite and non-trivial, when one exists.
    pub witness: Option<u64>,
    /// Set for the trivial group, where the criterion is degenerate.
    pub trivial_edge_case: bool,
}

/// Whether `ℤ^rank × torsion` admits a MinAP topology: exactly when no `m`
/// makes `mG` finite and non-trivial.
pub fn admits_minap_fg(rank: u32, torsion: &FiniteAbelian) -> MinApVerdict {
    if rank > 0 {
        return MinApVerdict { admits: true, witness: None, trivial_edge_case: false };
    }
    if torsion.is_trivial() {
        return MinApVerdict { admits: false, witness: None, trivial_edge_case: true };
    }
    MinApVerdict { admits: false, witness: Some(1), trivial_edge_case: false }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_group, parse_sequence};
    use proptest::prelude::*;

    fn g(src: &str) -> GroupDescriptor {
        parse_group(src).unwrap()
    }

    #[test]
    fn exponent_examples() {
        assert_eq!(exp_descriptor(&g("Z(3)^1 x Z(2)^N")).unwrap(), ExtendedExponent(6));
        assert_eq!(exp_descriptor(&g("Z(4)")).unwrap(), ExtendedExponent(4));
        assert!(exp_descriptor(&g("T x Z(2)")).unwrap().is_unbounded());
        assert_eq!(eo_descriptor(&g("Z(3)^1 x Z(2)^N")).unwrap(), ExtendedExponent(2));
        assert_eq!(eo_descriptor(&g("Z(2,4)")).unwrap(), ExtendedExponent(1));
        assert_eq!(eo_descriptor(&g("Z(2)^N")).unwrap(), ExtendedExponent(2));
        assert!(matches!(exp_descriptor(&g("Z")), Err(Error::DescriptorMismatch(_))));
    }

    #[test]
    fn extended_order_puts_zero_last() {
        assert!(ExtendedExponent(0) > ExtendedExponent(u64::MAX));
        assert!(ExtendedExponent(2) < ExtendedExponent(6));
        assert_eq!(ExtendedExponent(0).max(ExtendedExponent(5)), ExtendedExponent(0));
    }

    #[test]
    fn t_characterizability_examples() {
        let v = not_t_characterizable(&g("Z(3)^1 x Z(2)^N")).unwrap();
        assert!(v.not_t_characterizable);
        assert_eq!(v.witness, Some(2));
        assert_eq!(v.witness_image.as_deref(), Some("Z(3)^1"));
        // 3X is the infinite factor, so 3 does not witness
        let three = scale_factors(&compact_factors(&g("Z(3)^1 x Z(2)^N")).unwrap(), 3);
        assert!(!factors_finite(&three));
        assert!(!not_t_characterizable(&g("T^N")).unwrap().not_t_characterizable);
        assert!(!not_t_characterizable(&g("Z(2)^N")).unwrap().not_t_characterizable);
        assert!(!not_t_characterizable(&g("T^3 x T^N")).unwrap().not_t_characterizable);
    }

    fn arb_factor() -> impl Strategy<Value = CompactFactor> {
        let base = prop_oneof![Just(CompactBase::Circle), (2u64..13).prop_map(CompactBase::Cyclic)];
        let mult = prop_oneof![Just(Multiplicity::Countable), (1u64..4).prop_map(Multiplicity::Finite)];
        (base, mult).prop_map(|(b, m)| CompactFactor::new(b, m).unwrap())
    }

    proptest! {
        #[test]
        fn eo_never_exceeds_exp(fs in proptest::collection::vec(arb_factor(), 1..5)) {
            let d = GroupDescriptor::SymbolicCompact(fs);
            prop_assert!(eo_descriptor(&d).unwrap() <= exp_descriptor(&d).unwrap());
        }

        #[test]
        fn witnesses_are_finite_and_nontrivial(fs in proptest::collection::vec(arb_factor(), 1..5)) {
            let d = GroupDescriptor::SymbolicCompact(fs.clone());
            let v = not_t_characterizable(&d).unwrap();
            if let Some(m) = v.witness {
                let image = scale_factors(&fs, m);
                prop_assert!(factors_finite(&image) && !image.is_empty());
            }
            // connected descriptors are never flagged
            if fs.iter().all(|f| f.base == CompactBase::Circle) {
                prop_assert!(!v.not_t_characterizable);
            }
        }

        #[test]
        fn brute_force_eo(fs in proptest::collection::vec(arb_factor(), 1..4)) {
            let d = GroupDescriptor::SymbolicCompact(fs.clone());
            let eo = eo_descriptor(&d).unwrap();
            let least = (1u64..=30_000).find(|&n| factors_finite(&scale_factors(&fs, n)));
            prop_assert_eq!(eo, ExtendedExponent(least.unwrap_or(0)));
        }
    }

    #[test]
    fn autochar_examples() {
        let l = Limits::default();
        let r = autochar_verdict(&GroupDescriptor::Reals, &l).unwrap();
        assert!(r.autocharacterized);
        assert_eq!(r.witness.unwrap(), CharSequence::harmonic());
        assert!(!autochar_verdict(&g("Z(6)"), &l).unwrap().autocharacterized);
        assert!(!autochar_verdict(&GroupDescriptor::Circle, &l).unwrap().autocharacterized);
        assert!(!autochar_verdict(&g("Z(2)^N x T^1"), &l).unwrap().autocharacterized);
        let z = autochar_verdict(&GroupDescriptor::Integers, &l).unwrap();
        assert_eq!(z.witness.unwrap().to_string(), "geom(1,2)");
        for p in [2, 3, 5] {
            assert!(autochar_verdict(&GroupDescriptor::padic(p).unwrap(), &l).unwrap().autocharacterized);
        }
        assert!(autochar_verdict(&g("Z(4) x Z"), &l).unwrap().autocharacterized);
        assert!(autochar_verdict(&g("R x T"), &l).unwrap().autocharacterized);
    }

    #[test]
    fn pigeonhole_examples() {
        let z4 = FiniteAbelian::cyclic(4).unwrap();
        let fact = k_char_impossible_finite(&z4);
        let s = parse_sequence(&GroupDescriptor::Finite(z4), "periodic([1,2];[3,1])").unwrap();
        assert_eq!(fact.certify(&s).unwrap().len(), 2);
        assert_eq!(k_char_impossible_finite(&FiniteAbelian::new(vec![2, 2]).unwrap()).dual_size, 4);
    }

    #[test]
    fn minap_examples() {
        assert!(admits_minap_fg(1, &FiniteAbelian::trivial()).admits);
        let z5 = admits_minap_fg(0, &FiniteAbelian::cyclic(5).unwrap());
        assert!(!z5.admits && z5.witness == Some(1));
        assert!(admits_minap_fg(1, &FiniteAbelian::cyclic(2).unwrap()).admits);
        let trivial = admits_minap_fg(0, &FiniteAbelian::trivial());
        assert!(!trivial.admits && trivial.trivial_edge_case);
    }
}
