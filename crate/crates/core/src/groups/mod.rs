//! The supported group tower: finite abelian groups, ℤ, 𝕋, ℝ (rational
//! points), ℚ_p (rational points), pairs of these, and symbolic compact
//! products used only for exponent arithmetic.

pub mod circle;
pub mod finite;
pub mod padic;
pub mod snf;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{mismatch, Error, Result};
use circle::{CirclePoint, CircleValue};
use finite::FiniteAbelian;
use padic::PAdicRational;

/// Base of a symbolic compact factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompactBase {
    /// ℤ(d), `d ≥ 2`.
    Cyclic(u64),
    Circle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Multiplicity {
    /// `n ≥ 1` copies.
    Finite(u64),
    /// ℵ₀ copies.
    Countable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompactFactor {
    pub base: CompactBase,
    pub multiplicity: Multiplicity,
}

impl CompactFactor {
    pub fn new(base: CompactBase, multiplicity: Multiplicity) -> Result<Self> {
        if let CompactBase::Cyclic(d) = base {
            if d < 2 {
                return Err(Error::InvalidDescriptor(format!("cyclic factor Z({d}) needs d ≥ 2")));
            }
        }
        if multiplicity == Multiplicity::Finite(0) {
            return Err(Error::InvalidDescriptor("factor multiplicity must be at least 1".into()));
        }
        Ok(CompactFactor { base, multiplicity })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupDescriptor {
    Finite(FiniteAbelian),
    Integers,
    Circle,
    /// ℝ restricted to rational points.
    Reals,
    /// ℚ_p restricted to rational points.
    PAdic(u64),
    Product(Box<GroupDescriptor>, Box<GroupDescriptor>),
    /// A product of powers of cyclic groups and circles, known only by its
    /// factor list.
    SymbolicCompact(Vec<CompactFactor>),
}

impl GroupDescriptor {
    pub fn finite(factors: Vec<u64>) -> Result<Self> {
        Ok(GroupDescriptor::Finite(FiniteAbelian::new(factors)?))
    }

    pub fn padic(p: u64) -> Result<Self> {
        if !crate::arith::is_prime(p) {
            return Err(Error::InvalidDescriptor(format!("{p} is not prime")));
        }
        Ok(GroupDescriptor::PAdic(p))
    }

    pub fn product(left: GroupDescriptor, right: GroupDescriptor) -> Result<Self> {
        let g = GroupDescriptor::Product(Box::new(left), Box::new(right));
        g.validate()?;
        Ok(g)
    }

    pub fn depth(&self) -> usize {
        match self {
            GroupDescriptor::Product(a, b) => 1 + a.depth().max(b.depth()),
            _ => 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GroupDescriptor::PAdic(p) if !crate::arith::is_prime(*p) => {
                Err(Error::InvalidDescriptor(format!("{p} is not prime")))
            }
            GroupDescriptor::Product(a, b) => {
                if self.depth() > 2 {
                    return Err(Error::InvalidDescriptor("product nesting depth exceeds 2".into()));
                }
                if matches!(**a, GroupDescriptor::SymbolicCompact(_))
                    || matches!(**b, GroupDescriptor::SymbolicCompact(_))
                {
                    return Err(Error::InvalidDescriptor(
                        "symbolic compact descriptors cannot be paired".into(),
                    ));
                }
                a.validate()?;
                b.validate()
            }
            GroupDescriptor::SymbolicCompact(fs) => {
                if fs.is_empty() {
                    return Err(Error::InvalidDescriptor("empty symbolic product".into()));
                }
                for f in fs {
                    CompactFactor::new(f.base, f.multiplicity)?;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteAbelian> {
        match self {
            GroupDescriptor::Finite(g) => Some(g),
            _ => None,
        }
    }

    /// Finite as an abstract group (a finite group or a pair of finite groups).
    pub fn is_finite(&self) -> bool {
        match self {
            GroupDescriptor::Finite(_) => true,
            GroupDescriptor::Product(a, b) => a.is_finite() && b.is_finite(),
            GroupDescriptor::SymbolicCompact(fs) => fs.iter().all(|f| {
                matches!(f.base, CompactBase::Cyclic(_))
                    && matches!(f.multiplicity, Multiplicity::Finite(_))
            }),
            _ => false,
        }
    }

    pub fn is_compact(&self) -> bool {
        match self {
            GroupDescriptor::Finite(_) | GroupDescriptor::Circle => true,
            GroupDescriptor::SymbolicCompact(_) => true,
            GroupDescriptor::Product(a, b) => a.is_compact() && b.is_compact(),
            _ => false,
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Finite(g) => g.fmt(f),
            GroupDescriptor::Integers => f.write_str("Z"),
            GroupDescriptor::Circle => f.write_str("T"),
            GroupDescriptor::Reals => f.write_str("R"),
            GroupDescriptor::PAdic(p) => write!(f, "Q_{p}"),
            GroupDescriptor::Product(a, b) => {
                let side = |g: &GroupDescriptor| match g {
                    GroupDescriptor::Product(..) => format!("({g})"),
                    _ => g.to_string(),
                };
                write!(f, "{} x {}", side(a), side(b))
            }
            GroupDescriptor::SymbolicCompact(fs) => {
                let parts: Vec<String> = fs
                    .iter()
                    .map(|c| {
                        let base = match c.base {
                            CompactBase::Cyclic(d) => format!("Z({d})"),
                            CompactBase::Circle => "T".to_string(),
                        };
                        match c.multiplicity {
                            Multiplicity::Finite(n) => format!("{base}^{n}"),
                            Multiplicity::Countable => format!("{base}^N"),
                        }
                    })
                    .collect();
                f.write_str(&parts.join(" x "))
            }
        }
    }
}

/// A point of a tower group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Residues(Vec<u64>),
    Integer(BigInt),
    Circle(CircleValue),
    Real(BigRational),
    PAdic(PAdicRational),
    Pair(Box<Element>, Box<Element>),
}

/// A continuous character, in the representation native to its group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Character {
    /// `x ↦ nx` on 𝕋.
    Multiplier(BigInt),
    /// `k ↦ kα` on ℤ.
    Rotation(CircleValue),
    /// `x ↦ Σ cᵢxᵢ/dᵢ` on a finite group.
    Residues(Vec<u64>),
    /// `x ↦ rx` on ℝ.
    Scale(BigRational),
    /// `x ↦ {xy}_p` on ℚ_p.
    PAdic(PAdicRational),
    Pair(Box<Character>, Box<Character>),
}

impl Element {
    pub fn zero(group: &GroupDescriptor) -> Result<Self> {
        Ok(match group {
            GroupDescriptor::Finite(g) => Element::Residues(g.zero()),
            GroupDescriptor::Integers => Element::Integer(BigInt::zero()),
            GroupDescriptor::Circle => Element::Circle(CircleValue::zero()),
            GroupDescriptor::Reals => Element::Real(BigRational::zero()),
            GroupDescriptor::PAdic(p) => Element::PAdic(PAdicRational::zero(*p)?),
            GroupDescriptor::Product(a, b) => {
                Element::Pair(Box::new(Element::zero(a)?), Box::new(Element::zero(b)?))
            }
            GroupDescriptor::SymbolicCompact(_) => return Err(symbolic()),
        })
    }

    pub fn pair(a: Element, b: Element) -> Self {
        Element::Pair(Box::new(a), Box::new(b))
    }

    pub fn validate(&self, group: &GroupDescriptor) -> Result<()> {
        match (group, self) {
            (GroupDescriptor::Finite(g), Element::Residues(x)) => g.validate(x),
            (GroupDescriptor::Integers, Element::Integer(_))
            | (GroupDescriptor::Circle, Element::Circle(_))
            | (GroupDescriptor::Reals, Element::Real(_)) => Ok(()),
            (GroupDescriptor::PAdic(p), Element::PAdic(x)) if x.prime() == *p => Ok(()),
            (GroupDescriptor::Product(a, b), Element::Pair(x, y)) => {
                x.validate(a)?;
                y.validate(b)
            }
            _ => Err(mismatch(format!("element {self:?} does not belong to {group}"))),
        }
    }

    pub fn add(&self, other: &Element, group: &GroupDescriptor) -> Result<Element> {
        Ok(match (group, self, other) {
            (GroupDescriptor::Finite(g), Element::Residues(a), Element::Residues(b)) => {
                Element::Residues(g.add(a, b))
            }
            (_, Element::Integer(a), Element::Integer(b)) => Element::Integer(a + b),
            (_, Element::Circle(a), Element::Circle(b)) => Element::Circle(a.add(b)),
            (_, Element::Real(a), Element::Real(b)) => Element::Real(a + b),
            (_, Element::PAdic(a), Element::PAdic(b)) => Element::PAdic(a.add(b)),
            (GroupDescriptor::Product(ga, gb), Element::Pair(a1, b1), Element::Pair(a2, b2)) => {
                Element::pair(a1.add(a2, ga)?, b1.add(b2, gb)?)
            }
            _ => return Err(mismatch("adding elements of different groups")),
        })
    }

    pub fn neg(&self, group: &GroupDescriptor) -> Result<Element> {
        Ok(match (group, self) {
            (GroupDescriptor::Finite(g), Element::Residues(a)) => Element::Residues(g.neg(a)),
            (_, Element::Integer(a)) => Element::Integer(-a),
            (_, Element::Circle(a)) => Element::Circle(a.neg()),
            (_, Element::Real(a)) => Element::Real(-a),
            (_, Element::PAdic(a)) => Element::PAdic(a.neg()),
            (GroupDescriptor::Product(ga, gb), Element::Pair(a, b)) => {
                Element::pair(a.neg(ga)?, b.neg(gb)?)
            }
            _ => return Err(mismatch("negating an element of another group")),
        })
    }

    /// True when every component is known exactly.
    pub fn is_exact(&self) -> bool {
        match self {
            Element::Circle(CircleValue::Interval(_)) => false,
            Element::Pair(a, b) => a.is_exact() && b.is_exact(),
            _ => true,
        }
    }
}

fn symbolic() -> Error {
    Error::Unsupported("symbolic compact descriptors have no concrete elements".into())
}

impl Character {
    pub fn zero(group: &GroupDescriptor) -> Result<Self> {
        Ok(match group {
            GroupDescriptor::Finite(g) => Character::Residues(g.zero()),
            GroupDescriptor::Integers => Character::Rotation(CircleValue::zero()),
            GroupDescriptor::Circle => Character::Multiplier(BigInt::zero()),
            GroupDescriptor::Reals => Character::Scale(BigRational::zero()),
            GroupDescriptor::PAdic(p) => Character::PAdic(PAdicRational::zero(*p)?),
            GroupDescriptor::Product(a, b) => {
                Character::pair(Character::zero(a)?, Character::zero(b)?)
            }
            GroupDescriptor::SymbolicCompact(_) => return Err(symbolic()),
        })
    }

    pub fn pair(a: Character, b: Character) -> Self {
        Character::Pair(Box::new(a), Box::new(b))
    }

    pub fn integer(n: i64) -> Self {
        Character::Multiplier(BigInt::from(n))
    }

    pub fn rotation(n: i64, d: i64) -> Self {
        Character::Rotation(CircleValue::Exact(CirclePoint::from_ratio(n, d)))
    }

    /// Canonical zero test. An interval rotation is never recognized as zero.
    pub fn is_zero(&self) -> bool {
        match self {
            Character::Multiplier(n) => n.is_zero(),
            Character::Rotation(CircleValue::Exact(a)) => a.is_zero(),
            Character::Rotation(CircleValue::Interval(_)) => false,
            Character::Residues(c) => c.iter().all(|&x| x == 0),
            Character::Scale(r) => r.is_zero(),
            Character::PAdic(y) => y.is_zero(),
            Character::Pair(a, b) => a.is_zero() && b.is_zero(),
        }
    }

    pub fn validate(&self, group: &GroupDescriptor) -> Result<()> {
        match (group, self) {
            (GroupDescriptor::Finite(g), Character::Residues(c)) => g.validate(c),
            (GroupDescriptor::Integers, Character::Rotation(_))
            | (GroupDescriptor::Circle, Character::Multiplier(_))
            | (GroupDescriptor::Reals, Character::Scale(_)) => Ok(()),
            (GroupDescriptor::PAdic(p), Character::PAdic(y)) if y.prime() == *p => Ok(()),
            (GroupDescriptor::Product(a, b), Character::Pair(x, y)) => {
                x.validate(a)?;
                y.validate(b)
            }
            _ => Err(mismatch(format!("character {self:?} does not belong to {group}"))),
        }
    }

    pub fn is_exact(&self) -> bool {
        match self {
            Character::Rotation(CircleValue::Interval(_)) => false,
            Character::Pair(a, b) => a.is_exact() && b.is_exact(),
            _ => true,
        }
    }
}

/// `χ(x) ∈ 𝕋`. Exact unless an operand is a certified interval.
pub fn eval_character(group: &GroupDescriptor, chi: &Character, x: &Element) -> Result<CircleValue> {
    match (group, chi, x) {
        (GroupDescriptor::Finite(g), Character::Residues(c), Element::Residues(y)) => {
            g.validate(c)?;
            g.validate(y)?;
            Ok(CircleValue::Exact(g.pairing(c, y)))
        }
        (GroupDescriptor::Circle, Character::Multiplier(n), Element::Circle(t)) => Ok(t.mul_int(n)),
        (GroupDescriptor::Integers, Character::Rotation(a), Element::Integer(k)) => Ok(a.mul_int(k)),
        (GroupDescriptor::Reals, Character::Scale(r), Element::Real(y)) => {
            Ok(CircleValue::Exact(CirclePoint::new(r * y)))
        }
        (GroupDescriptor::PAdic(p), Character::PAdic(c), Element::PAdic(y))
            if c.prime() == *p && y.prime() == *p =>
        {
            Ok(CircleValue::Exact(CirclePoint::new(c.mul(y).fractional_part())))
        }
        (GroupDescriptor::Product(ga, gb), Character::Pair(c1, c2), Element::Pair(y1, y2)) => {
            Ok(eval_character(ga, c1, y1)?.add(&eval_character(gb, c2, y2)?))
        }
        (GroupDescriptor::SymbolicCompact(_), _, _) => Err(symbolic()),
        _ => Err(mismatch(format!("cannot evaluate {chi:?} at {x:?} on {group}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn exact(n: i64, d: i64) -> CircleValue {
        CircleValue::Exact(CirclePoint::from_ratio(n, d))
    }

    #[test]
    fn evaluation_examples() {
        let x = Element::Circle(exact(1, 4));
        assert_eq!(eval_character(&GroupDescriptor::Circle, &Character::integer(3), &x).unwrap(), exact(3, 4));
        let g = GroupDescriptor::finite(vec![2, 4]).unwrap();
        let v = eval_character(&g, &Character::Residues(vec![1, 1]), &Element::Residues(vec![1, 2]));
        assert_eq!(v.unwrap(), CircleValue::zero());
        let q3 = GroupDescriptor::padic(3).unwrap();
        let chi = Character::PAdic(PAdicRational::from_integer(3, 9).unwrap());
        let x = Element::PAdic(PAdicRational::new(3, rat(1, 3)).unwrap());
        assert_eq!(eval_character(&q3, &chi, &x).unwrap(), CircleValue::zero());
    }

    #[test]
    fn mismatches_are_structural_errors() {
        let r = eval_character(&GroupDescriptor::Circle, &Character::rotation(1, 2), &Element::Integer(1.into()));
        assert!(matches!(r, Err(Error::DescriptorMismatch(_))));
        assert!(GroupDescriptor::padic(6).is_err());
        let deep = GroupDescriptor::Product(
            Box::new(GroupDescriptor::Integers),
            Box::new(GroupDescriptor::Product(
                Box::new(GroupDescriptor::Integers),
                Box::new(GroupDescriptor::Product(
                    Box::new(GroupDescriptor::Integers),
                    Box::new(GroupDescriptor::Integers),
                )),
            )),
        );
        assert!(deep.validate().is_err());
    }

    #[test]
    fn zero_characters_are_recognized() {
        let groups = [
            GroupDescriptor::Integers,
            GroupDescriptor::Circle,
            GroupDescriptor::Reals,
            GroupDescriptor::PAdic(5),
            GroupDescriptor::finite(vec![3, 6]).unwrap(),
            GroupDescriptor::product(GroupDescriptor::Integers, GroupDescriptor::Circle).unwrap(),
        ];
        for g in &groups {
            let z = Character::zero(g).unwrap();
            assert!(z.is_zero());
            z.validate(g).unwrap();
        }
    }

    #[test]
    fn finite_additivity_is_exhaustive() {
        let g = FiniteAbelian::new(vec![2, 6]).unwrap();
        let gd = GroupDescriptor::Finite(g.clone());
        let els = g.elements(100).unwrap();
        for c in &els {
            let chi = Character::Residues(c.clone());
            for x in &els {
                let ex = eval_character(&gd, &chi, &Element::Residues(x.clone())).unwrap();
                for y in &els {
                    let s = Element::Residues(g.add(x, y));
                    let ey = eval_character(&gd, &chi, &Element::Residues(y.clone())).unwrap();
                    assert_eq!(eval_character(&gd, &chi, &s).unwrap(), ex.add(&ey));
                    // additivity in the character argument
                    let cs = Character::Residues(g.add(c, y));
                    let ec = eval_character(&gd, &Character::Residues(y.clone()), &Element::Residues(x.clone()))
                        .unwrap();
                    assert_eq!(eval_character(&gd, &cs, &Element::Residues(x.clone())).unwrap(), ex.add(&ec));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn padic_additivity(a in -500i64..500, b in 1i64..200, c in -500i64..500, d in 1i64..200,
                            yn in -300i64..300, yd in 1i64..100, pi in 0usize..3) {
            let p = [2u64, 3, 5][pi];
            let g = GroupDescriptor::PAdic(p);
            let chi = Character::PAdic(PAdicRational::new(p, rat(yn, yd)).unwrap());
            let x = Element::PAdic(PAdicRational::new(p, rat(a, b)).unwrap());
            let y = Element::PAdic(PAdicRational::new(p, rat(c, d)).unwrap());
            let lhs = eval_character(&g, &chi, &x.add(&y, &g).unwrap()).unwrap();
            let rhs = eval_character(&g, &chi, &x).unwrap().add(&eval_character(&g, &chi, &y).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn circle_and_integer_additivity(n in -1000i64..1000, a in 0i64..97, b in 0i64..97, k in -50i64..50, j in -50i64..50) {
            let t = GroupDescriptor::Circle;
            let chi = Character::integer(n);
            let x = Element::Circle(exact(a, 97));
            let y = Element::Circle(exact(b, 97));
            let lhs = eval_character(&t, &chi, &x.add(&y, &t).unwrap()).unwrap();
            prop_assert_eq!(lhs, eval_character(&t, &chi, &x).unwrap().add(&eval_character(&t, &chi, &y).unwrap()));
            let z = GroupDescriptor::Integers;
            let rot = Character::rotation(a, 97);
            let s = Element::Integer(BigInt::from(k + j));
            let sum = eval_character(&z, &rot, &Element::Integer(k.into())).unwrap()
                .add(&eval_character(&z, &rot, &Element::Integer(j.into())).unwrap());
            prop_assert_eq!(eval_character(&z, &rot, &s).unwrap(), sum);
        }

        #[test]
        fn norm_is_symmetric(n in -10_000i64..10_000, d in 1i64..10_000) {
            let t = CirclePoint::from_ratio(n, d);
            prop_assert_eq!(t.norm(), t.neg().norm());
            prop_assert!(t.norm() <= rat(1, 2));
        }
    }
}
