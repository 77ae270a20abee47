//! Exact asymptotics of `n ↦ v_n(x)`.
//!
//! A [`Behavior`] asserts `‖v_n(x) − pattern[(n − start) mod L]‖ ≤ bound(n)`
//! for every `n ≥ start`. `x ∈ s_v` iff the pattern is identically zero.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::bound::Bound;
use crate::arith::{find_cycle_within, int_rat, lcm_u64, pow_big, split_prime_power};
use crate::error::{Error, Result};
use crate::groups::circle::{CirclePoint, CircleValue};
use crate::groups::padic::PAdicRational;
use crate::groups::{eval_character, Element, GroupDescriptor};
use crate::sequences::{CharSequence, Generator};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Behavior {
    pub start: u64,
    pub pattern: Vec<CirclePoint>,
    pub bound: Bound,
    pub rule: String,
}

/// Why no behavior could be derived.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NoRule {
    /// Some value is only known as an interval.
    Inexact,
    /// No decision rule covers this family, or its state space is over the cap.
    Unsupported(String),
}

type Derived = std::result::Result<Behavior, NoRule>;

impl Behavior {
    fn exact(start: u64, pattern: Vec<CirclePoint>, rule: impl Into<String>) -> Self {
        Behavior { start, pattern, bound: Bound::Zero, rule: rule.into() }
    }

    fn constant_zero(start: u64, bound: Bound, rule: impl Into<String>) -> Self {
        Behavior { start, pattern: vec![CirclePoint::zero()], bound, rule: rule.into() }
    }

    pub fn period(&self) -> u64 {
        self.pattern.len() as u64
    }

    /// The pattern value predicted for index `n ≥ start`.
    pub fn at(&self, n: u64) -> &CirclePoint {
        debug_assert!(n >= self.start);
        &self.pattern[((n - self.start) % self.period()) as usize]
    }

    pub fn vanishes(&self) -> bool {
        self.pattern.iter().all(CirclePoint::is_zero)
    }

    pub fn shift(self, m: u64) -> Self {
        let rule = format!("tail({}, {m})", self.rule);
        let bound = self.bound.clone().shift(m);
        if m <= self.start {
            return Behavior { start: self.start - m, pattern: self.pattern, bound, rule };
        }
        let pattern = (0..self.period()).map(|i| self.at(m + i).clone()).collect();
        Behavior { start: 0, pattern, bound, rule }
    }

    pub fn interleave(a: Behavior, b: Behavior) -> Self {
        let start = 2 * a.start.max(b.start);
        let period = 2 * lcm_u64(a.period(), b.period());
        let pattern = (start..start + period)
            .map(|n| if n % 2 == 0 { a.at(n / 2).clone() } else { b.at(n / 2).clone() })
            .collect();
        Behavior {
            start,
            pattern,
            bound: Bound::interleave(a.bound, b.bound),
            rule: format!("interleave({}, {})", a.rule, b.rule),
        }
    }

    pub fn sum(a: Behavior, b: Behavior) -> Self {
        let start = a.start.max(b.start);
        let period = lcm_u64(a.period(), b.period());
        let pattern = (start..start + period).map(|n| a.at(n).add(b.at(n))).collect();
        Behavior {
            start,
            pattern,
            bound: Bound::sum(a.bound, b.bound),
            rule: format!("pair({}, {})", a.rule, b.rule),
        }
    }

    /// Merges a periodic pattern to its least period; pointwise identical.
    fn compact(mut self) -> Self {
        let len = self.pattern.len();
        for d in 1..len {
            if len % d == 0 && (0..len).all(|i| self.pattern[i] == self.pattern[i % d]) {
                self.pattern.truncate(d);
                break;
            }
        }
        self
    }
}

/// Derives the behavior of `v_n(x)`; `cap` bounds residue state spaces.
pub fn behavior(group: &GroupDescriptor, seq: &CharSequence, x: &Element, cap: u64) -> Result<Derived> {
    Ok(derive(group, &seq.simplify(), x, cap)?.map(Behavior::compact))
}

fn derive(group: &GroupDescriptor, seq: &CharSequence, x: &Element, cap: u64) -> Result<Derived> {
    match seq.generator() {
        Generator::Periodic { prefix, cycle } => {
            let mut pattern = Vec::with_capacity(cycle.len());
            for chi in cycle {
                match eval_character(group, chi, x)? {
                    CircleValue::Exact(p) => pattern.push(p),
                    CircleValue::Interval(_) => return Ok(Err(NoRule::Inexact)),
                }
            }
            Ok(Ok(Behavior::exact(prefix.len() as u64, pattern, "exact evaluation of the cycle")))
        }
        Generator::Interleave(u, v) => {
            let a = derive(group, u, x, cap)?;
            let b = derive(group, v, x, cap)?;
            Ok(match (a, b) {
                (Ok(a), Ok(b)) => Ok(Behavior::interleave(a, b)),
                (Err(e), _) | (_, Err(e)) => Err(e),
            })
        }
        Generator::Tail(inner, m) => Ok(derive(group, inner, x, cap)?.map(|b| b.shift(*m))),
        Generator::Pair(u, w) => {
            let (GroupDescriptor::Product(ga, gb), Element::Pair(x1, x2)) = (group, x) else {
                return Err(Error::DescriptorMismatch(format!("pair sequence on {group}")));
            };
            let a = derive(ga, u, x1, cap)?;
            let b = derive(gb, w, x2, cap)?;
            Ok(match (a, b) {
                (Ok(a), Ok(b)) => Ok(Behavior::sum(a, b)),
                (Err(e), _) | (_, Err(e)) => Err(e),
            })
        }
        _ => derive_family(group, seq.generator(), x, cap),
    }
}

fn derive_family(group: &GroupDescriptor, generator: &Generator, x: &Element, cap: u64) -> Result<Derived> {
    match (group, x) {
        (GroupDescriptor::Circle, Element::Circle(CircleValue::Exact(t))) => Ok(circle(generator, t, cap)),
        (GroupDescriptor::Circle, Element::Circle(CircleValue::Interval(_))) => Ok(Err(NoRule::Inexact)),
        (GroupDescriptor::Integers, Element::Integer(k)) => Ok(integers(generator, k)),
        (GroupDescriptor::Reals, Element::Real(y)) => Ok(match generator {
            Generator::Harmonic => Ok(Behavior::constant_zero(0, Bound::harmonic(y.clone()), "|x|/(n+1) bound")),
            _ => Err(unsupported(generator, group)),
        }),
        (GroupDescriptor::PAdic(p), Element::PAdic(y)) => Ok(padic(*p, generator, y, cap)),
        _ => Err(Error::DescriptorMismatch(format!("element {x:?} does not belong to {group}"))),
    }
}

fn unsupported(generator: &Generator, group: &GroupDescriptor) -> NoRule {
    NoRule::Unsupported(format!("no decision rule for {generator:?} on {group}"))
}

/// `q^r` clamped to `cap + 1`.
fn state_space(q: &BigInt, r: usize, cap: u64) -> u64 {
    let s = pow_big(q, r as u64);
    s.to_u64().map_or(cap.saturating_add(1), |s| s.min(cap.saturating_add(1)))
}

/// Runs a residue state machine to its eventual cycle. Exceeding the cap is
/// reported; failing inside the pigeonhole bound is an internal error.
fn residue_cycle<S: Clone + Eq>(
    start: S,
    step: impl Fn(&S) -> S,
    states: u64,
    cap: u64,
) -> std::result::Result<(u64, u64), NoRule> {
    let within_cap = states <= cap;
    let budget = states.min(cap).saturating_mul(3).saturating_add(3);
    match find_cycle_within(start, step, budget) {
        Some(found) => Ok(found),
        None if within_cap => panic!("residue state space of size {states} did not repeat"),
        None => Err(NoRule::Unsupported(format!("residue state space exceeds the cap {cap}"))),
    }
}

fn circle(generator: &Generator, t: &CirclePoint, cap: u64) -> Derived {
    let q = t.order();
    let a = t.value() * int_rat(q.clone());
    let a = a.to_integer();
    // v·(a/q) mod 1 from v mod q
    let point = |v: &BigInt| CirclePoint::new(BigRational::new((v * &a).mod_floor(&q), q.clone()));
    if q.is_one() {
        return Ok(Behavior::constant_zero(0, Bound::Zero, "x = 0"));
    }
    match generator {
        Generator::Recurrence { coeffs, init } => {
            let r = coeffs.len();
            let reduce = |w: &Vec<BigInt>| w.iter().map(|v| v.mod_floor(&q)).collect::<Vec<_>>();
            let step = |w: &Vec<BigInt>| {
                let next: BigInt = coeffs.iter().zip(w.iter().rev()).map(|(c, v)| c * v).sum();
                let mut out = w[1..].to_vec();
                out.push(next.mod_floor(&q));
                out
            };
            let states = state_space(&q, r, cap);
            let (mu, lam) = residue_cycle(reduce(init), step, states, cap)?;
            // state k holds v_k..v_{k+r−1}; its first entry is v_k
            let mut w = reduce(init);
            for _ in 0..mu {
                w = step(&w);
            }
            let mut pattern = Vec::with_capacity(lam as usize);
            for _ in 0..lam {
                pattern.push(point(&w[0]));
                w = step(&w);
            }
            Ok(Behavior::exact(mu, pattern, format!("residue cycle of the recurrence mod {q}")))
        }
        Generator::Factorial => {
            let mut n = 0u64;
            let mut f = BigInt::one();
            while !f.is_multiple_of(&q) {
                n += 1;
                f *= n;
            }
            Ok(Behavior::constant_zero(n, Bound::Zero, format!("{q} divides n! for n ≥ {n}")))
        }
        Generator::Geometric { coeff, ratio } => {
            let c = coeff.to_integer();
            let states = state_space(&q, 1, cap);
            let step = |s: &BigInt| (s * ratio).mod_floor(&q);
            let (mu, lam) = residue_cycle(BigInt::one().mod_floor(&q), step, states, cap)?;
            let mut s = BigInt::one().mod_floor(&q);
            for _ in 0..mu {
                s = step(&s);
            }
            let mut pattern = Vec::with_capacity(lam as usize);
            for _ in 0..lam {
                pattern.push(point(&(&c * &s)));
                s = step(&s);
            }
            Ok(Behavior::exact(mu, pattern, format!("residue cycle of {ratio}^n mod {q}")))
        }
        Generator::IntegerEnumeration => {
            // v_{n+2q} = v_n ± q
            let len = 2 * q.to_u64().filter(|&l| l <= cap).ok_or_else(|| {
                NoRule::Unsupported(format!("enumeration period 2·{q} exceeds the cap {cap}"))
            })?;
            let pattern = (0..len)
                .map(|n| {
                    let k = BigInt::from(n / 2 + 1);
                    point(&if n % 2 == 0 { k } else { -k })
                })
                .collect();
            Ok(Behavior::exact(0, pattern, format!("enumeration is periodic mod {q}")))
        }
        g => Err(unsupported(g, &GroupDescriptor::Circle)),
    }
}

fn integers(generator: &Generator, k: &BigInt) -> Derived {
    let kr = int_rat(k.clone());
    match generator {
        Generator::Geometric { coeff, ratio } => Ok(Behavior::constant_zero(
            0,
            Bound::geometric(&kr * coeff, ratio.clone()),
            format!("|k·c|/{ratio}^n bound"),
        )),
        Generator::AffineGeometric { offset, scale, ratio } => Ok(Behavior {
            start: 0,
            pattern: vec![CirclePoint::new(&kr * offset)],
            bound: Bound::geometric(&kr * scale, ratio.clone()),
            rule: format!("k·offset plus |k·s|/{ratio}^n"),
        }),
        g => Err(unsupported(g, &GroupDescriptor::Integers)),
    }
}

fn padic(p: u64, generator: &Generator, y: &PAdicRational, cap: u64) -> Derived {
    let Generator::Geometric { coeff, ratio } = generator else {
        return Err(unsupported(generator, &GroupDescriptor::PAdic(p)));
    };
    let z = PAdicRational::new(p, coeff * y.value()).expect("prime already validated");
    let Some(v) = z.valuation() else {
        return Ok(Behavior::constant_zero(0, Bound::Zero, "c·x = 0"));
    };
    let (e, _) = split_prime_power(ratio, p);
    if v >= 0 {
        return Ok(Behavior::constant_zero(0, Bound::Zero, "c·x·q^n is a p-adic integer"));
    }
    let k = (-v) as u64;
    if e > 0 {
        let start = k.div_ceil(e as u64);
        return Ok(Behavior::constant_zero(
            start,
            Bound::Zero,
            format!("valuation of c·x·{ratio}^n is ≥ 0 for n ≥ {start}"),
        ));
    }
    // q is a unit: {z·qⁿ}_p depends on qⁿ mod p^k only
    let modulus = pow_big(&BigInt::from(p), k);
    let states = state_space(&BigInt::from(p), k as usize, cap);
    let step = |s: &BigInt| (s * ratio).mod_floor(&modulus);
    let (mu, lam) = residue_cycle(BigInt::one(), step, states, cap)?;
    let mut s = BigInt::one();
    for _ in 0..mu {
        s = step(&s);
    }
    let mut pattern = Vec::with_capacity(lam as usize);
    for _ in 0..lam {
        let t = PAdicRational::new(p, z.value() * int_rat(s.clone())).expect("prime already validated");
        pattern.push(CirclePoint::new(t.fractional_part()));
        s = step(&s);
    }
    Ok(Behavior::exact(mu, pattern, format!("unit cycle of {ratio}^n mod {p}^{k}")))
}

/// Largest-norm pattern entry, as `(offset into pattern, norm)`.
pub(crate) fn worst_entry(b: &Behavior) -> (usize, BigRational) {
    let mut best = (0, BigRational::zero());
    for (i, p) in b.pattern.iter().enumerate() {
        let nu = p.norm();
        if nu > best.1 {
            best = (i, nu);
        }
    }
    debug_assert!(best.1.is_positive() || b.vanishes());
    best
}
