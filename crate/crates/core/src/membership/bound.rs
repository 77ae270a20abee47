//! Nonincreasing error bounds tending to zero.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{fmt_rat, int_rat, pow_big};

/// An explicit nonincreasing function `b(n) → 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    Zero,
    /// `coeff / ratioⁿ`.
    Geometric { coeff: BigRational, ratio: BigInt },
    /// `coeff / (n + 1)`.
    Harmonic { coeff: BigRational },
    /// `max(a(⌊n/2⌋), b(⌊n/2⌋))`, covering both interleaved halves.
    Interleave(Box<Bound>, Box<Bound>),
    /// `b(n + m)`.
    Shift(Box<Bound>, u64),
    Sum(Box<Bound>, Box<Bound>),
}

impl Bound {
    pub fn geometric(coeff: BigRational, ratio: BigInt) -> Self {
        if coeff.is_zero() {
            Bound::Zero
        } else {
            Bound::Geometric { coeff: coeff.abs(), ratio }
        }
    }

    pub fn harmonic(coeff: BigRational) -> Self {
        if coeff.is_zero() {
            Bound::Zero
        } else {
            Bound::Harmonic { coeff: coeff.abs() }
        }
    }

    pub fn interleave(a: Bound, b: Bound) -> Self {
        if a == Bound::Zero && b == Bound::Zero {
            Bound::Zero
        } else {
            Bound::Interleave(Box::new(a), Box::new(b))
        }
    }

    pub fn shift(self, m: u64) -> Self {
        match self {
            Bound::Zero => Bound::Zero,
            _ if m == 0 => self,
            Bound::Shift(b, k) => Bound::Shift(b, k + m),
            b => Bound::Shift(Box::new(b), m),
        }
    }

    pub fn sum(a: Bound, b: Bound) -> Self {
        match (a, b) {
            (Bound::Zero, x) | (x, Bound::Zero) => x,
            (x, y) => Bound::Sum(Box::new(x), Box::new(y)),
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == Bound::Zero
    }

    pub fn eval(&self, n: u64) -> BigRational {
        match self {
            Bound::Zero => BigRational::zero(),
            Bound::Geometric { coeff, ratio } => coeff / int_rat(pow_big(ratio, n)),
            Bound::Harmonic { coeff } => coeff / int_rat(BigInt::from(n) + 1),
            Bound::Interleave(a, b) => a.eval(n / 2).max(b.eval(n / 2)),
            Bound::Shift(b, m) => b.eval(n + m),
            Bound::Sum(a, b) => a.eval(n) + b.eval(n),
        }
    }

    /// Least `N` with `b(n) < eps` for every `n ≥ N`; `eps > 0`.
    pub fn settle_index(&self, eps: &BigRational) -> u64 {
        debug_assert!(eps.is_positive());
        match self {
            Bound::Zero => 0,
            Bound::Geometric { coeff, ratio } => {
                let mut n = 0u64;
                let mut q = int_rat(1);
                let r = int_rat(ratio.clone());
                while coeff >= &(eps * &q) {
                    q *= &r;
                    n += 1;
                }
                n
            }
            Bound::Harmonic { coeff } => {
                // coeff/(n+1) < eps ⇔ n + 1 > coeff/eps
                (coeff / eps).floor().to_integer().to_u64().expect("settle index fits in u64")
            }
            Bound::Interleave(a, b) => {
                2 * a.settle_index(eps).max(b.settle_index(eps))
            }
            Bound::Shift(b, m) => b.settle_index(eps).saturating_sub(*m),
            Bound::Sum(a, b) => {
                let half = eps / int_rat(2);
                a.settle_index(&half).max(b.settle_index(&half))
            }
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Zero => f.write_str("0"),
            Bound::Geometric { coeff, ratio } => write!(f, "{}/{ratio}^n", fmt_rat(coeff)),
            Bound::Harmonic { coeff } => write!(f, "{}/(n+1)", fmt_rat(coeff)),
            Bound::Interleave(a, b) => write!(f, "interleave({a}, {b})"),
            Bound::Shift(b, m) => write!(f, "shift({b}, {m})"),
            Bound::Sum(a, b) => write!(f, "({a}) + ({b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn arb_bound() -> impl Strategy<Value = Bound> {
        let leaf = prop_oneof![
            Just(Bound::Zero),
            (1i64..50, 1i64..5, 2i64..5).prop_map(|(a, b, q)| Bound::geometric(rat(a, b), q.into())),
            (1i64..50, 1i64..5).prop_map(|(a, b)| Bound::harmonic(rat(a, b))),
        ];
        leaf.prop_recursive(3, 8, 2, |inner| prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Bound::interleave(a, b)),
            (inner.clone(), 0u64..9).prop_map(|(a, m)| a.shift(m)),
            (inner.clone(), inner).prop_map(|(a, b)| Bound::sum(a, b)),
        ])
    }

    proptest! {
        #[test]
        fn settle_index_is_sound(b in arb_bound(), num in 1i64..20, den in 1i64..400) {
            let eps = rat(num, den);
            let n0 = b.settle_index(&eps);
            for n in n0..n0 + 64 {
                prop_assert!(b.eval(n) < eps, "b({}) = {} ≥ {}", n, b.eval(n), eps);
            }
        }

        #[test]
        fn bounds_are_nonincreasing(b in arb_bound()) {
            for n in 0..60 {
                prop_assert!(b.eval(n + 1) <= b.eval(n));
            }
        }
    }

    #[test]
    fn settle_examples() {
        let g = Bound::geometric(rat(1, 1), 2.into());
        assert_eq!(g.settle_index(&rat(1, 10)), 4);
        let h = Bound::harmonic(rat(3, 1));
        assert_eq!(h.settle_index(&rat(1, 2)), 6);
        assert_eq!(h.eval(6), rat(3, 7));
    }
}
