//! Rational numbers viewed inside ℚ_p.
//!
//! Every element is a rational, so its base-p expansion is eventually
//! periodic and every valuation and fractional part is exactly computable.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{fmt_rat, int_rat, is_prime, mod_inverse, pow_big, split_prime_power};
use crate::error::{Error, Result};

/// A rational number regarded as an element of ℚ_p.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PAdicRational {
    prime: u64,
    value: BigRational,
}

/// Base-p expansion `p^valuation · (d₀ + d₁p + d₂p² + …)` of a nonzero
/// p-adic rational, with the unit digits presented as `prefix` followed by
/// `cycle` repeated forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicDigits {
    pub valuation: i64,
    pub prefix: Vec<u64>,
    pub cycle: Vec<u64>,
}

impl PAdicDigits {
    pub fn digit(&self, i: usize) -> u64 {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }
}

impl PAdicRational {
    pub fn new(prime: u64, value: BigRational) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::InvalidDescriptor(format!("{prime} is not prime")));
        }
        Ok(PAdicRational { prime, value })
    }

    pub fn from_integer(prime: u64, n: impl Into<BigInt>) -> Result<Self> {
        Self::new(prime, int_rat(n.into()))
    }

    pub fn zero(prime: u64) -> Result<Self> {
        Self::new(prime, BigRational::zero())
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// v_p(x); `None` for zero (valuation +∞).
    pub fn valuation(&self) -> Option<i64> {
        if self.value.is_zero() {
            return None;
        }
        let (a, _) = split_prime_power(self.value.numer(), self.prime);
        let (b, _) = split_prime_power(self.value.denom(), self.prime);
        Some(a as i64 - b as i64)
    }

    pub fn add(&self, other: &Self) -> Self {
        PAdicRational { prime: self.prime, value: &self.value + &other.value }
    }

    pub fn neg(&self) -> Self {
        PAdicRational { prime: self.prime, value: -&self.value }
    }

    pub fn mul(&self, other: &Self) -> Self {
        PAdicRational { prime: self.prime, value: &self.value * &other.value }
    }

    /// The p-adic fractional part `{x}_p ∈ ℤ[1/p] ∩ [0, 1)`: the unique
    /// `c/p^k` with `x − c/p^k ∈ ℤ_p`.
    pub fn fractional_part(&self) -> BigRational {
        if self.value.is_zero() {
            return BigRational::zero();
        }
        let (k, rest) = split_prime_power(self.value.denom(), self.prime);
        if k == 0 {
            return BigRational::zero();
        }
        let pk = pow_big(&BigInt::from(self.prime), k as u64);
        let inv = mod_inverse(&rest, &pk).expect("denominator part coprime to p");
        let c = (self.value.numer() * inv).mod_floor(&pk);
        BigRational::new(c, pk)
    }

    /// Eventually periodic base-p digit expansion; `None` for zero.
    pub fn digits(&self) -> Option<PAdicDigits> {
        let valuation = self.valuation()?;
        let p = BigInt::from(self.prime);
        // unit u = x / p^v = a / b with b coprime to p
        let unit = &self.value / pow_rat(self.prime, valuation);
        let b = unit.denom().clone();
        let binv = mod_inverse(&b, &p).expect("unit denominator coprime to p");
        let mut a = unit.numer().clone();
        let mut seen: HashMap<BigInt, usize> = HashMap::new();
        let mut digits = Vec::new();
        loop {
            if let Some(&start) = seen.get(&a) {
                let cycle = digits.split_off(start);
                return Some(PAdicDigits { valuation, prefix: digits, cycle });
            }
            seen.insert(a.clone(), digits.len());
            let d = (&a * &binv).mod_floor(&p);
            digits.push(d.to_u64().expect("digit < p"));
            a = (&a - &d * &b) / &p;
        }
    }

    /// Rebuilds a p-adic rational from its digit presentation.
    pub fn from_digits(prime: u64, digits: &PAdicDigits) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::InvalidDescriptor(format!("{prime} is not prime")));
        }
        if digits.cycle.is_empty() {
            return Err(Error::InvalidValue("empty digit cycle".into()));
        }
        if digits.prefix.iter().chain(&digits.cycle).any(|&d| d >= prime) {
            return Err(Error::InvalidValue(format!("digit out of range for p = {prime}")));
        }
        if digits.digit(0) == 0 {
            return Err(Error::InvalidValue("leading unit digit must be nonzero".into()));
        }
        let p = BigInt::from(prime);
        let horner = |ds: &[u64]| {
            ds.iter().rev().fold(BigInt::zero(), |acc, &d| acc * &p + BigInt::from(d))
        };
        let pre = horner(&digits.prefix);
        let cyc = horner(&digits.cycle);
        let pl = pow_big(&p, digits.prefix.len() as u64);
        let pm = pow_big(&p, digits.cycle.len() as u64);
        let tail = BigRational::new(pl * cyc, BigInt::one() - pm);
        let unit = int_rat(pre) + tail;
        Self::new(prime, unit * pow_rat(prime, digits.valuation))
    }
}

fn pow_rat(p: u64, e: i64) -> BigRational {
    let base = pow_big(&BigInt::from(p), e.unsigned_abs());
    if e >= 0 {
        int_rat(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

impl fmt::Display for PAdicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rat(&self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    #[test]
    fn fractional_part_examples() {
        let x = PAdicRational::new(3, rat(1, 3)).unwrap();
        let y = PAdicRational::from_integer(3, 9).unwrap();
        assert!(x.mul(&y).fractional_part().is_zero());
        // 1/3 in ℚ_3 has fractional part 1/3
        assert_eq!(x.fractional_part(), rat(1, 3));
        // 1/6 = (1/2)(1/3); 1/2 ≡ 2 (mod 3) so {1/6}_3 = 2/3
        assert_eq!(PAdicRational::new(3, rat(1, 6)).unwrap().fractional_part(), rat(2, 3));
        // -1/9 : -1 mod 9 = 8 → 8/9
        assert_eq!(PAdicRational::new(3, rat(-1, 9)).unwrap().fractional_part(), rat(8, 9));
    }

    #[test]
    fn digits_of_minus_one_and_a_third() {
        let m1 = PAdicRational::from_integer(5, -1).unwrap().digits().unwrap();
        assert_eq!(m1, PAdicDigits { valuation: 0, prefix: vec![], cycle: vec![4] });
        let t = PAdicRational::new(3, rat(1, 3)).unwrap().digits().unwrap();
        assert_eq!(t, PAdicDigits { valuation: -1, prefix: vec![1], cycle: vec![0] });
        assert_eq!(PAdicRational::zero(7).unwrap().valuation(), None);
    }

    #[test]
    fn valuations() {
        assert_eq!(PAdicRational::new(2, rat(12, 5)).unwrap().valuation(), Some(2));
        assert_eq!(PAdicRational::new(5, rat(3, 50)).unwrap().valuation(), Some(-2));
        assert!(PAdicRational::new(4, rat(1, 1)).is_err());
    }

    proptest! {
        #[test]
        fn digits_round_trip(n in -2000i64..2000, d in 1i64..500, pi in 0usize..4) {
            let p = [2u64, 3, 5, 7][pi];
            prop_assume!(n != 0);
            let x = PAdicRational::new(p, rat(n, d)).unwrap();
            let ds = x.digits().unwrap();
            prop_assert!(ds.digit(0) != 0);
            prop_assert_eq!(PAdicRational::from_digits(p, &ds).unwrap(), x);
        }

        #[test]
        fn fractional_part_differs_by_padic_integer(n in -2000i64..2000, d in 1i64..500, pi in 0usize..4) {
            let p = [2u64, 3, 5, 7][pi];
            let x = PAdicRational::new(p, rat(n, d)).unwrap();
            let f = x.fractional_part();
            prop_assert!(f >= rat(0, 1) && f < rat(1, 1));
            let diff = PAdicRational::new(p, x.value() - &f).unwrap();
            prop_assert!(diff.valuation().map_or(true, |v| v >= 0));
        }
    }
}
