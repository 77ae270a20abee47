//! Small exact-arithmetic helpers shared by the group and sequence code.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_rat(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Fractional part in `[0, 1)`.
pub fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

/// Distance to the nearest integer, in `[0, 1/2]`.
pub fn dist_to_int(r: &Rational) -> Rational {
    let f = frac(r);
    let g = Rational::one() - &f;
    if f <= g {
        f
    } else {
        g
    }
}

pub fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

/// lcm with the convention lcm(0, x) = 0 (intersection of 0ℤ with xℤ).
pub fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        BigInt::zero()
    } else {
        a.lcm(b)
    }
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / a.gcd(&b) * b
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Non-negative residue of `a` modulo `m > 0`.
pub fn mod_floor_u64(a: &BigInt, m: u64) -> u64 {
    let r = a.mod_floor(&BigInt::from(m));
    r.to_u64().expect("residue fits u64")
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Splits `n = p^k * rest` with `p ∤ rest`; `n` must be nonzero.
pub fn split_prime_power(n: &BigInt, p: u64) -> (u32, BigInt) {
    let p = BigInt::from(p);
    let mut k = 0;
    let mut rest = n.clone();
    while !rest.is_zero() && (&rest % &p).is_zero() {
        rest /= &p;
        k += 1;
    }
    (k, rest)
}

pub fn pow_big(base: &BigInt, exp: u64) -> BigInt {
    num_traits::pow::pow(base.clone(), exp as usize)
}

pub fn abs_big(a: &BigInt) -> BigUint {
    a.magnitude().clone()
}

pub fn sign_of(r: &Rational) -> Sign {
    if r.is_zero() {
        Sign::NoSign
    } else if r.is_positive() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Display a rational as `p/q` or `p`.
pub fn fmt_rat(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p`, `-p`, `p/q`.
pub fn parse_rat(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().ok()?;
        let b: BigInt = b.trim().parse().ok()?;
        if b.is_zero() {
            return None;
        }
        Some(Rational::new(a, b))
    } else {
        let a: BigInt = s.parse().ok()?;
        Some(Rational::from_integer(a))
    }
}

/// Decimal approximation for human-readable output.
pub fn approx(r: &Rational) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        n / d
    } else {
        // scale down huge values
        let bits = r.denom().bits().max(r.numer().bits()) as i64 - 60;
        let shift = bits.max(0) as usize;
        let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
        let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
        if d == 0.0 {
            0.0
        } else {
            n / d
        }
    }
}

/// Brent cycle detection on a deterministic state machine. Returns
/// `(mu, lambda)`: the first index of the cycle and its length.
pub fn find_cycle<S: Clone + Eq>(start: S, step: impl Fn(&S) -> S) -> (u64, u64) {
    find_cycle_within(start, step, u64::MAX).expect("unbounded search always terminates")
}

/// [`find_cycle`] giving up after `budget` applications of `step` in the
/// search phase. A state space of size `s` always fits in `3s` steps.
pub fn find_cycle_within<S: Clone + Eq>(start: S, step: impl Fn(&S) -> S, budget: u64) -> Option<(u64, u64)> {
    let mut power = 1u64;
    let mut lam = 1u64;
    let mut spent = 1u64;
    let mut tortoise = start.clone();
    let mut hare = step(&start);
    while tortoise != hare {
        if spent >= budget {
            return None;
        }
        if power == lam {
            tortoise = hare.clone();
            power *= 2;
            lam = 0;
        }
        hare = step(&hare);
        lam += 1;
        spent += 1;
    }
    let mut tortoise = start.clone();
    let mut hare = start;
    for _ in 0..lam {
        hare = step(&hare);
    }
    let mut mu = 0u64;
    while tortoise != hare {
        tortoise = step(&tortoise);
        hare = step(&hare);
        mu += 1;
    }
    Some((mu, lam))
}
