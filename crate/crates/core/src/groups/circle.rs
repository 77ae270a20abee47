//! Points of the circle group 𝕋 = ℝ/ℤ.
//!
//! Exact points are reduced rationals in `[0, 1)`. Irrational points are
//! carried as certified intervals: a pair of rational bounds on some real
//! lift of the point, together with a deterministic refinement rule.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{dist_to_int, fmt_rat, frac, int_rat, rat, Rational};

/// An exact point of 𝕋, stored canonically as a reduced rational in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CirclePoint(BigRational);

impl CirclePoint {
    pub fn new(r: BigRational) -> Self {
        CirclePoint(frac(&r))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::new(rat(n, d))
    }

    pub fn zero() -> Self {
        CirclePoint(Rational::zero())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Distance to ℤ.
    pub fn norm(&self) -> BigRational {
        dist_to_int(&self.0)
    }

    /// Order of the point in 𝕋 (its reduced denominator).
    pub fn order(&self) -> BigInt {
        self.0.denom().clone()
    }

    pub fn add(&self, other: &CirclePoint) -> CirclePoint {
        Self::new(&self.0 + &other.0)
    }

    pub fn neg(&self) -> CirclePoint {
        Self::new(-&self.0)
    }

    pub fn mul_int(&self, n: &BigInt) -> CirclePoint {
        Self::new(&self.0 * int_rat(n.clone()))
    }

    /// Membership in 𝕋₊, the image of `[-1/4, 1/4]`.
    pub fn in_t_plus(&self) -> bool {
        self.norm() <= rat(1, 4)
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rat(&self.0))
    }
}

/// How a certified interval is refined.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntervalSource {
    /// A simple root of the integer polynomial (coefficients lowest degree
    /// first) isolated by the current bounds; refined by bisection.
    Root { poly: Vec<BigInt> },
    /// `factor · base`.
    Scaled { factor: BigInt, base: Box<CertifiedInterval> },
    /// `left + right`.
    Sum { left: Box<CertifiedInterval>, right: Box<CertifiedInterval> },
    /// `offset + base`.
    Shifted { offset: BigRational, base: Box<CertifiedInterval> },
}

/// Rational bounds `lower ≤ t ≤ upper` on a real lift `t` of a point of 𝕋.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CertifiedInterval {
    lower: BigRational,
    upper: BigRational,
    source: IntervalSource,
}

fn eval_poly(poly: &[BigInt], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in poly.iter().rev() {
        acc = acc * x + int_rat(c.clone());
    }
    acc
}

/// `2^{k·deg}·poly(m/2^k)`, an integer with the sign of `poly(m/2^k)`.
fn eval_poly_dyadic(poly: &[BigInt], m: &BigInt, k: u64) -> BigInt {
    let deg = poly.len().saturating_sub(1);
    let mut acc = BigInt::zero();
    for (j, c) in poly.iter().enumerate().rev() {
        acc = acc * m + (c << (k as usize * (deg - j)));
    }
    acc
}

/// `Some(k)` when `r = n/2^k`.
fn dyadic_exponent(r: &Rational) -> Option<u64> {
    let d = r.denom();
    let k = d.trailing_zeros().unwrap_or(0);
    (d >> k as usize).is_one().then_some(k)
}

/// `r·n`, skipping the general gcd when `r` has a power-of-two denominator.
fn mul_dyadic(r: &Rational, n: &BigInt) -> Rational {
    let Some(k) = dyadic_exponent(r) else {
        return r * int_rat(n.clone());
    };
    let p = r.numer() * n;
    if p.is_zero() {
        return Rational::zero();
    }
    let shift = p.trailing_zeros().unwrap_or(0).min(k) as usize;
    Rational::new_raw(p >> shift, r.denom() >> shift)
}

/// Bisection of a root interval with dyadic endpoints in integer
/// arithmetic; `None` if an endpoint is not dyadic.
fn refine_root_dyadic(poly: &[BigInt], lower: &Rational, upper: &Rational, width: &Rational) -> Option<(Rational, Rational)> {
    let mut k = dyadic_exponent(lower)?.max(dyadic_exponent(upper)?);
    let scale = |r: &Rational, k: u64| (r * int_rat(BigInt::one() << k as usize)).to_integer();
    let (mut l, mut u) = (scale(lower, k), scale(upper, k));
    // 2^{-target} ≤ width
    let target = (width.denom().bits() + 1).saturating_sub(width.numer().bits());
    let low_positive = eval_poly_dyadic(poly, &l, k).is_positive();
    while k < target || &u - &l > BigInt::one() {
        if &u - &l <= BigInt::one() {
            k += 1;
            l <<= 1;
            u <<= 1;
        }
        let m: BigInt = (&l + &u) >> 1;
        let fm = eval_poly_dyadic(poly, &m, k);
        if fm.is_zero() {
            l = m.clone();
            u = m;
            break;
        }
        if fm.is_positive() == low_positive {
            l = m;
        } else {
            u = m;
        }
    }
    let den = BigInt::one() << k as usize;
    Some((Rational::new(l, den.clone()), Rational::new(u, den)))
}

impl CertifiedInterval {
    /// Isolates a root of `poly` in `[lower, upper]`; requires a strict sign
    /// change at the endpoints.
    pub fn root(poly: Vec<BigInt>, lower: Rational, upper: Rational) -> Option<Self> {
        if lower > upper {
            return None;
        }
        let a = eval_poly(&poly, &lower);
        let b = eval_poly(&poly, &upper);
        if (a.is_negative() && b.is_positive()) || (a.is_positive() && b.is_negative()) {
            Some(CertifiedInterval { lower, upper, source: IntervalSource::Root { poly } })
        } else {
            None
        }
    }

    /// The golden ratio φ = (1 + √5)/2, root of x² − x − 1 in [1, 2].
    pub fn golden_ratio() -> Self {
        let poly = vec![BigInt::from(-1), BigInt::from(-1), BigInt::from(1)];
        Self::root(poly, int_rat(1), int_rat(2)).expect("sign change")
    }

    /// √n for a non-square positive integer n.
    pub fn sqrt(n: u64) -> Option<Self> {
        let r = (n as f64).sqrt().floor() as u64;
        let r = (r.saturating_sub(1)..=r + 1).rev().find(|k| k * k <= n)?;
        if r * r == n {
            return None;
        }
        let poly = vec![-BigInt::from(n), BigInt::zero(), BigInt::one()];
        Self::root(poly, int_rat(r), int_rat(r + 1))
    }

    pub fn lower(&self) -> &BigRational {
        &self.lower
    }

    pub fn upper(&self) -> &BigRational {
        &self.upper
    }

    pub fn source(&self) -> &IntervalSource {
        &self.source
    }

    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }

    pub fn scaled(&self, factor: &BigInt) -> Self {
        let a = mul_dyadic(&self.lower, factor);
        let b = mul_dyadic(&self.upper, factor);
        let (lower, upper) = if a <= b { (a, b) } else { (b, a) };
        CertifiedInterval {
            lower,
            upper,
            source: IntervalSource::Scaled { factor: factor.clone(), base: Box::new(self.clone()) },
        }
    }

    pub fn sum(&self, other: &CertifiedInterval) -> Self {
        CertifiedInterval {
            lower: &self.lower + &other.lower,
            upper: &self.upper + &other.upper,
            source: IntervalSource::Sum {
                left: Box::new(self.clone()),
                right: Box::new(other.clone()),
            },
        }
    }

    pub fn shifted(&self, offset: &Rational) -> Self {
        CertifiedInterval {
            lower: &self.lower + offset,
            upper: &self.upper + offset,
            source: IntervalSource::Shifted { offset: offset.clone(), base: Box::new(self.clone()) },
        }
    }

    /// One refinement step: the returned interval is contained in `self` and
    /// has at most half its width.
    pub fn refine(&self) -> Self {
        let w = self.width();
        if w.is_zero() {
            return self.clone();
        }
        let target = &w / int_rat(2);
        match &self.source {
            IntervalSource::Root { poly } => {
                let mid = (&self.lower + &self.upper) / int_rat(2);
                let fm = eval_poly(poly, &mid);
                let fl = eval_poly(poly, &self.lower);
                let (lower, upper) = if fm.is_zero() {
                    (mid.clone(), mid)
                } else if fm.is_positive() == fl.is_positive() {
                    (mid, self.upper.clone())
                } else {
                    (self.lower.clone(), mid)
                };
                CertifiedInterval { lower, upper, source: self.source.clone() }
            }
            IntervalSource::Scaled { factor, base } => {
                if factor.is_zero() {
                    return self.clone();
                }
                let f = int_rat(factor.abs());
                let base = base.refine_to(&(&target / f));
                base.scaled(factor)
            }
            IntervalSource::Sum { left, right } => {
                let half = &target / int_rat(2);
                left.refine_to(&half).sum(&right.refine_to(&half))
            }
            IntervalSource::Shifted { offset, base } => base.refine_to(&target).shifted(offset),
        }
    }

    /// Refines until the width is at most `width`.
    pub fn refine_to(&self, width: &Rational) -> Self {
        if let IntervalSource::Root { poly } = &self.source {
            if &self.width() > width && width.is_positive() {
                if let Some((lower, upper)) = refine_root_dyadic(poly, &self.lower, &self.upper, width) {
                    return CertifiedInterval { lower, upper, source: self.source.clone() };
                }
            }
        }
        let mut cur = self.clone();
        while &cur.width() > width {
            cur = cur.refine();
        }
        cur
    }

    /// Bounds on the distance of the represented point to ℤ.
    pub fn norm_bounds(&self) -> (BigRational, BigRational) {
        let l = &self.lower;
        let u = &self.upper;
        let half = rat(1, 2);
        let contains_int = u.floor() >= l.ceil();
        let contains_half = (u - &half).floor() >= (l - &half).ceil();
        let dl = dist_to_int(l);
        let du = dist_to_int(u);
        let lo = if contains_int { Rational::zero() } else { dl.clone().min(du.clone()) };
        let hi = if contains_half { half } else { dl.max(du) };
        (lo, hi)
    }
}

impl fmt::Display for CertifiedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_rat(&self.lower), fmt_rat(&self.upper))
    }
}

/// A point of 𝕋: exact, or known only through a certified interval.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CircleValue {
    Exact(CirclePoint),
    Interval(CertifiedInterval),
}

/// Result of [`circle_norm`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormValue {
    Exact(BigRational),
    Bounds { lower: BigRational, upper: BigRational },
}

impl NormValue {
    pub fn upper(&self) -> &BigRational {
        match self {
            NormValue::Exact(v) => v,
            NormValue::Bounds { upper, .. } => upper,
        }
    }

    pub fn lower(&self) -> &BigRational {
        match self {
            NormValue::Exact(v) => v,
            NormValue::Bounds { lower, .. } => lower,
        }
    }
}

/// ‖t‖, the distance of `t` to ℤ.
pub fn circle_norm(t: &CircleValue) -> NormValue {
    match t {
        CircleValue::Exact(p) => NormValue::Exact(p.norm()),
        CircleValue::Interval(i) => {
            let (lower, upper) = i.norm_bounds();
            NormValue::Bounds { lower, upper }
        }
    }
}

impl CircleValue {
    pub fn zero() -> Self {
        CircleValue::Exact(CirclePoint::zero())
    }

    pub fn exact(&self) -> Option<&CirclePoint> {
        match self {
            CircleValue::Exact(p) => Some(p),
            CircleValue::Interval(_) => None,
        }
    }

    pub fn add(&self, other: &CircleValue) -> CircleValue {
        match (self, other) {
            (CircleValue::Exact(a), CircleValue::Exact(b)) => CircleValue::Exact(a.add(b)),
            (CircleValue::Exact(a), CircleValue::Interval(i))
            | (CircleValue::Interval(i), CircleValue::Exact(a)) => {
                CircleValue::Interval(i.shifted(a.value()))
            }
            (CircleValue::Interval(a), CircleValue::Interval(b)) => CircleValue::Interval(a.sum(b)),
        }
    }

    pub fn mul_int(&self, n: &BigInt) -> CircleValue {
        match self {
            CircleValue::Exact(a) => CircleValue::Exact(a.mul_int(n)),
            CircleValue::Interval(_) if n.is_zero() => CircleValue::zero(),
            CircleValue::Interval(i) => CircleValue::Interval(i.scaled(n)),
        }
    }

    pub fn neg(&self) -> CircleValue {
        self.mul_int(&BigInt::from(-1))
    }
}

impl fmt::Display for CircleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircleValue::Exact(p) => p.fmt(f),
            CircleValue::Interval(i) => i.fmt(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_rat;

    #[test]
    fn dyadic_products_are_reduced() {
        for (n, d, f) in [(3i64, 8i64, 4i64), (-5, 16, 6), (7, 3, 9), (0, 1, 5), (1, 4, -8)] {
            let r = Rational::new(n.into(), d.into());
            let got = mul_dyadic(&r, &BigInt::from(f));
            let want = &r * int_rat(BigInt::from(f));
            assert_eq!((got.numer(), got.denom()), (want.numer(), want.denom()));
        }
    }

    #[test]
    fn integer_bisection_agrees_with_rational_bisection() {
        for iv in [CertifiedInterval::golden_ratio(), CertifiedInterval::sqrt(2).unwrap(), CertifiedInterval::sqrt(9_999).unwrap()] {
            let width = Rational::new(BigInt::one(), BigInt::one() << 300usize);
            let fast = iv.refine_to(&width);
            let mut slow = iv.clone();
            while slow.width() > width {
                slow = slow.refine();
            }
            assert!(fast.width() <= width);
            assert!(fast.lower() <= slow.upper() && slow.lower() <= fast.upper(), "{fast} vs {slow}");
            let IntervalSource::Root { poly } = iv.source() else { unreachable!() };
            let (fl, fu) = (eval_poly(poly, fast.lower()), eval_poly(poly, fast.upper()));
            assert!(!(fl * fu).is_positive());
        }
    }

    #[test]
    fn norm_examples() {
        assert_eq!(
            circle_norm(&CircleValue::Exact(CirclePoint::from_ratio(3, 5))),
            NormValue::Exact(rat(2, 5))
        );
        assert_eq!(circle_norm(&CircleValue::zero()), NormValue::Exact(Rational::zero()));
        let iv = CertifiedInterval {
            lower: parse_rat("3819/10000").unwrap(),
            upper: parse_rat("3820/10000").unwrap(),
            source: IntervalSource::Root { poly: vec![] },
        };
        assert_eq!(
            circle_norm(&CircleValue::Interval(iv)),
            NormValue::Bounds {
                lower: parse_rat("3819/10000").unwrap(),
                upper: parse_rat("3820/10000").unwrap()
            }
        );
    }

    #[test]
    fn interval_norm_straddling_integer_and_half() {
        let iv = CertifiedInterval {
            lower: rat(9, 10),
            upper: rat(11, 10),
            source: IntervalSource::Root { poly: vec![] },
        };
        assert_eq!(iv.norm_bounds(), (Rational::zero(), rat(1, 10)));
        let iv = CertifiedInterval {
            lower: rat(4, 10),
            upper: rat(6, 10),
            source: IntervalSource::Root { poly: vec![] },
        };
        assert_eq!(iv.norm_bounds(), (rat(2, 5), rat(1, 2)));
    }

    #[test]
    fn refinement_halves_and_contains_phi() {
        let phi = CertifiedInterval::golden_ratio();
        let mut cur = phi.clone();
        for _ in 0..40 {
            let next = cur.refine();
            assert!(next.width() * int_rat(2) <= cur.width());
            assert!(next.lower() >= cur.lower() && next.upper() <= cur.upper());
            cur = next;
        }
        let approx = crate::arith::approx(cur.lower());
        assert!((approx - 1.618_033_988_749_895).abs() < 1e-9);
    }

    #[test]
    fn scaled_and_summed_refine() {
        let s2 = CertifiedInterval::sqrt(2).unwrap();
        let x = s2.scaled(&BigInt::from(-7)).sum(&CertifiedInterval::golden_ratio());
        let r = x.refine_to(&rat(1, 1_000_000));
        assert!(r.width() <= rat(1, 1_000_000));
        let v = crate::arith::approx(r.lower());
        assert!((v - (-7.0 * 2f64.sqrt() + 1.618_033_988_749_895)).abs() < 1e-5);
        assert!(CertifiedInterval::sqrt(9).is_none());
    }

    #[test]
    fn exact_points_are_canonical() {
        assert_eq!(CirclePoint::from_ratio(7, 4), CirclePoint::from_ratio(-1, 4));
        assert_eq!(CirclePoint::from_ratio(2, 4).value(), &rat(1, 2));
        let a = CirclePoint::from_ratio(2, 3);
        assert_eq!(a.add(&a.neg()), CirclePoint::zero());
        assert_eq!(a.mul_int(&BigInt::from(3)), CirclePoint::zero());
        assert!(!CirclePoint::from_ratio(1, 3).in_t_plus());
        assert!(CirclePoint::from_ratio(1, 4).in_t_plus());
    }
}
