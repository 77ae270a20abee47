//! Structure tests for integer linear recurrences
//! `v_n = c₁v_{n−1} + … + c_r v_{n−r}`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// State budget for the eventual-periodicity search.
pub const PERIOD_BUDGET: usize = 4096;
/// How far to look for a dominance window.
pub const WINDOW_BUDGET: usize = 256;

/// A certified description of the multiplicity structure of a recurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecurrenceShape {
    /// Characteristic polynomial `(x − 1)^r`: the terms follow a polynomial
    /// in `n` of the given degree (computed from finite differences).
    Polynomial { degree: usize },
    /// From `from` on, `|v_n|` is strictly increasing with constant sign.
    Dominant { from: usize },
    /// `v_n` for `n ≥ prefix.len()` repeats `cycle`.
    EventuallyPeriodic { prefix: Vec<BigInt>, cycle: Vec<BigInt> },
}

pub fn step(coeffs: &[BigInt], window: &[BigInt]) -> BigInt {
    // window holds v_{n−r}, …, v_{n−1}
    coeffs.iter().zip(window.iter().rev()).map(|(c, v)| c * v).sum()
}

pub fn terms(coeffs: &[BigInt], init: &[BigInt], count: usize) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = init.iter().take(count).cloned().collect();
    let r = coeffs.len();
    while out.len() < count {
        let next = step(coeffs, &out[out.len() - r..]);
        out.push(next);
    }
    out
}

fn binomial_row(r: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for _ in 0..r {
        let mut next = vec![BigInt::one(); row.len() + 1];
        for i in 1..row.len() {
            next[i] = &row[i - 1] + &row[i];
        }
        row = next;
    }
    row
}

/// Coefficients of `v_n = Σ cᵢ v_{n−i}` for characteristic polynomial
/// `(x − 1)^r`, i.e. `cᵢ = (−1)^{i+1} C(r, i)`.
fn polynomial_coeffs(r: usize) -> Vec<BigInt> {
    let row = binomial_row(r);
    (1..=r).map(|i| if i % 2 == 1 { row[i].clone() } else { -row[i].clone() }).collect()
}

fn polynomial_degree(init: &[BigInt]) -> Option<usize> {
    // highest nonzero forward difference at index 0
    let mut diffs = init.to_vec();
    let mut degree = None;
    for k in 0..init.len() {
        if !diffs[0].is_zero() {
            degree = Some(k);
        }
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    degree
}

fn dominance_window(coeffs: &[BigInt], init: &[BigInt]) -> Option<usize> {
    let r = coeffs.len();
    if r == 1 {
        let c = &coeffs[0];
        return (c.abs() >= BigInt::from(2) && !init[0].is_zero()).then_some(0);
    }
    let nonneg = coeffs.iter().all(|c| !c.is_negative());
    let tail_mass: BigInt = coeffs[1..].iter().sum();
    if !nonneg || coeffs[0] < BigInt::one() || tail_mass < BigInt::one() {
        return None;
    }
    let vals = terms(coeffs, init, WINDOW_BUDGET + r);
    for start in 0..WINDOW_BUDGET {
        let w = &vals[start..start + r];
        for sign in [1i32, -1] {
            let s = BigInt::from(sign);
            let ok = w.iter().all(|v| (v * &s).is_positive())
                && w.windows(2).all(|p| &p[0] * &s <= &p[1] * &s);
            if ok {
                // v_{start+r} > v_{start+r−1} in the signed sense, and so on
                return Some(start + r - 1);
            }
        }
    }
    None
}

fn periodic_form(coeffs: &[BigInt], init: &[BigInt]) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    let r = coeffs.len();
    let mut seen: HashMap<Vec<BigInt>, usize> = HashMap::new();
    let mut vals: Vec<BigInt> = init.to_vec();
    for n in 0..PERIOD_BUDGET {
        let state = vals[n..n + r].to_vec();
        if let Some(&first) = seen.get(&state) {
            let prefix = vals[..first].to_vec();
            let cycle = vals[first..n].to_vec();
            return Some((prefix, cycle));
        }
        seen.insert(state, n);
        let next = step(coeffs, &vals[n..n + r]);
        vals.push(next);
    }
    None
}

/// Certifies one of the supported shapes, or `None`.
pub fn analyze(coeffs: &[BigInt], init: &[BigInt]) -> Option<RecurrenceShape> {
    if let Some(from) = dominance_window(coeffs, init) {
        return Some(RecurrenceShape::Dominant { from });
    }
    if coeffs == polynomial_coeffs(coeffs.len()).as_slice() {
        match polynomial_degree(init) {
            Some(d) if d >= 1 => return Some(RecurrenceShape::Polynomial { degree: d }),
            _ => {}
        }
    }
    periodic_form(coeffs, init)
        .map(|(prefix, cycle)| RecurrenceShape::EventuallyPeriodic { prefix, cycle })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn fibonacci_is_dominant() {
        assert!(matches!(analyze(&b(&[1, 1]), &b(&[1, 1])), Some(RecurrenceShape::Dominant { .. })));
        // starting 0, 1 the window (1, 1) appears at index 1
        assert!(matches!(analyze(&b(&[1, 1]), &b(&[0, 1])), Some(RecurrenceShape::Dominant { .. })));
    }

    #[test]
    fn polynomial_and_periodic_shapes() {
        // v_n = 2v_{n−1} − v_{n−2}: arithmetic progressions
        assert_eq!(
            analyze(&b(&[2, -1]), &b(&[3, 5])),
            Some(RecurrenceShape::Polynomial { degree: 1 })
        );
        // constant progression is periodic
        assert_eq!(
            analyze(&b(&[2, -1]), &b(&[4, 4])),
            Some(RecurrenceShape::EventuallyPeriodic { prefix: vec![], cycle: b(&[4]) })
        );
        // v_n = v_{n−1} − v_{n−2} has period 6
        let s = analyze(&b(&[1, -1]), &b(&[1, 2])).unwrap();
        assert_eq!(
            s,
            RecurrenceShape::EventuallyPeriodic { prefix: vec![], cycle: b(&[1, 2, 1, -1, -2, -1]) }
        );
        // v_n = 0·v_{n−1} + 0·v_{n−2} dies after the initial values
        let s = analyze(&b(&[0, 0]), &b(&[7, 1])).unwrap();
        assert_eq!(s, RecurrenceShape::EventuallyPeriodic { prefix: b(&[7, 1]), cycle: b(&[0]) });
    }

    #[test]
    fn unsupported_growth_is_left_open() {
        // roots 1 and 2 with a sign change in the coefficients
        assert_eq!(analyze(&b(&[3, -2]), &b(&[0, 1])), None);
    }

    #[test]
    fn polynomial_coefficients_match_binomials() {
        assert_eq!(polynomial_coeffs(3), b(&[3, -3, 1]));
        assert_eq!(terms(&b(&[3, -3, 1]), &b(&[0, 1, 4]), 6), b(&[0, 1, 4, 9, 16, 25]));
    }
}
