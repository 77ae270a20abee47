//! The membership oracle for `s_v(X)`.
//!
//! Verdicts are tri-state. Proven verdicts come only from an exact
//! [`Behavior`] of `v_n(x)`; finitely many samples never decide anything.
//! Irrational points yield [`Verdict::Undecided`] with an interval trace.

pub mod behavior;
pub mod bound;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

pub use behavior::{behavior, Behavior, NoRule};
pub use bound::Bound;

use crate::arith::{fmt_rat, rat};
use crate::error::{mismatch, Error, Result};
use crate::groups::circle::{circle_norm, CirclePoint, CircleValue};
use crate::groups::finite::{FiniteAbelian, FiniteSubgroup, DEFAULT_CAP};
use crate::groups::padic::PAdicRational;
use crate::groups::{eval_character, Character, Element, GroupDescriptor};
use crate::radicals::{radical_finite, RadicalPresentation};
use crate::sequences::{CharSequence, Generator};

/// Tunables for [`member`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Largest residue state space or finite group enumerated.
    pub cap: u64,
    /// Last index inspected by interval evidence.
    pub horizon: u64,
    /// Escape threshold; `1/4` is the boundary of `𝕋₊`.
    pub threshold: BigRational,
    /// Target width of each interval in the evidence trace.
    pub precision: BigRational,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            cap: DEFAULT_CAP,
            horizon: 1000,
            threshold: rat(1, 4),
            precision: BigRational::new(1.into(), BigInt::from(10).pow(12)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// `‖v_n(x)‖ ≤ bound(n)` for every `n ≥ start`.
    Vanishing { rule: String, start: u64, bound: Bound },
    /// `‖v_n(x)‖ ≥ norm_floor > 0` for every `n ≥ from_index` with
    /// `n ≡ residue (mod period)`; `value` is the limit along that class.
    Escape {
        rule: String,
        period: u64,
        residue: u64,
        from_index: u64,
        value: CirclePoint,
        norm_floor: BigRational,
        escapes_t_plus: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TracePoint {
    pub n: u64,
    pub lower: BigRational,
    pub upper: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evidence {
    pub horizon: u64,
    /// First index of the tail window `[window_start, horizon]`.
    pub window_start: u64,
    /// Largest norm upper bound over the tail window.
    pub worst_upper: Option<BigRational>,
    /// Indices in the tail window whose norm provably exceeds the threshold.
    pub escapes: u64,
    pub threshold: BigRational,
    pub trace: Vec<TracePoint>,
    /// Set when no decision rule and no interval data exist.
    pub no_rule: bool,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    ProvenIn(Certificate),
    ProvenNotIn(Certificate),
    Undecided(Evidence),
}

impl Verdict {
    pub fn is_in(&self) -> bool {
        matches!(self, Verdict::ProvenIn(_))
    }

    pub fn is_not_in(&self) -> bool {
        matches!(self, Verdict::ProvenNotIn(_))
    }

    pub fn is_undecided(&self) -> bool {
        matches!(self, Verdict::Undecided(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::ProvenIn(_) => "proven-in",
            Verdict::ProvenNotIn(_) => "proven-not-in",
            Verdict::Undecided(_) => "undecided",
        }
    }

    /// Recomputes the verdict and spot-checks the certificate on `samples`
    /// indices against direct evaluation.
    pub fn replay(
        &self,
        group: &GroupDescriptor,
        seq: &CharSequence,
        x: &Element,
        limits: &Limits,
        samples: u64,
    ) -> Result<bool> {
        if member(group, seq, x, limits)? != *self {
            return Ok(false);
        }
        let norm_at = |n: u64| -> Result<(BigRational, BigRational)> {
            let nv = circle_norm(&eval_character(group, &seq.nth(n), x)?);
            Ok((nv.lower().clone(), nv.upper().clone()))
        };
        match self {
            Verdict::ProvenIn(Certificate::Vanishing { start, bound, .. }) => {
                for n in *start..start + samples {
                    if norm_at(n)?.1 > bound.eval(n) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Verdict::ProvenNotIn(Certificate::Escape { period, from_index, norm_floor, .. }) => {
                for j in 0..samples {
                    if norm_at(from_index + j * period)?.0 < *norm_floor {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Verdict::Undecided(_) => Ok(true),
            _ => Ok(false),
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Vanishing { rule, start, bound } => {
                write!(f, "‖v_n(x)‖ ≤ {bound} for n ≥ {start} ({rule})")
            }
            Certificate::Escape { rule, period, residue, from_index, value, norm_floor, escapes_t_plus } => {
                write!(
                    f,
                    "v_n(x) → {value} along n ≡ {residue} mod {period}; ‖v_n(x)‖ ≥ {} for n ≥ {from_index}{} ({rule})",
                    fmt_rat(norm_floor),
                    if *escapes_t_plus { ", outside T+" } else { "" }
                )
            }
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::ProvenIn(c) | Verdict::ProvenNotIn(c) => write!(f, "{}: {c}", self.label()),
            Verdict::Undecided(e) if e.no_rule => write!(f, "undecided: no rule ({})", e.reason),
            Verdict::Undecided(e) => write!(
                f,
                "undecided: horizon {}, worst upper bound {} on [{}, {}], {} escapes past {}",
                e.horizon,
                e.worst_upper.as_ref().map_or("-".into(), fmt_rat),
                e.window_start,
                e.horizon,
                e.escapes,
                fmt_rat(&e.threshold)
            ),
        }
    }
}

/// Decides `x ∈ s_v(X)` where an exact rule exists.
///
/// On finite groups the periodic rule computes exactly `x ∈ n_{Γ^∞}`, which
/// is the finite-group `s_v`; [`s_v_finite`] cross-checks the two routes.
pub fn member(group: &GroupDescriptor, seq: &CharSequence, x: &Element, limits: &Limits) -> Result<Verdict> {
    group.validate()?;
    if seq.group() != group {
        return Err(mismatch(format!("sequence lives on {}, not {group}", seq.group())));
    }
    if let GroupDescriptor::SymbolicCompact(_) = group {
        return Err(Error::Unsupported("membership needs a concrete group".into()));
    }
    x.validate(group)?;
    match behavior(group, seq, x, limits.cap)? {
        Ok(b) if b.vanishes() => Ok(Verdict::ProvenIn(Certificate::Vanishing {
            rule: b.rule,
            start: b.start,
            bound: b.bound,
        })),
        Ok(b) => Ok(Verdict::ProvenNotIn(escape(b, &limits.threshold))),
        Err(NoRule::Inexact) => Ok(Verdict::Undecided(evidence(group, seq, x, limits)?)),
        Err(NoRule::Unsupported(reason)) => Ok(Verdict::Undecided(Evidence {
            horizon: 0,
            window_start: 0,
            worst_upper: None,
            escapes: 0,
            threshold: limits.threshold.clone(),
            trace: Vec::new(),
            no_rule: true,
            reason,
        })),
    }
}

fn escape(b: Behavior, threshold: &BigRational) -> Certificate {
    let (i, nu) = behavior::worst_entry(&b);
    let period = b.period();
    let first = b.start + i as u64;
    let settle = b.bound.settle_index(&(&nu / BigInt::from(2)));
    let from_index = if settle <= first { first } else { first + (settle - first).div_ceil(period) * period };
    let norm_floor = &nu - b.bound.eval(from_index);
    Certificate::Escape {
        rule: b.rule,
        period,
        residue: first % period,
        from_index,
        value: b.pattern[i].clone(),
        escapes_t_plus: &norm_floor > threshold,
        norm_floor,
    }
}

fn evidence(group: &GroupDescriptor, seq: &CharSequence, x: &Element, limits: &Limits) -> Result<Evidence> {
    let horizon = limits.horizon;
    let terms = seq.prefix_terms(horizon as usize + 1);
    // refine an irrational point of 𝕋 once, so every product meets the precision
    let x = match (group, x) {
        (GroupDescriptor::Circle, Element::Circle(CircleValue::Interval(iv))) => {
            let biggest = terms
                .iter()
                .filter_map(|c| match c {
                    Character::Multiplier(n) => Some(n.abs()),
                    _ => None,
                })
                .max()
                .unwrap_or_default()
                .max(BigInt::from(1));
            let width = &limits.precision / biggest;
            Element::Circle(CircleValue::Interval(iv.refine_to(&width)))
        }
        _ => x.clone(),
    };
    let mut trace = Vec::with_capacity(terms.len());
    for (n, chi) in terms.iter().enumerate() {
        let v = match eval_character(group, chi, &x)? {
            CircleValue::Interval(iv) if iv.width() > limits.precision => {
                CircleValue::Interval(iv.refine_to(&limits.precision))
            }
            v => v,
        };
        let nv = circle_norm(&v);
        trace.push(TracePoint { n: n as u64, lower: nv.lower().clone(), upper: nv.upper().clone() });
    }
    let window_start = horizon - horizon / 4;
    let window = &trace[window_start as usize..];
    Ok(Evidence {
        horizon,
        window_start,
        worst_upper: window.iter().map(|t| t.upper.clone()).max(),
        escapes: window.iter().filter(|t| t.lower > limits.threshold).count() as u64,
        threshold: limits.threshold.clone(),
        trace,
        no_rule: false,
        reason: "values are certified intervals; convergence is a tail property".into(),
    })
}

/// `s_v(G)` on a finite group, computed as the annihilator of the characters
/// occurring infinitely often and cross-checked by testing every element
/// against the eventual cycle.
pub fn s_v_finite(group: &FiniteAbelian, seq: &CharSequence, cap: u64) -> Result<FiniteSubgroup> {
    let descriptor = GroupDescriptor::Finite(group.clone());
    if seq.group() != &descriptor {
        return Err(mismatch(format!("sequence lives on {}, not {descriptor}", seq.group())));
    }
    group.check_cap(cap)?;
    let normalized = seq.normalize_dag()?;
    let analysis = normalized.support_partition();
    let gamma_inf = analysis
        .gamma_inf()
        .ok_or_else(|| Error::Undecidable("support of a finite-group sequence".into()))?;
    let residues: Vec<Vec<u64>> = gamma_inf
        .iter()
        .map(|c| match c {
            Character::Residues(r) => Ok(r.clone()),
            other => Err(mismatch(format!("{other:?} is not a character of {group}"))),
        })
        .collect::<Result<_>>()?;
    let RadicalPresentation::Finite(via_radical) = radical_finite(group, &residues, cap)?.presentation else {
        return Err(Error::Internal("finite radical with a non-finite presentation".into()));
    };
    let (prefix, cycle) = seq
        .eventually_periodic_form()
        .ok_or_else(|| Error::Internal("finite-group sequence without a periodic form".into()))?;
    let start = prefix.len() as u64;
    let period = cycle.len() as u64;
    let via_cycle = FiniteSubgroup::from_predicate(group, cap, |x| {
        let x = Element::Residues(x.to_vec());
        (start..start + period).all(|n| {
            eval_character(&descriptor, &seq.nth(n), &x).map(|v| v == CircleValue::zero()).unwrap_or(false)
        })
    })?;
    if via_radical != via_cycle {
        return Err(Error::Internal(format!(
            "annihilator {via_radical} disagrees with eventual-cycle test {via_cycle}"
        )));
    }
    Ok(via_radical)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Autochar {
    /// `s_v(X) = X`, with the certificate schema every element follows and
    /// the sampled verdicts that instantiate it.
    Confirmed { schema: String, samples: Vec<(Element, Verdict)> },
    /// `s_v(X) ≠ X`; `witness` is a point with a `ProvenNotIn` verdict.
    Refuted { reason: String, witness: Option<(Element, Verdict)> },
    Undecided { reason: String, samples: Vec<(Element, Verdict)> },
}

impl Autochar {
    pub fn label(&self) -> &'static str {
        match self {
            Autochar::Confirmed { .. } => "confirmed",
            Autochar::Refuted { .. } => "refuted",
            Autochar::Undecided { .. } => "undecided",
        }
    }
}

/// Tests whether the non-trivial `seq` autocharacterizes `X`, i.e. whether
/// `s_v(X) = X`.
pub fn is_autochar_witness(group: &GroupDescriptor, seq: &CharSequence, limits: &Limits) -> Result<Autochar> {
    match seq.is_eventually_null() {
        Some(true) => return Err(Error::Precondition("the sequence is eventually null".into())),
        Some(false) => {}
        None => {
            return Err(Error::Undecidable("cannot tell whether the sequence is eventually null".into()));
        }
    }
    if seq.group() != group {
        return Err(mismatch(format!("sequence lives on {}, not {group}", seq.group())));
    }
    if let GroupDescriptor::Finite(g) = group {
        let sv = s_v_finite(g, seq, limits.cap)?;
        // a non-zero character in Γ^∞ moves some element off its kernel
        let x = g
            .elements(limits.cap)?
            .into_iter()
            .find(|x| !sv.contains(x))
            .ok_or_else(|| Error::Internal("non-null sequence with s_v(G) = G".into()))?;
        let x = Element::Residues(x);
        let verdict = member(group, seq, &x, limits)?;
        return Ok(Autochar::Refuted {
            reason: format!("s_v(G) = {sv} is a proper subgroup: Γ^∞ holds a non-zero character"),
            witness: Some((x, verdict)),
        });
    }
    let samples = sample_elements(group)?
        .into_iter()
        .map(|x| member(group, seq, &x, limits).map(|v| (x, v)))
        .collect::<Result<Vec<_>>>()?;
    if let Some((x, v)) = samples.iter().find(|(_, v)| v.is_not_in()) {
        return Ok(Autochar::Refuted {
            reason: "a sampled element escapes".into(),
            witness: Some((x.clone(), v.clone())),
        });
    }
    if group.is_compact() {
        return Ok(Autochar::Refuted {
            reason: "a compact group is never characterized by itself through a non-trivial sequence".into(),
            witness: None,
        });
    }
    match schema(group, &seq.simplify()) {
        Some(schema) if samples.iter().all(|(_, v)| v.is_in()) => Ok(Autochar::Confirmed { schema, samples }),
        Some(_) => Ok(Autochar::Undecided { reason: "schema applies but a sample is undecided".into(), samples }),
        None => Ok(Autochar::Undecided { reason: "no certificate schema covers every element".into(), samples }),
    }
}

/// A certificate schema valid for every element, when one is known.
fn schema(group: &GroupDescriptor, seq: &CharSequence) -> Option<String> {
    let covers = |g: &GroupDescriptor, s: &CharSequence| -> Option<String> {
        if s.is_eventually_null() == Some(true) {
            return Some("eventually null".into());
        }
        schema(g, s)
    };
    match (group, seq.generator()) {
        (GroupDescriptor::Integers, Generator::Geometric { ratio, .. }) => {
            Some(format!("‖k·c/{ratio}^n‖ ≤ |k·c|/{ratio}^n"))
        }
        (GroupDescriptor::Integers, Generator::AffineGeometric { offset, ratio, .. }) if offset.is_integer() => {
            Some(format!("‖k·(o + s/{ratio}^n)‖ ≤ |k·s|/{ratio}^n"))
        }
        (GroupDescriptor::Reals, Generator::Harmonic) => Some("‖x/(n+1)‖ ≤ |x|/(n+1)".into()),
        (GroupDescriptor::PAdic(p), Generator::Geometric { ratio, .. })
            if crate::arith::split_prime_power(ratio, *p).0 > 0 =>
        {
            Some(format!("v_{p}(c·x·{ratio}^n) → ∞"))
        }
        (_, Generator::Interleave(u, v)) => Some(format!("interleave({}, {})", covers(group, u)?, covers(group, v)?)),
        (_, Generator::Tail(inner, m)) => Some(format!("tail({}, {m})", covers(group, inner)?)),
        (GroupDescriptor::Product(ga, gb), Generator::Pair(u, w)) => {
            Some(format!("pair({}, {})", covers(ga, u)?, covers(gb, w)?))
        }
        _ => None,
    }
}

/// A fixed, deterministic sample of points of a non-finite group.
pub fn sample_elements(group: &GroupDescriptor) -> Result<Vec<Element>> {
    let rationals = || {
        let mut out = Vec::new();
        for b in [1i64, 2, 3, 5, 9] {
            for a in -12i64..=12 {
                let r = rat(a, b);
                if !out.contains(&r) {
                    out.push(r);
                }
            }
        }
        out
    };
    Ok(match group {
        GroupDescriptor::Integers => (-100i64..=100).map(|k| Element::Integer(k.into())).collect(),
        GroupDescriptor::Reals => rationals().into_iter().map(Element::Real).collect(),
        GroupDescriptor::PAdic(p) => rationals()
            .into_iter()
            .map(|r| PAdicRational::new(*p, r).map(Element::PAdic))
            .collect::<Result<_>>()?,
        GroupDescriptor::Circle => (1i64..=24)
            .flat_map(|q| (0..q).map(move |a| (a, q)))
            .map(|(a, q)| Element::Circle(CircleValue::Exact(CirclePoint::from_ratio(a, q))))
            .collect(),
        GroupDescriptor::Finite(g) => g.elements(DEFAULT_CAP)?.into_iter().map(Element::Residues).collect(),
        GroupDescriptor::Product(a, b) => {
            let xs = sample_elements(a)?;
            let ys = sample_elements(b)?;
            let stride = |n: usize| (n / 12).max(1);
            let (sx, sy) = (stride(xs.len()), stride(ys.len()));
            xs.iter()
                .step_by(sx)
                .flat_map(|x| ys.iter().step_by(sy).map(move |y| Element::pair(x.clone(), y.clone())))
                .collect()
        }
        GroupDescriptor::SymbolicCompact(_) => {
            return Err(Error::Unsupported("symbolic compact descriptors have no concrete elements".into()));
        }
    })
}
